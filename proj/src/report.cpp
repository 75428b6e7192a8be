#include "slameval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "slameval/version.hpp"

namespace slameval {

namespace {

// Score values (rates in [0, 1]) print with 3 decimals; physical quantities
// (meters, seconds, degrees) with 6. Values are serialized as computed;
// rounding happens only in the formatter.
constexpr int kScoreDigits = 3;
constexpr int kQuantityDigits = 6;

std::string fmt(double value, int digits) {
  if (!std::isfinite(value)) {
    if (std::isnan(value)) return "\"nan\"";
    return value > 0.0 ? "\"inf\"" : "\"-inf\"";
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string fmt_opt(const std::optional<double>& value, int digits) {
  return value.has_value() ? fmt(*value, digits) : "null";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

const char* status_name(TimelineSegment::Status status) {
  switch (status) {
    case TimelineSegment::Status::kCorrect: return "correct";
    case TimelineSegment::Status::kIncorrect: return "incorrect";
    case TimelineSegment::Status::kAbsent: return "absent";
  }
  return "absent";
}

std::vector<SequenceEvent> sequence_events(const SequenceEvaluation& eval, bool first_sequence,
                                           const std::string& mode) {
  std::vector<SequenceEvent> events;
  if (eval.timeline.empty()) return events;
  SequenceEvent event;
  event.time = eval.timeline.front().timestamp;
  event.correct = eval.timeline.front().correct;
  const bool reuse_mode = mode == "lifelong" || mode == "pair";
  event.kind = (reuse_mode && !first_sequence) ? "relocalization" : "initialization";
  events.push_back(std::move(event));
  return events;
}

}  // namespace

std::vector<TimelineSegment> build_timeline(std::span<const PoseError> errors, double t_min,
                                            double t_max, double delta) {
  if (!(t_max > t_min)) {
    throw InvalidSpanError("build_timeline: empty or inverted span");
  }
  if (!(delta > 0.0)) {
    throw InvalidInputError("build_timeline: delta must be positive");
  }

  std::vector<TimelineSegment> segments;
  auto push = [&segments](double a, double b, TimelineSegment::Status status) {
    if (!(b > a)) return;
    if (!segments.empty() && segments.back().status == status && segments.back().end == a) {
      segments.back().end = b;
    } else {
      segments.push_back({a, b, status});
    }
  };

  double cursor = t_min;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double t = errors[k].timestamp;
    if (t > t_max) break;
    if (t < cursor) continue;
    push(cursor, t, TimelineSegment::Status::kAbsent);
    const double next = k + 1 < errors.size() ? errors[k + 1].timestamp : t_max;
    const double window_end = std::min({t + delta, next, t_max});
    push(t, window_end,
         errors[k].correct ? TimelineSegment::Status::kCorrect
                           : TimelineSegment::Status::kIncorrect);
    cursor = std::max(cursor, window_end);
  }
  push(cursor, t_max, TimelineSegment::Status::kAbsent);
  return segments;
}

ReportDocument build_report(const SceneEvaluation& scene, const MetricConfig& config,
                            bool scale_free) {
  ReportDocument report;
  report.tool = kToolName;
  report.version = kToolVersion;
  report.mode = scene.mode == EvaluationMode::kLifelong ? "lifelong" : "evaluate";
  report.scene_name = scene.scene_name;
  report.config = config;
  report.scale_free = scale_free;
  report.scene_cr = scene.scene_cr;
  report.scene_cr_inf = scene.scene_cr_inf;
  report.scene_ate_rmse = scene.scene_ate_rmse;

  for (std::size_t i = 0; i < scene.sequences.size(); ++i) {
    SequenceReport seq;
    seq.evaluation = scene.sequences[i];
    seq.timeline = build_timeline(seq.evaluation.timeline, seq.evaluation.t_min,
                                  seq.evaluation.t_max, config.delta);
    seq.events = sequence_events(seq.evaluation, i == 0, report.mode);
    report.sequences.push_back(std::move(seq));
  }
  return report;
}

std::string write_report_json(const ReportDocument& report) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"tool\": " << quote(report.tool) << ",\n";
  out << "  \"version\": " << quote(report.version) << ",\n";
  out << "  \"mode\": " << quote(report.mode) << ",\n";
  out << "  \"scene\": " << quote(report.scene_name) << ",\n";
  out << "  \"scale_free\": " << (report.scale_free ? "true" : "false") << ",\n";
  out << "  \"config\": {\n";
  out << "    \"epsilon\": " << fmt(report.config.epsilon, kQuantityDigits) << ",\n";
  out << "    \"phi\": " << fmt(report.config.phi, kQuantityDigits) << ",\n";
  out << "    \"delta\": " << fmt(report.config.delta, kQuantityDigits) << ",\n";
  out << "    \"tau\": " << fmt(report.config.tau, kQuantityDigits) << ",\n";
  out << "    \"rpe_interval\": " << fmt(report.config.rpe_interval, kQuantityDigits) << "\n";
  out << "  },\n";

  out << "  \"sequences\": [";
  for (std::size_t i = 0; i < report.sequences.size(); ++i) {
    const SequenceReport& seq = report.sequences[i];
    const SequenceEvaluation& e = seq.evaluation;
    out << (i == 0 ? "\n" : ",\n");
    out << "    {\n";
    out << "      \"id\": " << quote(e.sequence_id) << ",\n";
    out << "      \"span\": [" << fmt(e.t_min, kQuantityDigits) << ", "
        << fmt(e.t_max, kQuantityDigits) << "],\n";
    out << "      \"pairs\": " << e.pair_count << ",\n";
    out << "      \"dropped\": " << e.dropped << ",\n";
    out << "      \"aligned\": " << (e.aligned ? "true" : "false") << ",\n";
    out << "      \"note\": " << quote(e.note) << ",\n";
    if (e.aligned) {
      const SimilarityTransform& t = e.alignment.transform;
      out << "      \"alignment\": {\n";
      out << "        \"scale\": " << fmt(t.scale, kQuantityDigits) << ",\n";
      out << "        \"rotation_wxyz\": [" << fmt(t.rotation.w(), kQuantityDigits) << ", "
          << fmt(t.rotation.x(), kQuantityDigits) << ", " << fmt(t.rotation.y(), kQuantityDigits)
          << ", " << fmt(t.rotation.z(), kQuantityDigits) << "],\n";
      out << "        \"translation\": [" << fmt(t.translation.x(), kQuantityDigits) << ", "
          << fmt(t.translation.y(), kQuantityDigits) << ", "
          << fmt(t.translation.z(), kQuantityDigits) << "],\n";
      out << "        \"residual_rmse\": " << fmt(e.alignment.residual_rmse, kQuantityDigits)
          << ",\n";
      out << "        \"degenerate\": " << (e.alignment.degenerate ? "true" : "false") << "\n";
      out << "      },\n";
    } else {
      out << "      \"alignment\": null,\n";
    }
    out << "      \"robustness\": {\n";
    out << "        \"cr\": " << fmt(e.robustness.cr, kScoreDigits) << ",\n";
    out << "        \"cr_t\": " << fmt_opt(e.robustness.cr_t, kScoreDigits) << ",\n";
    out << "        \"cs_r\": " << fmt(e.robustness.cs_r, kScoreDigits) << ",\n";
    out << "        \"cr_inf\": " << fmt(e.cr_inf, kScoreDigits) << ",\n";
    out << "        \"t0\": " << fmt_opt(e.robustness.t0, kQuantityDigits) << "\n";
    out << "      },\n";
    out << "      \"accuracy\": {\n";
    out << "        \"ate_rmse\": " << fmt_opt(e.ate_rmse, kQuantityDigits) << ",\n";
    if (e.accuracy.has_value()) {
      out << "        \"gated_ate_rmse\": " << fmt(e.accuracy->gated_ate_rmse, kQuantityDigits)
          << ",\n";
      out << "        \"gated_rpe_rmse\": " << fmt_opt(e.accuracy->gated_rpe_rmse, kQuantityDigits)
          << ",\n";
      out << "        \"correct_poses\": " << e.accuracy->sample_count << ",\n";
      out << "        \"rpe_pairs\": " << e.accuracy->rpe_sample_count << "\n";
    } else {
      out << "        \"gated_ate_rmse\": null,\n";
      out << "        \"gated_rpe_rmse\": null,\n";
      out << "        \"correct_poses\": 0,\n";
      out << "        \"rpe_pairs\": 0\n";
    }
    out << "      },\n";
    out << "      \"events\": [";
    for (std::size_t j = 0; j < seq.events.size(); ++j) {
      const SequenceEvent& ev = seq.events[j];
      out << (j == 0 ? "\n" : ",\n");
      out << "        {\"time\": " << fmt(ev.time, kQuantityDigits)
          << ", \"correct\": " << (ev.correct ? "true" : "false")
          << ", \"kind\": " << quote(ev.kind) << "}";
    }
    out << (seq.events.empty() ? "],\n" : "\n      ],\n");
    out << "      \"timeline\": [";
    for (std::size_t j = 0; j < seq.timeline.size(); ++j) {
      const TimelineSegment& s = seq.timeline[j];
      out << (j == 0 ? "\n" : ",\n");
      out << "        {\"start\": " << fmt(s.start, kQuantityDigits)
          << ", \"end\": " << fmt(s.end, kQuantityDigits)
          << ", \"status\": " << quote(status_name(s.status)) << "}";
    }
    out << (seq.timeline.empty() ? "]\n" : "\n      ]\n");
    out << "    }";
  }
  out << (report.sequences.empty() ? "],\n" : "\n  ],\n");

  out << "  \"scene_summary\": {\n";
  out << "    \"cr\": " << fmt(report.scene_cr, kScoreDigits) << ",\n";
  out << "    \"cr_inf\": " << fmt(report.scene_cr_inf, kScoreDigits) << ",\n";
  out << "    \"ate_rmse\": " << fmt_opt(report.scene_ate_rmse, kQuantityDigits) << ",\n";
  out << "    \"pair_cs_r\": " << fmt_opt(report.pair_cs_r, kScoreDigits) << "\n";
  out << "  }\n";
  out << "}\n";
  return out.str();
}

std::string write_pose_errors_csv(const ReportDocument& report) {
  std::ostringstream out;
  out << "sequence,timestamp,ate_m,aoe_deg,correct\n";
  char buffer[160];
  for (const SequenceReport& seq : report.sequences) {
    for (const PoseError& e : seq.evaluation.timeline) {
      std::snprintf(buffer, sizeof(buffer), "%s,%.6f,%.6f,%.6f,%d\n",
                    seq.evaluation.sequence_id.c_str(), e.timestamp, e.ate, e.aoe,
                    e.correct ? 1 : 0);
      out << buffer;
    }
  }
  return out.str();
}

std::string render_timeline_svg(const ReportDocument& report) {
  constexpr double kPlotLeft = 110.0;
  constexpr double kPlotWidth = 700.0;
  constexpr double kTop = 52.0;
  constexpr double kTrackHeight = 18.0;
  constexpr double kTrackGap = 10.0;
  constexpr double kAxisHeight = 34.0;

  const std::size_t tracks = report.sequences.size();
  const double height =
      kTop + static_cast<double>(tracks) * (kTrackHeight + kTrackGap) + kAxisHeight;
  const double width = kPlotLeft + kPlotWidth + 24.0;

  double t0 = 0.0;
  double t1 = 1.0;
  if (tracks > 0) {
    t0 = report.sequences.front().evaluation.t_min;
    t1 = report.sequences.front().evaluation.t_max;
    for (const SequenceReport& seq : report.sequences) {
      t0 = std::min(t0, seq.evaluation.t_min);
      t1 = std::max(t1, seq.evaluation.t_max);
    }
  }
  const double span = t1 > t0 ? t1 - t0 : 1.0;
  auto x_of = [&](double t) { return kPlotLeft + (t - t0) / span * kPlotWidth; };

  auto num = [](double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    return std::string(buffer);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
  out << "<style>text{font-family:monospace;font-size:12px;fill:#333}</style>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << num(kPlotLeft) << "\" y=\"20\">" << report.scene_name << " ("
      << report.mode << ")</text>\n";

  // Legend.
  out << "<rect x=\"" << num(kPlotLeft) << "\" y=\"30\" width=\"12\" height=\"12\" "
         "fill=\"#2b6cb0\"/><text x=\"" << num(kPlotLeft + 16.0) << "\" y=\"40\">correct</text>\n";
  out << "<rect x=\"" << num(kPlotLeft + 90.0) << "\" y=\"30\" width=\"12\" height=\"12\" "
         "fill=\"#c53030\"/><text x=\"" << num(kPlotLeft + 106.0)
      << "\" y=\"40\">incorrect</text>\n";
  out << "<rect x=\"" << num(kPlotLeft + 196.0) << "\" y=\"30\" width=\"12\" height=\"12\" "
         "fill=\"#d9d9d9\"/><text x=\"" << num(kPlotLeft + 212.0)
      << "\" y=\"40\">absent</text>\n";

  for (std::size_t i = 0; i < tracks; ++i) {
    const SequenceReport& seq = report.sequences[i];
    const double y = kTop + static_cast<double>(i) * (kTrackHeight + kTrackGap);
    out << "<text x=\"8\" y=\"" << num(y + kTrackHeight - 5.0) << "\">"
        << seq.evaluation.sequence_id << "</text>\n";
    for (const TimelineSegment& s : seq.timeline) {
      const char* fill = "#d9d9d9";
      if (s.status == TimelineSegment::Status::kCorrect) fill = "#2b6cb0";
      if (s.status == TimelineSegment::Status::kIncorrect) fill = "#c53030";
      out << "<rect x=\"" << num(x_of(s.start)) << "\" y=\"" << num(y) << "\" width=\""
          << num((s.end - s.start) / span * kPlotWidth) << "\" height=\"" << num(kTrackHeight)
          << "\" fill=\"" << fill << "\"/>\n";
    }
    for (const SequenceEvent& ev : seq.events) {
      const double cx = x_of(ev.time);
      const double cy = y + kTrackHeight / 2.0;
      if (ev.correct) {
        out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy)
            << "\" r=\"5\" fill=\"#2b6cb0\" stroke=\"#ffffff\" stroke-width=\"1.5\"/>\n";
      } else {
        out << "<path d=\"M " << num(cx - 5.0) << " " << num(cy - 5.0) << " L " << num(cx + 5.0)
            << " " << num(cy + 5.0) << " M " << num(cx - 5.0) << " " << num(cy + 5.0) << " L "
            << num(cx + 5.0) << " " << num(cy - 5.0)
            << "\" stroke=\"#c53030\" stroke-width=\"2.5\" fill=\"none\"/>\n";
      }
    }
  }

  // Time axis with five evenly spaced ticks.
  const double axis_y = kTop + static_cast<double>(tracks) * (kTrackHeight + kTrackGap) + 8.0;
  out << "<line x1=\"" << num(kPlotLeft) << "\" y1=\"" << num(axis_y) << "\" x2=\""
      << num(kPlotLeft + kPlotWidth) << "\" y2=\"" << num(axis_y)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double t = t0 + span * static_cast<double>(tick) / 4.0;
    const double x = x_of(t);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(axis_y + 4.0) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(x - 14.0) << "\" y=\"" << num(axis_y + 18.0) << "\">" << num(t)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace slameval
