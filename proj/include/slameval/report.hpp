#pragma once

#include <string>
#include <vector>

#include "slameval/lifelong.hpp"

namespace slameval {

// Contiguous stretch of the data span with one display status. Segments of a
// sequence partition [t_min, t_max] exactly: no gaps, no overlap, adjacent
// segments never share a status.
struct TimelineSegment {
  enum class Status { kCorrect, kIncorrect, kAbsent };
  double start = 0.0;
  double end = 0.0;
  Status status = Status::kAbsent;
};

// Builds the display timeline from per-pose outcomes: an estimate at t_k
// covers [t_k, min(t_k + delta, next timestamp, t_max)); uncovered time is
// absent. Empty input yields a single absent segment.
std::vector<TimelineSegment> build_timeline(std::span<const PoseError> errors, double t_min,
                                            double t_max, double delta);

// First-estimate event of a sequence: a successful or failed initialization
// (first sequence) or re-localization (later sequences under map reuse).
struct SequenceEvent {
  double time = 0.0;
  bool correct = false;
  std::string kind;  // "initialization" or "relocalization"
};

struct SequenceReport {
  SequenceEvaluation evaluation;
  std::vector<TimelineSegment> timeline;
  std::vector<SequenceEvent> events;  // empty when the sequence never localized
};

struct ReportDocument {
  std::string tool;
  std::string version;
  std::string mode;  // "evaluate", "lifelong", or "pair"
  std::string scene_name;
  MetricConfig config;
  bool scale_free = false;
  std::vector<SequenceReport> sequences;
  double scene_cr = 0.0;
  double scene_cr_inf = 0.0;
  std::optional<double> scene_ate_rmse;
  std::optional<double> pair_cs_r;  // pair mode only
};

ReportDocument build_report(const SceneEvaluation& scene, const MetricConfig& config,
                            bool scale_free);

// Deterministic JSON: fixed key order, fixed decimal precision (6 digits for
// meters / seconds / degrees, 3 for scores), non-finite numbers as strings.
// Identical inputs give identical bytes.
std::string write_report_json(const ReportDocument& report);

// Per-pose error table: sequence, timestamp, ate, aoe, correct.
std::string write_pose_errors_csv(const ReportDocument& report);

// Timeline strip chart, one track per sequence: correct / incorrect / absent
// segments plus initialization and re-localization markers. Deterministic
// bytes; an empty report still renders a valid document.
std::string render_timeline_svg(const ReportDocument& report);

}  // namespace slameval
