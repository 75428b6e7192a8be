#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "slameval/errors.hpp"
#include "slameval/report.hpp"
#include "slameval/synthgen.hpp"

namespace {

using namespace slameval;

std::mt19937_64 rng(20240814);

PoseError flag(double timestamp, bool correct) {
  return {timestamp, 0.0, 0.0, correct};
}

std::size_t count_substr(const std::string& haystack, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

// Two-sequence scene under map reuse: the first sequence matches the shared
// map, the second is 10 m off the whole way.
SceneEvaluation jump_scene(MetricConfig config) {
  SceneManifest manifest;
  manifest.scene_name = "strip";
  manifest.metric_config = config;
  SequenceSpec s1, s2;
  s1.id = "s1";
  s1.ground_truth_path = "unused";
  s1.t_min = 0.0;
  s1.t_max = 29.9;
  s2 = s1;
  s2.id = "s2";
  s2.t_min = 100.0;
  s2.t_max = 129.9;
  manifest.sequences = {s1, s2};

  const std::vector<Trajectory> gts = {
      generate_trajectory(PathKind::kLoop, 30.0, 10.0, 71, 0.0),
      generate_trajectory(PathKind::kCorridor, 30.0, 10.0, 72, 100.0)};
  std::vector<Trajectory> ests = gts;
  for (TimedPose& r : ests[1].records) r.pose.translation += Vector3d(10.0, 0.0, 0.0);
  return evaluate_lifelong(manifest, ests, gts);
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("timeline segments partition the span exactly") {
  std::uniform_real_distribution<double> gap(0.05, 2.0);
  std::bernoulli_distribution good(0.6);
  for (int trial = 0; trial < 50; ++trial) {
    const double t_min = 0.0, t_max = 25.0;
    std::vector<PoseError> errors;
    double t = gap(rng);
    while (t < t_max) {
      errors.push_back(flag(t, good(rng)));
      t += gap(rng);
    }
    const double delta = trial % 2 == 0 ? 0.5 : 1.5;
    const std::vector<TimelineSegment> segments =
        build_timeline(errors, t_min, t_max, delta);
    REQUIRE_FALSE(segments.empty());
    CHECK(segments.front().start == t_min);
    CHECK(segments.back().end == t_max);
    for (std::size_t i = 0; i < segments.size(); ++i) {
      CHECK(segments[i].end > segments[i].start);
      if (i > 0) {
        CHECK(segments[i].start == segments[i - 1].end);
        CHECK(segments[i].status != segments[i - 1].status);
      }
    }
  }
}

TEST_CASE("timeline hand case: merge, gap, failure, tail") {
  const std::vector<PoseError> errors = {flag(0.0, true), flag(1.0, true), flag(2.5, false),
                                         flag(4.0, true)};
  const std::vector<TimelineSegment> segments = build_timeline(errors, 0.0, 6.0, 1.0);
  REQUIRE(segments.size() == 6);
  using Status = TimelineSegment::Status;
  CHECK(segments[0].status == Status::kCorrect);    // [0, 2): two merged windows
  CHECK(segments[0].end == 2.0);
  CHECK(segments[1].status == Status::kAbsent);     // [2, 2.5)
  CHECK(segments[2].status == Status::kIncorrect);  // [2.5, 3.5)
  CHECK(segments[2].end == 3.5);
  CHECK(segments[3].status == Status::kAbsent);     // [3.5, 4)
  CHECK(segments[4].status == Status::kCorrect);    // [4, 5)
  CHECK(segments[5].status == Status::kAbsent);     // [5, 6]
  CHECK(segments[5].end == 6.0);
}

TEST_CASE("timeline with no estimates is one absent segment") {
  const std::vector<TimelineSegment> segments = build_timeline({}, 3.0, 9.0, 1.0);
  REQUIRE(segments.size() == 1);
  CHECK(segments[0].start == 3.0);
  CHECK(segments[0].end == 9.0);
  CHECK(segments[0].status == TimelineSegment::Status::kAbsent);
}

TEST_CASE("contiguous correct coverage merges into a single segment") {
  std::vector<PoseError> errors;
  for (int i = 0; i < 60; ++i) errors.push_back(flag(0.1 * i, true));
  const std::vector<TimelineSegment> segments = build_timeline(errors, 0.0, 6.0, 1.0);
  REQUIRE(segments.size() == 1);
  CHECK(segments[0].status == TimelineSegment::Status::kCorrect);
}

TEST_CASE("timeline validates its span and delta") {
  CHECK_THROWS_AS(build_timeline({}, 5.0, 5.0, 1.0), InvalidSpanError);
  CHECK_THROWS_AS(build_timeline({}, 0.0, 5.0, 0.0), InvalidInputError);
}

TEST_CASE("report document carries modes and first-pose events") {
  MetricConfig config;
  const SceneEvaluation scene = jump_scene(config);
  const ReportDocument report = build_report(scene, config, false);
  CHECK(report.mode == "lifelong");
  CHECK(report.scene_name == "strip");
  REQUIRE(report.sequences.size() == 2);

  REQUIRE(report.sequences[0].events.size() == 1);
  CHECK(report.sequences[0].events[0].kind == "initialization");
  CHECK(report.sequences[0].events[0].correct);
  REQUIRE(report.sequences[1].events.size() == 1);
  CHECK(report.sequences[1].events[0].kind == "relocalization");
  CHECK_FALSE(report.sequences[1].events[0].correct);
  CHECK_FALSE(report.sequences[0].timeline.empty());
}

TEST_CASE("json output is byte-deterministic and reads back") {
  MetricConfig config;
  config.phi = kInfinity;
  const SceneEvaluation scene = jump_scene(config);
  const ReportDocument report = build_report(scene, config, false);

  const std::string a = write_report_json(report);
  const std::string b = write_report_json(report);
  CHECK(a == b);

  const nlohmann::json doc = nlohmann::json::parse(a);
  CHECK(doc.at("tool").get<std::string>() == "slameval");
  CHECK(doc.at("mode").get<std::string>() == "lifelong");
  CHECK(doc.at("scale_free").get<bool>() == false);
  CHECK(doc.at("config").at("epsilon").get<double>() == doctest::Approx(1.0));
  // Non-finite thresholds serialize as strings so any JSON parser can read them.
  CHECK(doc.at("config").at("phi").get<std::string>() == "inf");

  const auto& sequences = doc.at("sequences");
  REQUIRE(sequences.size() == 2);
  CHECK(sequences[0].at("id").get<std::string>() == "s1");
  CHECK(sequences[0].at("aligned").get<bool>());
  CHECK(sequences[0].at("alignment").at("rotation_wxyz").size() == 4);
  CHECK(std::abs(sequences[0].at("robustness").at("cr").get<double>() -
                 scene.sequences[0].robustness.cr) <= 5e-4);
  CHECK(std::abs(sequences[1].at("accuracy").at("ate_rmse").get<double>() -
                 *scene.sequences[1].ate_rmse) <= 5e-7);
  CHECK(sequences[1].at("accuracy").at("gated_ate_rmse").is_null());
  CHECK(sequences[1].at("events")[0].at("kind").get<std::string>() == "relocalization");
  CHECK(std::abs(doc.at("scene_summary").at("cr").get<double>() - scene.scene_cr) <= 5e-4);
  CHECK(doc.at("scene_summary").at("pair_cs_r").is_null());

  ReportDocument with_pair = report;
  with_pair.pair_cs_r = 0.5;
  const nlohmann::json pair_doc = nlohmann::json::parse(write_report_json(with_pair));
  CHECK(pair_doc.at("scene_summary").at("pair_cs_r").get<double>() == doctest::Approx(0.5));
}

TEST_CASE("csv lists one row per matched pose") {
  MetricConfig config;
  const SceneEvaluation scene = jump_scene(config);
  const ReportDocument report = build_report(scene, config, false);
  const std::string csv = write_pose_errors_csv(report);

  std::size_t expected = 1;  // header
  for (const SequenceReport& seq : report.sequences) {
    expected += seq.evaluation.timeline.size();
  }
  CHECK(count_substr(csv, "\n") == expected);
  CHECK(csv.rfind("sequence,timestamp,ate_m,aoe_deg,correct\n", 0) == 0);

  const std::size_t first_row = csv.find('\n') + 1;
  const std::string row = csv.substr(first_row, csv.find('\n', first_row) - first_row);
  CHECK(row.rfind("s1,", 0) == 0);
  CHECK(count_substr(row, ",") == 4);
  CHECK((row.back() == '0' || row.back() == '1'));
}

TEST_CASE("svg renders one rectangle per segment and is deterministic") {
  MetricConfig config;
  const SceneEvaluation scene = jump_scene(config);
  const ReportDocument report = build_report(scene, config, false);
  const std::string svg = render_timeline_svg(report);
  CHECK(svg == render_timeline_svg(report));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("strip") != std::string::npos);

  std::size_t segments = 0;
  for (const SequenceReport& seq : report.sequences) segments += seq.timeline.size();
  // Background and three legend swatches account for the extra four.
  CHECK(count_substr(svg, "<rect") == segments + 4);
  CHECK(count_substr(svg, "<circle") == 1);  // correct first pose of sequence 1
  CHECK(count_substr(svg, "<path") == 1);    // failed first pose of sequence 2
  CHECK(svg.find("#2b6cb0") != std::string::npos);
  CHECK(svg.find("#c53030") != std::string::npos);
}

TEST_CASE("empty report still renders a valid svg shell") {
  const ReportDocument report;
  const std::string svg = render_timeline_svg(report);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_substr(svg, "<rect") == 4);
}

}  // TEST_SUITE
