#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "slameval/errors.hpp"
#include "slameval/synthgen.hpp"

namespace {

using namespace slameval;

std::string as_bytes(const Trajectory& t) {
  std::ostringstream out;
  serialize_trajectory(t, out);
  return out.str();
}

constexpr PathKind kAllKinds[] = {PathKind::kLoop, PathKind::kCorridor, PathKind::kUShape,
                                  PathKind::kBackAndForth};

}  // namespace

TEST_SUITE("synthgen") {

TEST_CASE("sampling grid: count, spacing, start time") {
  for (PathKind kind : kAllKinds) {
    const Trajectory t = generate_trajectory(kind, 10.0, 100.0, 7, 50.0);
    REQUIRE(t.size() == 1000);
    CHECK(std::abs(t.start_time() - 50.0) <= 1e-12);
    CHECK(std::abs(t.end_time() - 59.99) <= 1e-9);
    for (std::size_t i = 1; i < t.size(); ++i) {
      CHECK(t.records[i].timestamp > t.records[i - 1].timestamp);
    }
    for (const TimedPose& r : t.records) {
      CHECK(r.pose.translation.z() == 0.0);
      CHECK(std::abs(r.pose.rotation.norm() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("loop closes on itself") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Trajectory t = generate_trajectory(PathKind::kLoop, 60.0, 10.0, seed);
    const RigidTransform& first = t.records.front().pose;
    const RigidTransform& last = t.records.back().pose;
    CHECK((first.translation - last.translation).norm() <= 1e-9);
    CHECK(rotation_angle_deg(first.rotation, last.rotation) <= 1e-7);
  }
}

TEST_CASE("same seed reproduces the same bytes, different seed does not") {
  for (PathKind kind : kAllKinds) {
    const std::string a = as_bytes(generate_trajectory(kind, 20.0, 10.0, 42));
    const std::string b = as_bytes(generate_trajectory(kind, 20.0, 10.0, 42));
    const std::string c = as_bytes(generate_trajectory(kind, 20.0, 10.0, 43));
    CHECK(a == b);
    CHECK(a != c);
  }
}

TEST_CASE("start_time shifts timestamps only") {
  const Trajectory base = generate_trajectory(PathKind::kCorridor, 10.0, 10.0, 5, 0.0);
  const Trajectory moved = generate_trajectory(PathKind::kCorridor, 10.0, 10.0, 5, 100.0);
  REQUIRE(base.size() == moved.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(std::abs(moved.records[i].timestamp - base.records[i].timestamp - 100.0) <= 1e-12);
    CHECK(moved.records[i].pose.translation == base.records[i].pose.translation);
  }
}

TEST_CASE("path kind names round-trip and reject unknowns") {
  for (PathKind kind : kAllKinds) {
    CHECK(parse_path_kind(path_kind_name(kind)) == kind);
  }
  CHECK(parse_path_kind("u_shape") == PathKind::kUShape);
  CHECK(parse_path_kind("back_and_forth") == PathKind::kBackAndForth);
  CHECK_THROWS_AS(parse_path_kind("spiral"), InvalidInputError);
}

TEST_CASE("degenerate sampling parameters are rejected") {
  CHECK_THROWS_AS(generate_trajectory(PathKind::kLoop, 0.0, 10.0, 1), InvalidInputError);
  CHECK_THROWS_AS(generate_trajectory(PathKind::kLoop, -1.0, 10.0, 1), InvalidInputError);
  CHECK_THROWS_AS(generate_trajectory(PathKind::kLoop, 10.0, 0.0, 1), InvalidInputError);
  CHECK_THROWS_AS(generate_trajectory(PathKind::kLoop, 0.05, 10.0, 1), InvalidInputError);
}

TEST_CASE("all-default spec is the identity, bit for bit") {
  const Trajectory t = generate_trajectory(PathKind::kUShape, 15.0, 20.0, 9);
  PerturbationSpec spec;
  CHECK(spec.is_identity());
  CHECK(as_bytes(perturb(t, spec, 123)) == as_bytes(t));

  Trajectory empty;
  CHECK(perturb(empty, spec, 1).records.empty());
}

TEST_CASE("time shift moves every timestamp by the same amount") {
  const Trajectory t = generate_trajectory(PathKind::kLoop, 10.0, 10.0, 3);
  PerturbationSpec spec;
  spec.time_shift = 0.05;
  const Trajectory shifted = perturb(t, spec, 0);
  REQUIRE(shifted.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(shifted.records[i].timestamp - t.records[i].timestamp - 0.05) <= 1e-12);
    CHECK(shifted.records[i].pose.translation == t.records[i].pose.translation);
  }
}

TEST_CASE("frame offset maps every pose through the given transform") {
  const Trajectory t = generate_trajectory(PathKind::kCorridor, 10.0, 10.0, 4);
  PerturbationSpec spec;
  spec.frame_offset.scale = 1.5;
  spec.frame_offset.rotation = Quaterniond(Eigen::AngleAxisd(0.7, Vector3d(1, 2, 3).normalized()));
  spec.frame_offset.translation = {4.0, -1.0, 2.0};
  const Trajectory moved = perturb(t, spec, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const RigidTransform expected = spec.frame_offset.apply(t.records[i].pose);
    CHECK((moved.records[i].pose.translation - expected.translation).norm() <= 1e-12);
    CHECK(rotation_angle_deg(moved.records[i].pose.rotation, expected.rotation) <= 1e-9);
  }
}

TEST_CASE("translation drift grows linearly from the first record") {
  const double rate_mps = 0.05;
  const Trajectory t = generate_trajectory(PathKind::kLoop, 10.0, 10.0, 6);
  PerturbationSpec spec;
  spec.drift_translation_rate = rate_mps;
  const Trajectory drifted = perturb(t, spec, 0);
  const double t0 = t.start_time();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Vector3d diff = drifted.records[i].pose.translation - t.records[i].pose.translation;
    const double dt = t.records[i].timestamp - t0;
    CHECK(std::abs(diff.x() - rate_mps * dt) <= 1e-12);
    CHECK(diff.y() == 0.0);
    CHECK(diff.z() == 0.0);
  }
  const double total = t.end_time() - t0;
  const Vector3d last_diff =
      drifted.records.back().pose.translation - t.records.back().pose.translation;
  CHECK(std::abs(last_diff.norm() - rate_mps * total) <= 1e-9);
}

TEST_CASE("rotation drift accumulates yaw at the stated rate") {
  const double rate_dps = 2.0;
  const Trajectory t = generate_trajectory(PathKind::kCorridor, 10.0, 10.0, 8);
  PerturbationSpec spec;
  spec.drift_rotation_rate = rate_dps;
  const Trajectory drifted = perturb(t, spec, 0);
  const double t0 = t.start_time();
  for (std::size_t i = 0; i < t.size(); i += 7) {
    const double expected = rate_dps * (t.records[i].timestamp - t0);
    CHECK(std::abs(rotation_angle_deg(drifted.records[i].pose.rotation,
                                      t.records[i].pose.rotation) -
                   expected) <= 1e-9);
  }
}

TEST_CASE("noise is seed-deterministic with the expected magnitude") {
  const double sigma = 0.05;
  const Trajectory t = generate_trajectory(PathKind::kBackAndForth, 100.0, 10.0, 11);
  PerturbationSpec spec;
  spec.noise_translation_sigma = sigma;

  const Trajectory a = perturb(t, spec, 99);
  const Trajectory b = perturb(t, spec, 99);
  const Trajectory c = perturb(t, spec, 100);
  CHECK(as_bytes(a) == as_bytes(b));
  CHECK(as_bytes(a) != as_bytes(c));

  double sum_sq = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sum_sq += (a.records[i].pose.translation - t.records[i].pose.translation).squaredNorm();
  }
  // Isotropic three-axis noise: RMS displacement should sit near sqrt(3)*sigma.
  const double rms = std::sqrt(sum_sq / static_cast<double>(t.size()));
  CHECK(rms >= 1.6 * sigma);
  CHECK(rms <= 1.85 * sigma);
}

TEST_CASE("rotation noise perturbs attitude by about sigma degrees") {
  const double sigma_deg = 1.0;
  const Trajectory t = generate_trajectory(PathKind::kLoop, 100.0, 10.0, 12);
  PerturbationSpec spec;
  spec.noise_rotation_sigma = sigma_deg;
  const Trajectory noisy = perturb(t, spec, 7);

  double mean_angle = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mean_angle += rotation_angle_deg(noisy.records[i].pose.rotation, t.records[i].pose.rotation);
    CHECK(noisy.records[i].pose.translation == t.records[i].pose.translation);
  }
  mean_angle /= static_cast<double>(t.size());
  // E|N(0, sigma)| = sigma * sqrt(2/pi) ~ 0.798 sigma.
  CHECK(mean_angle >= 0.72 * sigma_deg);
  CHECK(mean_angle <= 0.88 * sigma_deg);
}

TEST_CASE("dropouts remove exactly the records inside the windows") {
  const Trajectory t = generate_trajectory(PathKind::kCorridor, 10.0, 10.0, 13);
  REQUIRE(t.size() == 100);
  PerturbationSpec spec;
  spec.dropout_windows = {{2.0, 3.0}, {5.0, 5.45}};
  const Trajectory gapped = perturb(t, spec, 0);
  CHECK(gapped.size() == 100 - 11 - 5);
  for (const TimedPose& r : gapped.records) {
    CHECK_FALSE((r.timestamp >= 2.0 && r.timestamp <= 3.0));
    CHECK_FALSE((r.timestamp >= 5.0 && r.timestamp <= 5.45));
  }
}

TEST_CASE("bad dropout windows are rejected") {
  const Trajectory t = generate_trajectory(PathKind::kCorridor, 10.0, 10.0, 14);
  PerturbationSpec overlapping;
  overlapping.dropout_windows = {{1.0, 3.0}, {2.5, 4.0}};
  CHECK_THROWS_AS(perturb(t, overlapping, 0), InvalidInputError);

  PerturbationSpec outside;
  outside.dropout_windows = {{8.0, 12.0}};
  CHECK_THROWS_AS(perturb(t, outside, 0), InvalidInputError);

  PerturbationSpec reversed;
  reversed.dropout_windows = {{4.0, 2.0}};
  CHECK_THROWS_AS(perturb(t, reversed, 0), InvalidInputError);
}

TEST_CASE("jump displaces poses at and after the jump time") {
  const Trajectory t = generate_trajectory(PathKind::kLoop, 10.0, 10.0, 15);
  PerturbationSpec spec;
  spec.jump = {{5.0, Vector3d(10.0, 0.0, -1.0)}};
  const Trajectory jumped = perturb(t, spec, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Vector3d diff = jumped.records[i].pose.translation - t.records[i].pose.translation;
    if (t.records[i].timestamp >= 5.0) {
      CHECK((diff - Vector3d(10.0, 0.0, -1.0)).norm() == 0.0);
    } else {
      CHECK(diff.norm() == 0.0);
    }
  }
}

TEST_CASE("stages apply in order: jump times refer to shifted clocks") {
  const Trajectory t = generate_trajectory(PathKind::kCorridor, 10.0, 1.0, 16);
  PerturbationSpec spec;
  spec.time_shift = 100.0;
  spec.jump = {{105.0, Vector3d(1.0, 0.0, 0.0)}};
  const Trajectory out = perturb(t, spec, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool moved =
        (out.records[i].pose.translation - t.records[i].pose.translation).norm() > 0.0;
    CHECK(moved == (out.records[i].timestamp >= 105.0));
  }
}

TEST_CASE("perturbation spec parses from JSON") {
  std::istringstream in(R"({
    "time_shift": 0.25,
    "frame_offset": {"scale": 2.0, "rotation_wxyz": [1, 0, 0, 0], "translation": [1, 2, 3]},
    "drift_translation_rate": 0.01,
    "drift_rotation_rate": 0.5,
    "noise_translation_sigma": 0.02,
    "noise_rotation_sigma": 0.1,
    "dropout_windows": [[1.0, 2.0], [4.0, 4.5]],
    "jump": {"time": 3.0, "displacement": [5, 0, 0]}
  })");
  const PerturbationSpec spec = parse_perturbation_spec(in);
  CHECK(spec.time_shift == 0.25);
  CHECK(spec.frame_offset.scale == 2.0);
  CHECK(spec.frame_offset.translation == Vector3d(1.0, 2.0, 3.0));
  CHECK(spec.drift_translation_rate == 0.01);
  CHECK(spec.drift_rotation_rate == 0.5);
  CHECK(spec.noise_translation_sigma == 0.02);
  CHECK(spec.noise_rotation_sigma == 0.1);
  REQUIRE(spec.dropout_windows.size() == 2);
  CHECK(spec.dropout_windows[1].second == 4.5);
  REQUIRE(spec.jump.has_value());
  CHECK(spec.jump->first == 3.0);
  CHECK(spec.jump->second == Vector3d(5.0, 0.0, 0.0));
  CHECK_FALSE(spec.is_identity());

  std::istringstream empty("{}");
  CHECK(parse_perturbation_spec(empty).is_identity());
}

TEST_CASE("malformed perturbation specs are rejected") {
  std::istringstream truncated("{\"time_shift\":");
  CHECK_THROWS_AS(parse_perturbation_spec(truncated), InvalidInputError);

  std::istringstream short_quaternion(R"({"frame_offset": {"rotation_wxyz": [1, 0, 0]}})");
  CHECK_THROWS_AS(parse_perturbation_spec(short_quaternion), InvalidInputError);

  std::istringstream bad_scale(R"({"frame_offset": {"scale": -1.0}})");
  CHECK_THROWS_AS(parse_perturbation_spec(bad_scale), InvalidInputError);

  std::istringstream bad_window(R"({"dropout_windows": [[1.0]]})");
  CHECK_THROWS_AS(parse_perturbation_spec(bad_window), InvalidInputError);

  std::istringstream not_a_number(R"({"time_shift": "soon"})");
  CHECK_THROWS_AS(parse_perturbation_spec(not_a_number), InvalidInputError);
}

}  // TEST_SUITE
