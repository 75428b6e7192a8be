#pragma once

#include <optional>
#include <span>
#include <vector>

#include "slameval/align.hpp"
#include "slameval/config.hpp"

namespace slameval {

// Per-pose evaluation outcome. A pose is correct when BOTH errors are within
// their thresholds (inclusive comparisons).
struct PoseError {
  double timestamp = 0.0;
  double ate = 0.0;  // position error after alignment, meters
  double aoe = 0.0;  // orientation error after alignment, degrees
  bool correct = false;
};

// ATE is the Euclidean distance between the aligned estimate position and
// the ground-truth position; AOE is the geodesic rotation distance.
std::vector<PoseError> pose_errors(std::span<const AssociatedPair> pairs,
                                   const Alignment& alignment, const MetricConfig& config);

struct CorrectRate {
  double cr = 0.0;
  std::optional<double> cr_t;  // absent when there is no estimate
};

// Correct rate over the data span [t_min, t_max]: each correct estimate at
// t_k counts for min(t_{k+1} - t_k, delta) seconds, with the pose after the
// last one pinned to t_max. cr divides by the full span; cr_t by the span
// from the first estimate (t_max - t_0). Both are clipped to [0, 1].
// Empty input yields cr = 0 with cr_t absent. Throws InvalidSpanError when
// t_max <= t_min or timestamps leave the span.
CorrectRate correct_rate(std::span<const PoseError> errors, double t_min, double t_max,
                         double delta);

// Re-localization score: exp(-(t_0 - t_min) / tau) when the first estimate
// is correct, 0 when it is wrong or when there is no estimate at all.
double relocalization_score(std::span<const PoseError> errors, double t_min, double tau);

// Accuracy over correct poses only.
struct AccuracyResult {
  double gated_ate_rmse = 0.0;
  std::optional<double> gated_rpe_rmse;  // absent when no interval pair qualifies
  std::size_t sample_count = 0;          // correct poses entering the ATE RMSE
  std::size_t rpe_sample_count = 0;      // interval pairs entering the RPE RMSE
};

// RMSE of ATE over correct poses, plus RMSE of the translational relative
// error over interval pairs: for each correct pose at t_k the partner is the
// estimate nearest to t_k + rpe_interval within half an interval, and the
// pair is kept only when every pose from k to the partner is correct.
// Estimate poses in `pairs` are expected in the ground-truth frame (aligned).
// Returns nothing when no pose is correct.
std::optional<AccuracyResult> gated_accuracy(std::span<const PoseError> errors,
                                             std::span<const AssociatedPair> pairs,
                                             const MetricConfig& config);

// Robustness numbers for one sequence.
struct RobustnessResult {
  double cr = 0.0;
  std::optional<double> cr_t;
  double cs_r = 0.0;
  std::optional<double> t0;  // first estimate timestamp, absent when none
  double t_min = 0.0;
  double t_max = 0.0;
};

RobustnessResult robustness(std::span<const PoseError> errors, double t_min, double t_max,
                            const MetricConfig& config);

// RMSE of ATE over all poses, correct or not. Absent on empty input.
std::optional<double> ate_rmse(std::span<const PoseError> errors);

}  // namespace slameval
