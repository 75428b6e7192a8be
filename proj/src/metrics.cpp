#include "slameval/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace slameval {

std::vector<PoseError> pose_errors(std::span<const AssociatedPair> pairs,
                                   const Alignment& alignment, const MetricConfig& config) {
  config.validate();
  std::vector<PoseError> errors;
  errors.reserve(pairs.size());
  for (const AssociatedPair& p : pairs) {
    const RigidTransform aligned = alignment.transform.apply(p.estimate);
    PoseError e;
    e.timestamp = p.timestamp;
    e.ate = (aligned.translation - p.ground_truth.translation).norm();
    e.aoe = rotation_angle_deg(aligned.rotation, p.ground_truth.rotation);
    e.correct = e.ate <= config.epsilon && e.aoe <= config.phi;
    errors.push_back(e);
  }
  return errors;
}

CorrectRate correct_rate(std::span<const PoseError> errors, double t_min, double t_max,
                         double delta) {
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || t_max <= t_min) {
    throw InvalidSpanError("correct_rate: empty or inverted span");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidInputError("correct_rate: delta must be positive and finite");
  }
  if (errors.empty()) {
    return {};
  }
  if (errors.front().timestamp < t_min || errors.back().timestamp > t_max) {
    throw InvalidSpanError("correct_rate: estimate timestamps outside the span");
  }

  double numerator = 0.0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double next = k + 1 < errors.size() ? errors[k + 1].timestamp : t_max;
    if (errors[k].correct) {
      numerator += std::min(next - errors[k].timestamp, delta);
    }
  }

  CorrectRate out;
  out.cr = std::clamp(numerator / (t_max - t_min), 0.0, 1.0);
  if (t_max > errors.front().timestamp) {
    out.cr_t = std::clamp(numerator / (t_max - errors.front().timestamp), 0.0, 1.0);
  } else {
    // Single estimate exactly at the end of the span: it tracks the entire
    // (empty) remainder iff it is correct.
    out.cr_t = errors.front().correct ? 1.0 : 0.0;
  }
  return out;
}

double relocalization_score(std::span<const PoseError> errors, double t_min, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidInputError("relocalization_score: tau must be positive and finite");
  }
  if (errors.empty() || !errors.front().correct) {
    return 0.0;
  }
  return std::exp(-(errors.front().timestamp - t_min) / tau);
}

std::optional<AccuracyResult> gated_accuracy(std::span<const PoseError> errors,
                                             std::span<const AssociatedPair> pairs,
                                             const MetricConfig& config) {
  config.validate();
  if (errors.size() != pairs.size()) {
    throw InvalidInputError("gated_accuracy: errors and pairs must be index-aligned");
  }

  AccuracyResult result;
  double ate_sum = 0.0;
  for (const PoseError& e : errors) {
    if (e.correct) {
      ate_sum += e.ate * e.ate;
      ++result.sample_count;
    }
  }
  if (result.sample_count == 0) {
    return std::nullopt;  // nothing correct: accuracy is undefined, not zero
  }
  result.gated_ate_rmse = std::sqrt(ate_sum / static_cast<double>(result.sample_count));

  const double interval = config.rpe_interval;
  double rpe_sum = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!errors[k].correct) continue;
    const double target = pairs[k].timestamp + interval;

    auto it = std::lower_bound(
        pairs.begin(), pairs.end(), target,
        [](const AssociatedPair& p, double v) { return p.timestamp < v; });
    std::size_t j;
    if (it == pairs.begin()) {
      j = 0;
    } else if (it == pairs.end()) {
      j = pairs.size() - 1;
    } else {
      const std::size_t hi = static_cast<std::size_t>(it - pairs.begin());
      j = (target - pairs[hi - 1].timestamp <= pairs[hi].timestamp - target) ? hi - 1 : hi;
    }
    if (j <= k) continue;
    if (std::abs(pairs[j].timestamp - target) > interval / 2.0) continue;

    // A relative error across a stretch with wrong poses would blame the
    // interval for a failure already counted by the gate; skip those.
    bool clean = true;
    for (std::size_t i = k; i <= j && clean; ++i) clean = errors[i].correct;
    if (!clean) continue;

    const RigidTransform est_motion = pairs[k].estimate.inverse() * pairs[j].estimate;
    const RigidTransform true_motion = pairs[k].ground_truth.inverse() * pairs[j].ground_truth;
    const double drift = (true_motion.inverse() * est_motion).translation.norm();
    rpe_sum += drift * drift;
    ++result.rpe_sample_count;
  }
  if (result.rpe_sample_count > 0) {
    result.gated_rpe_rmse =
        std::sqrt(rpe_sum / static_cast<double>(result.rpe_sample_count));
  }
  return result;
}

RobustnessResult robustness(std::span<const PoseError> errors, double t_min, double t_max,
                            const MetricConfig& config) {
  RobustnessResult out;
  out.t_min = t_min;
  out.t_max = t_max;
  const CorrectRate rate = correct_rate(errors, t_min, t_max, config.delta);
  out.cr = rate.cr;
  out.cr_t = rate.cr_t;
  out.cs_r = relocalization_score(errors, t_min, config.tau);
  if (!errors.empty()) {
    out.t0 = errors.front().timestamp;
  }
  return out;
}

std::optional<double> ate_rmse(std::span<const PoseError> errors) {
  if (errors.empty()) return std::nullopt;
  double sum = 0.0;
  for (const PoseError& e : errors) sum += e.ate * e.ate;
  return std::sqrt(sum / static_cast<double>(errors.size()));
}

}  // namespace slameval
