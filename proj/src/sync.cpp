#include "slameval/sync.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "slameval/align.hpp"
#include "slameval/errors.hpp"

namespace slameval {

namespace {

// Objective range below this counts as flat. Constant-position and straight
// constant-velocity inputs score (near) zero everywhere; any trajectory with
// real lateral motion varies by orders of magnitude more over the window.
constexpr double kFlatObjectiveRange = 1e-9;

// Minimum pairs for a meaningful probe; below this the offset is excluded.
constexpr std::size_t kMinProbePairs = 3;

std::optional<double> probe_objective(const Trajectory& reference, const Trajectory& target,
                                      double offset) {
  Trajectory shifted = target;
  for (TimedPose& r : shifted.records) r.timestamp -= offset;
  try {
    const Association assoc = associate(shifted, reference);
    if (assoc.pairs.size() < kMinProbePairs) return std::nullopt;
    return align_horn(assoc.pairs).residual_rmse;
  } catch (const NoOverlapError&) {
    return std::nullopt;
  }
}

}  // namespace

OffsetEstimate estimate_offset(const Trajectory& reference, const Trajectory& target,
                               double window, double coarse_step, double resolution) {
  if (!(window > 0.0) || !(coarse_step > 0.0) || !(resolution > 0.0) ||
      coarse_step > 2.0 * window || resolution > coarse_step) {
    throw InvalidInputError("estimate_offset: need 0 < resolution <= coarse_step <= window span");
  }
  if (reference.empty() || target.empty()) {
    throw InvalidInputError("estimate_offset: empty trajectory");
  }

  OffsetEstimate out;
  out.window_min = -window;
  out.window_max = window;
  out.resolution = resolution;

  double best_offset = 0.0;
  double best_value = std::numeric_limits<double>::infinity();
  double grid_low = std::numeric_limits<double>::infinity();
  double grid_high = -std::numeric_limits<double>::infinity();

  auto evaluate = [&](double offset) -> std::optional<double> {
    const std::optional<double> value = probe_objective(reference, target, offset);
    ++out.probed;
    if (!value.has_value()) {
      ++out.excluded;
      return std::nullopt;
    }
    if (*value < best_value) {
      best_value = *value;
      best_offset = offset;
    }
    return value;
  };

  const auto steps = static_cast<std::size_t>(std::floor(2.0 * window / coarse_step));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double offset = -window + static_cast<double>(i) * coarse_step;
    const std::optional<double> value = evaluate(offset);
    if (value.has_value()) {
      grid_low = std::min(grid_low, *value);
      grid_high = std::max(grid_high, *value);
    }
  }
  if (!std::isfinite(best_value)) {
    throw NoOverlapError("estimate_offset: no probed offset leaves usable overlap");
  }
  out.degenerate = grid_high - grid_low <= kFlatObjectiveRange;

  // Golden-section refinement inside the best coarse cell. Excluded probes
  // (possible at the window rim) count as infinitely bad.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::max(best_offset - coarse_step, -window);
  double b = std::min(best_offset + coarse_step, window);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = evaluate(c).value_or(std::numeric_limits<double>::infinity());
  double fd = evaluate(d).value_or(std::numeric_limits<double>::infinity());
  while (b - a > resolution) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = evaluate(c).value_or(std::numeric_limits<double>::infinity());
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = evaluate(d).value_or(std::numeric_limits<double>::infinity());
    }
  }

  out.offset = best_offset;
  out.ate_rmse_at_optimum = best_value;
  return out;
}

double offset_consistency(std::span<const OffsetEstimate> estimates) {
  if (estimates.size() < 2) {
    throw InsufficientDataError("offset_consistency: need at least 2 estimates, got " +
                                std::to_string(estimates.size()));
  }
  double mean = 0.0;
  for (const OffsetEstimate& e : estimates) mean += e.offset;
  mean /= static_cast<double>(estimates.size());
  double sum = 0.0;
  for (const OffsetEstimate& e : estimates) {
    sum += (e.offset - mean) * (e.offset - mean);
  }
  return std::sqrt(sum / static_cast<double>(estimates.size() - 1));
}

}  // namespace slameval
