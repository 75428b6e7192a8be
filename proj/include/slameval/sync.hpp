#pragma once

#include <span>

#include "slameval/trajectory.hpp"

namespace slameval {

// Result of a time-offset search between two trajectories of the same rig.
// offset is how far the target clock runs ahead of the reference clock:
// subtracting it from the target timestamps aligns the two.
struct OffsetEstimate {
  double offset = 0.0;
  double ate_rmse_at_optimum = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  double resolution = 0.0;
  bool degenerate = false;      // objective flat: offset not observable
  std::size_t probed = 0;       // objective evaluations, grid + refinement
  std::size_t excluded = 0;     // probes skipped for insufficient overlap
};

// Grid search over [-window, +window] at coarse_step spacing, then
// golden-section refinement of the best cell down to `resolution`. Each
// probe shifts the target timestamps, associates against the reference by
// interpolation, rigidly aligns, and scores the ATE RMSE, so the estimate
// is independent of the initial frame offset between the two.
// A probe whose shift leaves too little overlap is excluded; if every probe
// is excluded, NoOverlapError. A flat objective (constant-position input,
// straight constant-velocity motion) sets `degenerate`.
OffsetEstimate estimate_offset(const Trajectory& reference, const Trajectory& target,
                               double window = 0.5, double coarse_step = 0.005,
                               double resolution = 1e-4);

// Sample standard deviation (n - 1 denominator) of the recovered offsets,
// the cross-sensor consistency check. Throws InsufficientDataError on fewer
// than 2 estimates.
double offset_consistency(std::span<const OffsetEstimate> estimates);

}  // namespace slameval
