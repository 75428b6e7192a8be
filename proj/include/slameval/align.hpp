#pragma once

#include <span>
#include <vector>

#include "slameval/trajectory.hpp"

namespace slameval {

// One estimated pose matched with the ground-truth pose interpolated at the
// same timestamp.
struct AssociatedPair {
  double timestamp = 0.0;
  RigidTransform estimate;
  RigidTransform ground_truth;
};

struct Association {
  std::vector<AssociatedPair> pairs;
  std::size_t dropped = 0;  // estimates outside ground-truth coverage
};

// Matches every estimate whose timestamp lies inside ground-truth coverage
// with the interpolated ground-truth pose; a timestamp hitting a ground-truth
// record exactly takes that pose without interpolation. Estimates outside
// coverage are dropped and counted, never silently ignored.
// Throws NoOverlapError when no pair results and InvalidInputError on an
// empty ground truth.
Association associate(const Trajectory& estimate, const Trajectory& ground_truth);

// Least-squares map from estimate positions onto ground-truth positions.
// degenerate flags collinear or coincident input; the transform is then a
// best-effort result whose rotation is not uniquely determined.
struct Alignment {
  SimilarityTransform transform;
  double residual_rmse = 0.0;
  std::size_t pair_count = 0;
  bool degenerate = false;
};

// Closed-form rigid alignment (scale fixed at 1): rotation from the largest
// eigenvector of the quaternion profile matrix, translation from centroids.
// Throws UnderdeterminedError on fewer than 3 pairs.
Alignment align_horn(std::span<const AssociatedPair> pairs);

// Similarity alignment with jointly optimal positive scale, solved via SVD
// of the cross-covariance with determinant correction. fit_scale = false
// constrains scale to 1 and must reproduce align_horn.
// Throws UnderdeterminedError on fewer than 3 pairs and DegenerateScaleError
// when the estimate positions have zero variance.
Alignment align_umeyama(std::span<const AssociatedPair> pairs, bool fit_scale = true);

// Pairs with the transform applied to the estimate poses, i.e. both sides
// expressed in the ground-truth frame.
std::vector<AssociatedPair> apply_alignment(const SimilarityTransform& transform,
                                            std::span<const AssociatedPair> pairs);

}  // namespace slameval
