#include "slameval/align.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "slameval/errors.hpp"

namespace slameval {

namespace {

using Eigen::Matrix3d;
using Eigen::Matrix4d;

struct Centered {
  Vector3d mean_estimate = Vector3d::Zero();
  Vector3d mean_truth = Vector3d::Zero();
  Matrix3d cross = Matrix3d::Zero();  // cov(truth, estimate), truth rows
  double estimate_variance = 0.0;     // mean squared distance to centroid
  bool degenerate = false;            // estimate positions collinear/coincident
};

Centered center(std::span<const AssociatedPair> pairs) {
  Centered c;
  const double n = static_cast<double>(pairs.size());
  for (const AssociatedPair& p : pairs) {
    c.mean_estimate += p.estimate.translation;
    c.mean_truth += p.ground_truth.translation;
  }
  c.mean_estimate /= n;
  c.mean_truth /= n;

  Matrix3d estimate_cov = Matrix3d::Zero();
  for (const AssociatedPair& p : pairs) {
    const Vector3d e = p.estimate.translation - c.mean_estimate;
    const Vector3d g = p.ground_truth.translation - c.mean_truth;
    c.cross += g * e.transpose();
    estimate_cov += e * e.transpose();
    c.estimate_variance += e.squaredNorm();
  }
  c.cross /= n;
  estimate_cov /= n;
  c.estimate_variance /= n;

  // Rotation is unique only when the estimate point set spans a plane:
  // the two largest eigenvalues of its covariance must be nonzero.
  Eigen::SelfAdjointEigenSolver<Matrix3d> eig(estimate_cov);
  const Vector3d ev = eig.eigenvalues();  // ascending
  c.degenerate = ev(1) <= ev(2) * 1e-12 + 1e-24;
  return c;
}

double residual_rmse(const SimilarityTransform& transform,
                     std::span<const AssociatedPair> pairs) {
  double sum = 0.0;
  for (const AssociatedPair& p : pairs) {
    sum += (transform.apply(p.estimate.translation) - p.ground_truth.translation).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(pairs.size()));
}

}  // namespace

Association associate(const Trajectory& estimate, const Trajectory& ground_truth) {
  if (ground_truth.empty()) {
    throw InvalidInputError("associate: ground truth is empty");
  }

  Association out;
  const auto& gt = ground_truth.records;
  for (const TimedPose& est : estimate.records) {
    const double t = est.timestamp;
    if (t < ground_truth.start_time() || t > ground_truth.end_time()) {
      ++out.dropped;
      continue;
    }
    auto it = std::lower_bound(gt.begin(), gt.end(), t,
                               [](const TimedPose& r, double v) { return r.timestamp < v; });
    AssociatedPair pair;
    pair.timestamp = t;
    pair.estimate = est.pose;
    if (it != gt.end() && it->timestamp == t) {
      pair.ground_truth = it->pose;  // exact hit, no interpolation
    } else {
      pair.ground_truth = interpolate_pose(*(it - 1), *it, t);
    }
    out.pairs.push_back(std::move(pair));
  }

  if (out.pairs.empty()) {
    throw NoOverlapError("associate: no estimate timestamp inside ground-truth coverage");
  }
  return out;
}

Alignment align_horn(std::span<const AssociatedPair> pairs) {
  if (pairs.size() < 3) {
    throw UnderdeterminedError("align_horn: need at least 3 pairs, got " +
                               std::to_string(pairs.size()));
  }
  const Centered c = center(pairs);

  // Horn's closed form: the optimal rotation is the largest eigenvector of
  // the 4x4 profile matrix built from the cross-covariance. A quaternion
  // always encodes a proper rotation, so no reflection can slip through.
  // cross is cov(truth, estimate); the corner vector of the profile matrix
  // needs the antisymmetric part of cov(estimate, truth), hence the swapped
  // indices relative to the usual statement.
  const Matrix3d& s = c.cross;
  Matrix4d profile;
  profile(0, 0) = s.trace();
  const Vector3d delta(s(2, 1) - s(1, 2), s(0, 2) - s(2, 0), s(1, 0) - s(0, 1));
  profile.block<3, 1>(1, 0) = delta;
  profile.block<1, 3>(0, 1) = delta.transpose();
  profile.block<3, 3>(1, 1) = s + s.transpose() - s.trace() * Matrix3d::Identity();

  Eigen::SelfAdjointEigenSolver<Matrix4d> eig(profile);
  const Eigen::Vector4d q = eig.eigenvectors().col(3);  // largest eigenvalue

  Alignment alignment;
  alignment.transform.scale = 1.0;
  alignment.transform.rotation = Quaterniond(q(0), q(1), q(2), q(3)).normalized();
  alignment.transform.translation =
      c.mean_truth - alignment.transform.rotation * c.mean_estimate;
  alignment.pair_count = pairs.size();
  alignment.degenerate = c.degenerate;
  alignment.residual_rmse = residual_rmse(alignment.transform, pairs);
  return alignment;
}

Alignment align_umeyama(std::span<const AssociatedPair> pairs, bool fit_scale) {
  if (pairs.size() < 3) {
    throw UnderdeterminedError("align_umeyama: need at least 3 pairs, got " +
                               std::to_string(pairs.size()));
  }
  const Centered c = center(pairs);
  if (fit_scale && c.estimate_variance <= 0.0) {
    throw DegenerateScaleError("align_umeyama: estimate positions have zero variance");
  }

  Eigen::JacobiSVD<Matrix3d> svd(c.cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector3d signs = Vector3d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) {
    signs(2) = -1.0;  // reflection correction on the smallest singular value
  }
  const Matrix3d rotation =
      svd.matrixU() * signs.asDiagonal() * svd.matrixV().transpose();

  Alignment alignment;
  alignment.transform.rotation = Quaterniond(rotation).normalized();
  alignment.transform.scale =
      fit_scale ? svd.singularValues().dot(signs) / c.estimate_variance : 1.0;
  if (!(alignment.transform.scale > 0.0)) {
    throw DegenerateScaleError("align_umeyama: optimal scale is not positive");
  }
  alignment.transform.translation =
      c.mean_truth - alignment.transform.scale * (alignment.transform.rotation * c.mean_estimate);
  alignment.pair_count = pairs.size();
  alignment.degenerate = c.degenerate;
  alignment.residual_rmse = residual_rmse(alignment.transform, pairs);
  return alignment;
}

std::vector<AssociatedPair> apply_alignment(const SimilarityTransform& transform,
                                            std::span<const AssociatedPair> pairs) {
  std::vector<AssociatedPair> out;
  out.reserve(pairs.size());
  for (const AssociatedPair& p : pairs) {
    out.push_back({p.timestamp, transform.apply(p.estimate), p.ground_truth});
  }
  return out;
}

}  // namespace slameval
