#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace slameval {

using Eigen::Quaterniond;
using Eigen::Vector3d;

// Rigid-body transform: rotation (unit quaternion) plus translation.
// Rotations stay quaternions throughout; matrices appear only transiently
// inside alignment solvers.
struct RigidTransform {
  Quaterniond rotation = Quaterniond::Identity();
  Vector3d translation = Vector3d::Zero();

  static RigidTransform Identity() { return {}; }

  RigidTransform inverse() const;
  // Composition: (a * b) maps a point first through b, then a.
  RigidTransform operator*(const RigidTransform& rhs) const;
  Vector3d operator*(const Vector3d& point) const;
};

// Similarity transform: positive isotropic scale, rotation, translation.
// A point maps as scale * (rotation * p) + translation.
struct SimilarityTransform {
  double scale = 1.0;
  Quaterniond rotation = Quaterniond::Identity();
  Vector3d translation = Vector3d::Zero();

  static SimilarityTransform Identity() { return {}; }

  SimilarityTransform inverse() const;
  SimilarityTransform operator*(const SimilarityTransform& rhs) const;

  Vector3d apply(const Vector3d& point) const;
  // Scale acts on the position only; the pose rotation is composed unscaled.
  RigidTransform apply(const RigidTransform& pose) const;
};

struct TimedPose {
  double timestamp = 0.0;
  RigidTransform pose;
};

// Geodesic distance between two unit quaternions, in degrees, in [0, 180].
// Symmetric, zero on identical rotations, and invariant under the quaternion
// double cover (q and -q describe the same rotation).
// Throws InvalidInputError on non-finite components.
double rotation_angle_deg(const Quaterniond& a, const Quaterniond& b);

// Shorter-arc spherical interpolation. Falls back to normalized linear
// interpolation when the arc is too small for a stable sin ratio
// (|dot| > 1 - 1e-9). u = 0 and u = 1 return the inputs unchanged.
Quaterniond slerp(const Quaterniond& a, const Quaterniond& b, double u);

// Pose at time t on the segment [p0, p1]: linear in translation, slerp in
// rotation. Exact at the endpoints. Throws OutOfRangeError when t lies
// outside [p0.timestamp, p1.timestamp] and DegenerateIntervalError when the
// interval has zero width between differing poses.
RigidTransform interpolate_pose(const TimedPose& p0, const TimedPose& p1, double t);

}  // namespace slameval
