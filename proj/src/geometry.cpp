#include "slameval/geometry.hpp"

#include <cmath>

#include "slameval/errors.hpp"

namespace slameval {

namespace {

constexpr double kNlerpDotThreshold = 1.0 - 1e-9;
constexpr double kRadToDeg = 180.0 / M_PI;

bool finite_quaternion(const Quaterniond& q) {
  return std::isfinite(q.w()) && std::isfinite(q.x()) && std::isfinite(q.y()) &&
         std::isfinite(q.z());
}

}  // namespace

RigidTransform RigidTransform::inverse() const {
  const Quaterniond inv = rotation.conjugate();
  return {inv, inv * -translation};
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  return {(rotation * rhs.rotation).normalized(), rotation * rhs.translation + translation};
}

Vector3d RigidTransform::operator*(const Vector3d& point) const {
  return rotation * point + translation;
}

SimilarityTransform SimilarityTransform::inverse() const {
  const Quaterniond inv = rotation.conjugate();
  return {1.0 / scale, inv, (inv * -translation) / scale};
}

SimilarityTransform SimilarityTransform::operator*(const SimilarityTransform& rhs) const {
  return {scale * rhs.scale, (rotation * rhs.rotation).normalized(),
          scale * (rotation * rhs.translation) + translation};
}

Vector3d SimilarityTransform::apply(const Vector3d& point) const {
  return scale * (rotation * point) + translation;
}

RigidTransform SimilarityTransform::apply(const RigidTransform& pose) const {
  return {(rotation * pose.rotation).normalized(), apply(pose.translation)};
}

double rotation_angle_deg(const Quaterniond& a, const Quaterniond& b) {
  if (!finite_quaternion(a) || !finite_quaternion(b)) {
    throw InvalidInputError("rotation_angle: non-finite quaternion component");
  }
  // Angle of the relative rotation a^-1 * b. The atan2 form stays accurate
  // near zero where acos of the dot product loses digits.
  const Quaterniond rel = a.conjugate() * b;
  const double angle = 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
  return angle * kRadToDeg;
}

Quaterniond slerp(const Quaterniond& a, const Quaterniond& b, double u) {
  if (u == 0.0) return a;
  if (u == 1.0) return b;

  double dot = a.dot(b);
  Quaterniond target = b;
  if (dot < 0.0) {  // take the shorter arc
    target.coeffs() = -target.coeffs();
    dot = -dot;
  }

  if (dot > kNlerpDotThreshold) {
    Quaterniond out;
    out.coeffs() = (1.0 - u) * a.coeffs() + u * target.coeffs();
    out.normalize();
    return out;
  }

  const double theta = std::acos(std::min(dot, 1.0));
  const double sin_theta = std::sin(theta);
  const double wa = std::sin((1.0 - u) * theta) / sin_theta;
  const double wb = std::sin(u * theta) / sin_theta;
  Quaterniond out;
  out.coeffs() = wa * a.coeffs() + wb * target.coeffs();
  out.normalize();
  return out;
}

RigidTransform interpolate_pose(const TimedPose& p0, const TimedPose& p1, double t) {
  if (!std::isfinite(t) || !std::isfinite(p0.timestamp) || !std::isfinite(p1.timestamp)) {
    throw InvalidInputError("interpolate_pose: non-finite timestamp");
  }
  const double t0 = p0.timestamp;
  const double t1 = p1.timestamp;
  if (t0 > t1) {
    throw InvalidInputError("interpolate_pose: interval endpoints out of order");
  }
  if (t0 == t1) {
    const bool same_pose =
        (p0.pose.translation - p1.pose.translation).norm() <= 1e-12 &&
        std::abs(std::abs(p0.pose.rotation.dot(p1.pose.rotation)) - 1.0) <= 1e-12;
    if (!same_pose) {
      throw DegenerateIntervalError("interpolate_pose: zero-width interval between differing poses");
    }
    if (t != t0) {
      throw OutOfRangeError("interpolate_pose: query time outside interval");
    }
    return p0.pose;
  }
  if (t < t0 || t > t1) {
    throw OutOfRangeError("interpolate_pose: query time outside interval");
  }
  if (t == t0) return p0.pose;
  if (t == t1) return p1.pose;

  const double u = (t - t0) / (t1 - t0);
  RigidTransform out;
  out.translation = (1.0 - u) * p0.pose.translation + u * p1.pose.translation;
  out.rotation = slerp(p0.pose.rotation, p1.pose.rotation, u);
  return out;
}

}  // namespace slameval
