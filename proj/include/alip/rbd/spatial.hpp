#pragma once

// Spatial vector algebra in world coordinates with all motion and force
// vectors referred to the world origin. Ordering is (angular; linear).

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace alip::rbd {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix6Xd = Eigen::Matrix<double, 6, Eigen::Dynamic>;

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

/// v x m for spatial motion vectors.
inline Vector6d motion_cross(const Vector6d& v, const Vector6d& m) {
  Vector6d out;
  out.head<3>() = v.head<3>().cross(m.head<3>());
  out.tail<3>() = v.head<3>().cross(m.tail<3>()) + v.tail<3>().cross(m.head<3>());
  return out;
}

/// v x* f for spatial force vectors.
inline Vector6d force_cross(const Vector6d& v, const Vector6d& f) {
  Vector6d out;
  out.head<3>() = v.head<3>().cross(f.head<3>()) + v.tail<3>().cross(f.tail<3>());
  out.tail<3>() = v.head<3>().cross(f.tail<3>());
  return out;
}

/// Spatial inertia about the world origin of a body with the given mass,
/// world CoM position and rotational inertia about the CoM in world axes.
inline Matrix6d spatial_inertia(double mass, const Eigen::Vector3d& com, const Eigen::Matrix3d& inertia_com) {
  const Eigen::Matrix3d c = skew(com);
  Matrix6d out;
  out.topLeftCorner<3, 3>() = inertia_com + mass * c * c.transpose();
  out.topRightCorner<3, 3>() = mass * c;
  out.bottomLeftCorner<3, 3>() = mass * c.transpose();
  out.bottomRightCorner<3, 3>() = mass * Eigen::Matrix3d::Identity();
  return out;
}

/// Re-expresses a force vector taken about the origin about `point` instead.
inline Vector6d shift_force(const Vector6d& f_origin, const Eigen::Vector3d& point) {
  Vector6d out = f_origin;
  out.head<3>() -= point.cross(f_origin.tail<3>());
  return out;
}

/// Rotation vector (axis * angle) of R, with angle in [0, pi].
inline Eigen::Vector3d rotation_log(const Eigen::Matrix3d& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

inline Eigen::Quaterniond quaternion_exp(const Eigen::Vector3d& rotation_vector) {
  const double angle = rotation_vector.norm();
  if (angle < 1e-300) return Eigen::Quaterniond::Identity();
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, rotation_vector / angle));
}

}  // namespace alip::rbd
