#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace alip {

/// Per-step contact frame {c}: origin at the stance-foot reference point,
/// z vertical, x along the walking heading. Fixed for a whole step.
struct ContactFrame {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // {c} axes in world
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();

  Eigen::Vector3d point_to_local(const Eigen::Vector3d& p_world) const {
    return rotation.transpose() * (p_world - origin);
  }
  Eigen::Vector3d point_to_world(const Eigen::Vector3d& p_local) const { return origin + rotation * p_local; }
  Eigen::Vector3d vector_to_local(const Eigen::Vector3d& v_world) const { return rotation.transpose() * v_world; }
  Eigen::Vector3d vector_to_world(const Eigen::Vector3d& v_local) const { return rotation * v_local; }
};

}  // namespace alip
