#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "alip/planner/swing.hpp"
#include "alip/rbd/dynamics.hpp"

namespace alip::wbc {

using rbd::Vector6d;

/// Equality task on accelerations: map * qdd + bias = target.
struct Task {
  std::string name;
  Eigen::MatrixXd map;
  Eigen::VectorXd bias;
  Eigen::VectorXd target;
  int priority = 1;

  /// Throws std::invalid_argument on size mismatch, non-finite entries or priority < 1.
  void validate(int nv) const;
  /// Same task with every row multiplied by `weight`.
  Task scaled(double weight) const;
};

/// Diagonal momentum-task gains, (angular; linear).
struct Gains {
  Vector6d K_P = Vector6d::Constant(1.0);
  Vector6d K_D = Vector6d::Constant(1.0);

  void validate() const;
};

/// Constant-height CoM reference in world coordinates.
struct ComReference {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();
};

/// hdot_d = (0; m a_d) + K_D ((0; m v_d) - h) + K_P (0; m (p_d - p_com)).
Vector6d desired_momentum_rate(const ComReference& ref, const Eigen::Vector3d& p_com, const Vector6d& h,
                               const Gains& gains, double mass);

Task momentum_task(const rbd::Matrix6Xd& A_com, const Vector6d& Adot_qd, const Vector6d& hdot_c);

/// PD servo gains of a kinematic task, per unit mass-free acceleration.
struct ServoGains {
  double kp = 100.0;
  double kd = 20.0;
};

/// Pose target of a foot reference point: position/velocity/acceleration
/// from the swing profile and a flat sole with the given yaw.
struct PoseReference {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

/// Rows (angular; linear) in world axes for the foot reference point.
Task swing_foot_task(const rbd::RobotModel& model, const rbd::Kinematics& kin, rbd::FootSide swing,
                     const PoseReference& ref, const ServoGains& linear, const ServoGains& angular);

/// Joint-space servo of the selected joints (body indices) toward q_ideal.
Task posture_task(const rbd::RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                  const std::vector<int>& joint_bodies, const Eigen::VectorXd& q_ideal, const ServoGains& gains);

/// Orientation servo of the floating-base body toward `desired` (world axes).
Task base_orientation_task(const rbd::RobotModel& model, const rbd::Kinematics& kin, const Eigen::Matrix3d& desired,
                           const ServoGains& gains);

}  // namespace alip::wbc
