#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "alip/core/alip.hpp"
#include "alip/core/frames.hpp"
#include "alip/rbd/model.hpp"
#include "alip/rbd/spatial.hpp"

namespace alip::rbd {

/// Raised when the active contact Jacobian does not have full row rank.
class SingularConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// World-frame per-body quantities at one (q, qd). Reusable scratch owned by
/// the caller; refreshed by update_kinematics.
struct Kinematics {
  std::vector<Eigen::Matrix3d> rotation;
  std::vector<Eigen::Vector3d> position;
  std::vector<Matrix6Xd> motion_subspace;   // joint columns of each body
  std::vector<Vector6d> velocity;           // spatial velocity
  std::vector<Vector6d> joint_bias;         // Sdot * qd of each body's own joint
  std::vector<Vector6d> bias_acceleration;  // spatial acceleration at qdd = 0 without gravity
  std::vector<Matrix6d> inertia;            // spatial inertia about the world origin
};

void update_kinematics(const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                       Kinematics& kin);
Kinematics compute_kinematics(const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd);

Eigen::Isometry3d body_pose(const Kinematics& kin, int body);

/// Joint-space inertia by the composite-rigid-body method.
Eigen::MatrixXd mass_matrix(const RobotModel& model, const Kinematics& kin);
Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q);

/// Recursive Newton-Euler: generalized forces producing qdd at the kinematic
/// state held in `kin`, under uniform gravity g_vec.
Eigen::VectorXd inverse_dynamics(const RobotModel& model, const Kinematics& kin, const Eigen::VectorXd& qdd,
                                 const Eigen::Vector3d& g_vec);

/// C(q, qd) + G(q).
Eigen::VectorXd bias_forces(const RobotModel& model, const Kinematics& kin, const Eigen::Vector3d& g_vec);
Eigen::VectorXd bias_forces(const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                            const Eigen::Vector3d& g_vec);

/// Centroidal momentum map and its drift, both at the CoM, (angular; linear).
struct CentroidalTerms {
  Matrix6Xd A;              // h = A qd
  Vector6d Adot_qd;         // hdot = A qdd + Adot_qd
  Vector6d h;
  Eigen::Vector3d p_com;
  Eigen::Vector3d v_com;
  double mass = 0.0;

  CentroidalMomentum momentum() const { return {h.head<3>(), h.tail<3>()}; }
};

CentroidalTerms centroidal_momentum(const RobotModel& model, const Kinematics& kin, const Eigen::VectorXd& qd);

struct ComState {
  Eigen::Vector3d position;
  Eigen::Vector3d velocity;
};

ComState com_state(const RobotModel& model, const Kinematics& kin, const Eigen::VectorXd& qd);

/// Rows (angular velocity; linear velocity of a world point fixed to `body`),
/// both in world axes.
Matrix6Xd point_jacobian(const RobotModel& model, const Kinematics& kin, int body, const Eigen::Vector3d& point);
/// Jdot * qd of point_jacobian: angular and classical linear acceleration at qdd = 0.
Vector6d point_bias_acceleration(const Kinematics& kin, int body, const Eigen::Vector3d& point);

Eigen::Vector3d foot_reference_point(const RobotModel& model, const Kinematics& kin, FootSide side);
Eigen::Isometry3d foot_reference_pose(const RobotModel& model, const Kinematics& kin, FootSide side);

/// One flat-foot contact. Rows of the contact Jacobian are the foot's angular
/// velocity and reference-point velocity, both in the axes of `frame`.
/// `frame.origin` and `foot_rotation` hold the anchored pose used for drift
/// correction.
struct Contact {
  FootSide foot = FootSide::Left;
  ContactFrame frame;
  Eigen::Matrix3d foot_rotation = Eigen::Matrix3d::Identity();
};
using ContactSet = std::vector<Contact>;

/// Contact built from the foot's current pose with axes from `frame_rotation`.
Contact anchor_contact(const RobotModel& model, const Kinematics& kin, FootSide side,
                       const Eigen::Matrix3d& frame_rotation);

Eigen::MatrixXd contact_jacobian(const RobotModel& model, const Kinematics& kin, const ContactSet& contacts);
Eigen::VectorXd jdot_qdot(const RobotModel& model, const Kinematics& kin, const ContactSet& contacts);
/// Stacked (rotation vector; position offset) of each foot relative to its anchor.
Eigen::VectorXd contact_pose_error(const RobotModel& model, const Kinematics& kin, const ContactSet& contacts);

/// S^T tau for actuated torques tau.
Eigen::VectorXd generalized_torque(const RobotModel& model, const Eigen::VectorXd& tau);

struct ConstrainedDynamics {
  Eigen::VectorXd qdd;
  Eigen::VectorXd lambda;  // stacked (moment; force) per contact, contact axes
};

/// Solves [M -J^T; J 0][qdd; lambda] = [S^T tau - h; constraint_rhs].
/// constraint_rhs is -Jdot*qd for the ideal no-slip constraint.
ConstrainedDynamics constrained_forward_dynamics(const Eigen::MatrixXd& M, const Eigen::VectorXd& h,
                                                 const Eigen::VectorXd& generalized_tau, const Eigen::MatrixXd& J,
                                                 const Eigen::VectorXd& constraint_rhs);
ConstrainedDynamics constrained_forward_dynamics(const RobotModel& model, const State& state,
                                                 const Eigen::VectorXd& tau, const ContactSet& contacts,
                                                 const Eigen::Vector3d& g_vec);

/// Plastic impact: M-orthogonal projection of qd onto ker(J).
Eigen::VectorXd impact_map(const Eigen::MatrixXd& M, const Eigen::MatrixXd& J, const Eigen::VectorXd& qd_minus);
Eigen::VectorXd impact_map(const RobotModel& model, const State& state, const ContactSet& new_contacts);

}  // namespace alip::rbd
