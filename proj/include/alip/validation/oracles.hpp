#pragma once

// Reference computations that share no code path with the library
// implementations they check.

#include <vector>

#include <Eigen/Core>

#include "alip/rbd/model.hpp"

namespace alip::validation {

/// Classic fourth-order Runge-Kutta for xdot = A x over [0, t] with step dt
/// (the last step is shortened to land on t).
Eigen::Vector2d rk4_linear(const Eigen::Matrix2d& A, const Eigen::Vector2d& x0, double t, double dt);

/// A of the sagittal template, xdot = A x with x = (p_x, L_cy).
Eigen::Matrix2d sagittal_system(double mass, double height, double gravity);
/// A of the frontal template, ydot = A y with y = (p_y, L_cx).
Eigen::Matrix2d frontal_system(double mass, double height, double gravity);

/// One classic RK4 step of the unconstrained dynamics M qdd = S^T tau - h,
/// with stage configurations reached along the stage velocities.
rbd::State rk4_free_step(const rbd::RobotModel& model, const rbd::State& state, const Eigen::VectorXd& tau,
                         const Eigen::Vector3d& g_vec, double dt);

/// Forward kinematics by composing homogeneous transforms joint by joint.
struct BodyFrames {
  std::vector<Eigen::Matrix3d> rotation;
  std::vector<Eigen::Vector3d> origin;
  std::vector<Eigen::Vector3d> com;
};
BodyFrames forward_kinematics(const rbd::RobotModel& model, const Eigen::VectorXd& q);

/// Total momentum about `point` as the sum over bodies of
/// I_i w_i + m_i (c_i - point) x v_i, with body velocities built from the
/// joint axes of every ancestor. Returns (angular; linear).
Eigen::Matrix<double, 6, 1> momentum_by_summation(const rbd::RobotModel& model, const Eigen::VectorXd& q,
                                                 const Eigen::VectorXd& qd, const Eigen::Vector3d& point);

/// Mass-weighted CoM from forward_kinematics.
Eigen::Vector3d com_by_summation(const rbd::RobotModel& model, const Eigen::VectorXd& q);

/// Kinetic energy as a sum over bodies.
double kinetic_energy_by_summation(const rbd::RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd);

/// Lexicographic least squares over x: level k minimises ||A_k x - b_k||
/// subject to A_j x = A_j x_j for all j < k, with a minimum-norm tie break.
/// Uses a full-pivoting LU kernel basis, re-orthonormalised by QR, and a
/// thresholded complete orthogonal decomposition per level.
Eigen::VectorXd lexicographic_oracle(const std::vector<Eigen::MatrixXd>& A, const std::vector<Eigen::VectorXd>& b);

/// min (x - x0)^T W (x - x0) s.t. C x <= d by enumerating every active set
/// with at most dim(x) constraints and keeping the best KKT point.
Eigen::VectorXd exhaustive_projection(const Eigen::MatrixXd& C, const Eigen::VectorXd& d, const Eigen::VectorXd& w,
                                      const Eigen::VectorXd& x0);

}  // namespace alip::validation
