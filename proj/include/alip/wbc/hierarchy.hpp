#pragma once

#include <vector>

#include <Eigen/Core>

#include "alip/wbc/tasks.hpp"
#include "alip/wbc/wrench.hpp"

namespace alip::wbc {

/// Singular values at or below this (relative to max(1, sigma_max)) are
/// treated as zero in every pseudoinverse and nullspace.
inline constexpr double kSvdTolerance = 1e-10;

/// qdd = qdd_particular + Z z satisfies J_c qdd + Jdot_qd = 0 for every z.
struct NullspaceParametrization {
  Eigen::VectorXd qdd_particular;
  Eigen::MatrixXd Z;  // orthonormal columns spanning ker(J_c)
};

/// Throws rbd::SingularConstraintError if J_c lacks full row rank.
NullspaceParametrization nullspace_parametrization(const Eigen::MatrixXd& J_c, const Eigen::VectorXd& Jdot_qd);

struct LevelResult {
  int priority = 0;
  double residual = 0.0;     // ||map qdd + bias - target|| after solving
  int free_dimensions = 0;   // nullspace dimension available to the level
  bool achievable = true;
};

struct LexicographicSolution {
  Eigen::VectorXd z;
  Eigen::VectorXd qdd;
  std::vector<LevelResult> levels;
};

/// Each priority level is minimised in the least-squares sense within the
/// optimal set of all higher levels; ties broken by minimum-norm z. Tasks
/// sharing a priority are stacked. Priorities must be dense from 1.
LexicographicSolution solve_lexicographic(const std::vector<Task>& tasks, const NullspaceParametrization& nsp);

struct ControlOutput {
  Eigen::VectorXd tau;                 // actuated torques
  Eigen::VectorXd qdd;
  std::vector<ContactWrench> lambda;   // per contact, contact axes
  std::vector<LevelResult> levels;
  double constraint_residual = 0.0;    // ||J_c qdd + Jdot_qd||_inf
  double dynamics_residual = 0.0;      // ||M qdd + h - S^T tau - J_c^T lambda||_inf
};

/// Resolves the task hierarchy under the no-slip constraint and extracts the
/// contact wrench from the floating-base rows and torques from the rest.
ControlOutput solve_hierarchy(const std::vector<Task>& tasks, const Eigen::MatrixXd& M, const Eigen::VectorXd& h,
                              const Eigen::MatrixXd& J_c, const Eigen::VectorXd& Jdot_qd);

}  // namespace alip::wbc
