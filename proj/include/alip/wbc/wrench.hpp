#pragma once

#include <Eigen/Core>

#include "alip/core/frames.hpp"
#include "alip/rbd/spatial.hpp"

namespace alip::wbc {

using rbd::Vector6d;

/// Reaction wrench of one flat-foot contact in its frame {c}, moment taken
/// about the frame origin.
struct ContactWrench {
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();  // lambda_m [N m]
  Eigen::Vector3d force = Eigen::Vector3d::Zero();   // lambda_f [N]

  Vector6d vec() const;
  static ContactWrench from(const Vector6d& v);
};

struct WrenchLimits {
  double mu = 0.7;          // Coulomb friction
  double mu_z = 0.02;       // torsional friction [m]
  double toe = 0.12;        // l_t [m]
  double heel = 0.12;       // l_h [m]
  double half_width = 0.06; // w_f [m]
  double f_z_min = 0.0;     // [N]
  double f_z_max = 5000.0;  // [N]
  /// Inward offset applied to every constraint when projecting, so that
  /// round-off in downstream solves stays inside the limits.
  double margin = 1e-6;

  /// Throws std::invalid_argument on non-positive coefficients or bounds.
  void validate() const;
};

/// C lambda <= d for lambda = (moment; force). Twelve rows: f_z bounds, the
/// friction pyramid, CoP along x and y, torsion.
void wrench_constraints(const WrenchLimits& limits, Eigen::Matrix<double, 12, 6>& C, Eigen::Matrix<double, 12, 1>& d);

/// Largest constraint violation max(C lambda - d, 0) without the margin.
double wrench_violation(const ContactWrench& w, const WrenchLimits& limits);

/// Moment rows of the correction metric relative to force rows.
inline constexpr double kMomentWeight = 0.1;

struct WrenchProjection {
  ContactWrench wrench;
  bool modified = false;   // the request violated a limit
  bool saturated = false;  // f_z bound active or constraints infeasible
};

/// Weighted minimum-norm correction of `requested` onto the feasible set.
/// Returns the request unchanged when it is already feasible.
WrenchProjection project_wrench(const ContactWrench& requested, const WrenchLimits& limits);

/// Wrench about the CoM, (angular; linear), that `w` applied at the contact
/// produces, plus gravity on the linear rows.
Vector6d momentum_rate_from_wrench(const ContactWrench& w, const ContactFrame& frame, const Eigen::Vector3d& p_com,
                                   double mass, const Eigen::Vector3d& g_vec);
/// Inverse of momentum_rate_from_wrench for a single contact.
ContactWrench wrench_from_momentum_rate(const Vector6d& hdot, const ContactFrame& frame,
                                        const Eigen::Vector3d& p_com, double mass, const Eigen::Vector3d& g_vec);

struct ConstrainedMomentumRate {
  Vector6d hdot;                 // wrench-consistent rate at the CoM
  ContactWrench required;        // wrench implied by the unconstrained request
  ContactWrench wrench;          // projected wrench
  bool modified = false;
  bool saturated = false;
};

/// Single-support momentum rate consistent with a feasible contact wrench.
ConstrainedMomentumRate constrain_momentum_rate(const Vector6d& hdot_desired, const Eigen::Vector3d& p_com,
                                                double mass, const Eigen::Vector3d& g_vec,
                                                const ContactFrame& frame, const WrenchLimits& limits);

}  // namespace alip::wbc
