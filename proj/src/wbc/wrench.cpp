#include "alip/wbc/wrench.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>

#include "alip/wbc/nnls.hpp"

namespace alip::wbc {

Vector6d ContactWrench::vec() const {
  Vector6d v;
  v << moment, force;
  return v;
}

ContactWrench ContactWrench::from(const Vector6d& v) { return {v.head<3>(), v.tail<3>()}; }

void WrenchLimits::validate() const {
  if (!(mu > 0.0) || !(mu_z > 0.0)) throw std::invalid_argument("friction coefficients must be positive");
  if (!(toe > 0.0) || !(heel > 0.0) || !(half_width > 0.0)) {
    throw std::invalid_argument("foot polygon bounds must be positive");
  }
  if (!(f_z_min >= 0.0) || !(f_z_max > f_z_min)) throw std::invalid_argument("need 0 <= f_z_min < f_z_max");
  if (!(margin >= 0.0)) throw std::invalid_argument("wrench margin must be non-negative");
}

void wrench_constraints(const WrenchLimits& l, Eigen::Matrix<double, 12, 6>& C, Eigen::Matrix<double, 12, 1>& d) {
  // Columns: tau_x tau_y tau_z f_x f_y f_z. The CoP along x is -tau_y / f_z.
  C.setZero();
  d.setZero();
  C(0, 5) = -1.0;
  d(0) = -l.f_z_min;
  C(1, 5) = 1.0;
  d(1) = l.f_z_max;
  C.row(2) << 0, 0, 0, 1, 0, -l.mu;
  C.row(3) << 0, 0, 0, -1, 0, -l.mu;
  C.row(4) << 0, 0, 0, 0, 1, -l.mu;
  C.row(5) << 0, 0, 0, 0, -1, -l.mu;
  C.row(6) << 0, 1, 0, 0, 0, -l.heel;
  C.row(7) << 0, -1, 0, 0, 0, -l.toe;
  C.row(8) << 1, 0, 0, 0, 0, -l.half_width;
  C.row(9) << -1, 0, 0, 0, 0, -l.half_width;
  C.row(10) << 0, 0, 1, 0, 0, -l.mu_z;
  C.row(11) << 0, 0, -1, 0, 0, -l.mu_z;
}

double wrench_violation(const ContactWrench& w, const WrenchLimits& limits) {
  Eigen::Matrix<double, 12, 6> C;
  Eigen::Matrix<double, 12, 1> d;
  wrench_constraints(limits, C, d);
  return std::max(0.0, (C * w.vec() - d).maxCoeff());
}

WrenchProjection project_wrench(const ContactWrench& requested, const WrenchLimits& limits) {
  limits.validate();
  Eigen::Matrix<double, 12, 6> C;
  Eigen::Matrix<double, 12, 1> d;
  wrench_constraints(limits, C, d);
  const Vector6d lr = requested.vec();
  const Eigen::Matrix<double, 12, 1> slack = d - C * lr;
  if ((slack.array() >= 0.0).all()) return {requested, false, false};

  // y = W^(1/2) (lambda - lambda_req): minimise ||y|| s.t. C W^(-1/2) y <= d - margin - C lambda_req.
  Vector6d w_inv_sqrt;
  const double ms = 1.0 / std::sqrt(kMomentWeight);
  w_inv_sqrt << ms, ms, ms, 1.0, 1.0, 1.0;
  const Eigen::MatrixXd Cs = C * w_inv_sqrt.asDiagonal();
  const Eigen::VectorXd rhs = (slack.array() - limits.margin).matrix();
  auto y = least_distance(-Cs, -rhs);

  WrenchProjection out;
  out.modified = true;
  if (!y) {
    // Only reachable with contradictory bounds; fall back to the f_z clamp.
    Vector6d l = Vector6d::Zero();
    l(5) = std::clamp(lr(5), limits.f_z_min, limits.f_z_max);
    out.wrench = ContactWrench::from(l);
    out.saturated = true;
    return out;
  }

  // Polish on the identified active set to remove the NNLS round-off.
  const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
  std::vector<int> active;
  for (int i = 0; i < 12; ++i) {
    if (Cs.row(i).dot(*y) >= rhs(i) - 1e-9 * scale) active.push_back(i);
  }
  if (!active.empty()) {
    Eigen::MatrixXd Ca(static_cast<Eigen::Index>(active.size()), 6);
    Eigen::VectorXd ra(static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      Ca.row(static_cast<Eigen::Index>(k)) = Cs.row(active[k]);
      ra(static_cast<Eigen::Index>(k)) = rhs(active[k]);
    }
    const Eigen::VectorXd yp = Ca.completeOrthogonalDecomposition().solve(ra);
    if ((Cs * yp - rhs).maxCoeff() <= 1e-12 * scale) *y = yp;
  }

  const Vector6d l = lr + w_inv_sqrt.cwiseProduct(*y);
  out.wrench = ContactWrench::from(l);
  out.saturated = l(5) <= limits.f_z_min + limits.margin + 1e-9 || l(5) >= limits.f_z_max - limits.margin - 1e-9;
  return out;
}

Vector6d momentum_rate_from_wrench(const ContactWrench& w, const ContactFrame& frame, const Eigen::Vector3d& p_com,
                                   double mass, const Eigen::Vector3d& g_vec) {
  const Eigen::Vector3d f = frame.vector_to_world(w.force);
  const Eigen::Vector3d m = frame.vector_to_world(w.moment);
  Vector6d hdot;
  hdot << (frame.origin - p_com).cross(f) + m, f + mass * g_vec;
  return hdot;
}

ContactWrench wrench_from_momentum_rate(const Vector6d& hdot, const ContactFrame& frame, const Eigen::Vector3d& p_com,
                                        double mass, const Eigen::Vector3d& g_vec) {
  const Eigen::Vector3d f = hdot.tail<3>() - mass * g_vec;
  const Eigen::Vector3d m = hdot.head<3>() - (frame.origin - p_com).cross(f);
  return {frame.vector_to_local(m), frame.vector_to_local(f)};
}

ConstrainedMomentumRate constrain_momentum_rate(const Vector6d& hdot_desired, const Eigen::Vector3d& p_com,
                                                double mass, const Eigen::Vector3d& g_vec,
                                                const ContactFrame& frame, const WrenchLimits& limits) {
  ConstrainedMomentumRate out;
  out.required = wrench_from_momentum_rate(hdot_desired, frame, p_com, mass, g_vec);
  const WrenchProjection proj = project_wrench(out.required, limits);
  out.wrench = proj.wrench;
  out.modified = proj.modified;
  out.saturated = proj.saturated;
  out.hdot = proj.modified ? momentum_rate_from_wrench(out.wrench, frame, p_com, mass, g_vec) : hdot_desired;
  return out;
}

}  // namespace alip::wbc
