#include "alip/wbc/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <Eigen/SVD>

namespace alip::wbc {

namespace {

double truncation(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd) {
  const auto& s = svd.singularValues();
  return kSvdTolerance * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
}

int numerical_rank(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd) {
  const double tol = truncation(svd);
  return static_cast<int>((svd.singularValues().array() > tol).count());
}

Eigen::VectorXd pinv_solve(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd, int rank, const Eigen::VectorXd& b) {
  const Eigen::VectorXd c = svd.matrixU().leftCols(rank).transpose() * b;
  return svd.matrixV().leftCols(rank) * c.cwiseQuotient(svd.singularValues().head(rank));
}

}  // namespace

NullspaceParametrization nullspace_parametrization(const Eigen::MatrixXd& J_c, const Eigen::VectorXd& Jdot_qd) {
  if (Jdot_qd.size() != J_c.rows()) throw std::invalid_argument("contact bias size does not match J_c");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J_c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int rank = numerical_rank(svd);
  if (rank < J_c.rows()) throw rbd::SingularConstraintError("contact Jacobian is rank deficient");
  NullspaceParametrization out;
  out.qdd_particular = pinv_solve(svd, rank, -Jdot_qd);
  out.Z = svd.matrixV().rightCols(J_c.cols() - rank);
  return out;
}

LexicographicSolution solve_lexicographic(const std::vector<Task>& tasks, const NullspaceParametrization& nsp) {
  const auto nv = static_cast<int>(nsp.qdd_particular.size());
  std::map<int, std::vector<const Task*>> levels;
  for (const Task& t : tasks) {
    t.validate(nv);
    levels[t.priority].push_back(&t);
  }
  int expected = 1;
  for (const auto& [p, _] : levels) {
    if (p != expected++) throw std::invalid_argument("task priorities must be dense from 1");
  }

  LexicographicSolution out;
  out.z = Eigen::VectorXd::Zero(nsp.Z.cols());
  Eigen::MatrixXd N = Eigen::MatrixXd::Identity(nsp.Z.cols(), nsp.Z.cols());

  for (const auto& [priority, members] : levels) {
    Eigen::Index rows = 0;
    for (const Task* t : members) rows += t->map.rows();
    Eigen::MatrixXd A(rows, nv);
    Eigen::VectorXd rhs(rows);
    Eigen::Index r = 0;
    for (const Task* t : members) {
      A.middleRows(r, t->map.rows()) = t->map;
      rhs.segment(r, t->map.rows()) = t->target - t->bias;
      r += t->map.rows();
    }
    const Eigen::VectorXd e = rhs - A * (nsp.qdd_particular + nsp.Z * out.z);
    LevelResult lr;
    lr.priority = priority;
    lr.free_dimensions = static_cast<int>(N.cols());
    if (N.cols() > 0) {
      const Eigen::MatrixXd B = A * nsp.Z * N;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const int rank = numerical_rank(svd);
      const Eigen::VectorXd w = pinv_solve(svd, rank, e);
      out.z += N * w;
      N = (N * svd.matrixV().rightCols(N.cols() - rank)).eval();
    }
    lr.residual = (rhs - A * (nsp.qdd_particular + nsp.Z * out.z)).norm();
    lr.achievable = lr.residual <= 1e-9 * (1.0 + rhs.norm());
    out.levels.push_back(lr);
  }
  out.qdd = nsp.qdd_particular + nsp.Z * out.z;
  return out;
}

ControlOutput solve_hierarchy(const std::vector<Task>& tasks, const Eigen::MatrixXd& M, const Eigen::VectorXd& h,
                              const Eigen::MatrixXd& J_c, const Eigen::VectorXd& Jdot_qd) {
  const NullspaceParametrization nsp = nullspace_parametrization(J_c, Jdot_qd);
  const LexicographicSolution sol = solve_lexicographic(tasks, nsp);

  ControlOutput out;
  out.qdd = sol.qdd;
  out.levels = sol.levels;

  // Floating-base rows: M_b qdd + h_b = J_b^T lambda.
  const Eigen::VectorXd gen = M * out.qdd + h;
  const Eigen::MatrixXd JbT = J_c.leftCols<6>().transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(JbT, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd lambda = svd.solve(gen.head<6>());
  for (Eigen::Index c = 0; c < lambda.size() / 6; ++c) {
    out.lambda.push_back(ContactWrench::from(lambda.segment<6>(6 * c)));
  }
  const Eigen::VectorXd generalized_tau = gen - J_c.transpose() * lambda;
  out.tau = generalized_tau.tail(gen.size() - 6);

  Eigen::VectorXd s_tau = Eigen::VectorXd::Zero(gen.size());
  s_tau.tail(out.tau.size()) = out.tau;
  out.dynamics_residual = (gen - s_tau - J_c.transpose() * lambda).lpNorm<Eigen::Infinity>();
  out.constraint_residual = (J_c * out.qdd + Jdot_qd).lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace alip::wbc
