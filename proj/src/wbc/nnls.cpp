#include "alip/wbc/nnls.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/QR>

namespace alip::wbc {

namespace {

// Unconstrained least squares over the passive columns; inactive entries are zero.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(passive.size()); ++i) {
    if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
  if (idx.empty()) return z;
  Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
  const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
  for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  return z;
}

}  // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iterations) {
  const auto n = A.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * A.norm() * std::max<Eigen::Index>(A.rows(), n);

  for (int outer = 0; outer < max_iterations; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    int best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = static_cast<int>(j);
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner <= n; ++inner) {
      Eigen::VectorXd z = passive_solve(A, b, passive);
      bool all_positive = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) all_positive = false;
      }
      if (all_positive) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

std::optional<Eigen::VectorXd> least_distance(const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
  const auto m = G.rows();
  const auto n = G.cols();
  if (m == 0 || (h.array() <= 0.0).all()) return Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd E(n + 1, m);
  E.topRows(n) = G.transpose();
  E.row(n) = h.transpose();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n + 1);
  f(n) = 1.0;
  const Eigen::VectorXd u = nnls(E, f);
  const Eigen::VectorXd r = E * u - f;
  if (r.norm() < 1e-12 || -r(n) < 1e-12) return std::nullopt;
  return Eigen::VectorXd(-r.head(n) / r(n));
}

}  // namespace alip::wbc
