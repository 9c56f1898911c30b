#pragma once

#include <optional>

#include <Eigen/Core>

namespace alip::wbc {

/// Lawson-Hanson active-set solution of min ||A x - b|| subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iterations = 0);

/// Least-distance programming: the minimum-norm x with G x >= h, or nullopt
/// if the constraints are infeasible.
std::optional<Eigen::VectorXd> least_distance(const Eigen::MatrixXd& G, const Eigen::VectorXd& h);

}  // namespace alip::wbc
