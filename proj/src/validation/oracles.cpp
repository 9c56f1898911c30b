#include "alip/validation/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/QR>

#include "alip/rbd/dynamics.hpp"

namespace alip::validation {

Eigen::Vector2d rk4_linear(const Eigen::Matrix2d& A, const Eigen::Vector2d& x0, double t, double dt) {
  Eigen::Vector2d x = x0;
  double s = 0.0;
  while (s < t) {
    const double h = std::min(dt, t - s);
    const Eigen::Vector2d k1 = A * x;
    const Eigen::Vector2d k2 = A * (x + 0.5 * h * k1);
    const Eigen::Vector2d k3 = A * (x + 0.5 * h * k2);
    const Eigen::Vector2d k4 = A * (x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += h;
    if (t - s < 1e-15 * std::max(1.0, t)) break;
  }
  return x;
}

Eigen::Matrix2d sagittal_system(double mass, double height, double gravity) {
  Eigen::Matrix2d A;
  A << 0.0, 1.0 / (mass * height), mass * gravity, 0.0;
  return A;
}

Eigen::Matrix2d frontal_system(double mass, double height, double gravity) {
  Eigen::Matrix2d A;
  A << 0.0, -1.0 / (mass * height), -mass * gravity, 0.0;
  return A;
}

rbd::State rk4_free_step(const rbd::RobotModel& model, const rbd::State& s, const Eigen::VectorXd& tau,
                         const Eigen::Vector3d& g_vec, double dt) {
  const Eigen::VectorXd gen_tau = rbd::generalized_torque(model, tau);
  const auto accel = [&](const Eigen::VectorXd& q, const Eigen::VectorXd& v) {
    const rbd::Kinematics k = rbd::compute_kinematics(model, q, v);
    return Eigen::VectorXd(rbd::mass_matrix(model, k).llt().solve(gen_tau - rbd::bias_forces(model, k, g_vec)));
  };
  const Eigen::VectorXd a1 = accel(s.q, s.qd);
  const Eigen::VectorXd v1 = s.qd;
  const Eigen::VectorXd v2 = s.qd + 0.5 * dt * a1;
  const Eigen::VectorXd a2 = accel(rbd::integrate(model, s.q, v1, 0.5 * dt), v2);
  const Eigen::VectorXd v3 = s.qd + 0.5 * dt * a2;
  const Eigen::VectorXd a3 = accel(rbd::integrate(model, s.q, v2, 0.5 * dt), v3);
  const Eigen::VectorXd v4 = s.qd + dt * a3;
  const Eigen::VectorXd a4 = accel(rbd::integrate(model, s.q, v3, dt), v4);
  return {rbd::integrate(model, s.q, (v1 + 2 * v2 + 2 * v3 + v4) / 6.0, dt), s.qd + dt / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)};
}

BodyFrames forward_kinematics(const rbd::RobotModel& model, const Eigen::VectorXd& q) {
  BodyFrames f;
  const auto n = static_cast<std::size_t>(model.num_bodies());
  f.rotation.resize(n);
  f.origin.resize(n);
  f.com.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const rbd::Body& b = model.body(static_cast<int>(i));
    Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
    if (i == 0) {
      const Eigen::Quaterniond quat(q(3), q(4), q(5), q(6));
      T.topLeftCorner<3, 3>() = quat.toRotationMatrix();
      T.topRightCorner<3, 1>() = q.head<3>();
    } else {
      const auto p = static_cast<std::size_t>(b.parent);
      Eigen::Matrix4d parent = Eigen::Matrix4d::Identity();
      parent.topLeftCorner<3, 3>() = f.rotation[p];
      parent.topRightCorner<3, 1>() = f.origin[p];
      Eigen::Matrix4d offset = Eigen::Matrix4d::Identity();
      offset.topRightCorner<3, 1>() = b.joint_origin;
      Eigen::Matrix4d joint = Eigen::Matrix4d::Identity();
      joint.topLeftCorner<3, 3>() = Eigen::AngleAxisd(q(model.q_index(static_cast<int>(i))), b.axis).toRotationMatrix();
      T = parent * offset * joint;
    }
    f.rotation[i] = T.topLeftCorner<3, 3>();
    f.origin[i] = T.topRightCorner<3, 1>();
    f.com[i] = f.origin[i] + f.rotation[i] * b.inertia.com;
  }
  return f;
}

namespace {

struct BodyVelocities {
  std::vector<Eigen::Vector3d> omega;
  std::vector<Eigen::Vector3d> v_com;
};

BodyVelocities body_velocities(const rbd::RobotModel& model, const BodyFrames& f, const Eigen::VectorXd& qd) {
  BodyVelocities out;
  const auto n = static_cast<std::size_t>(model.num_bodies());
  const Eigen::Vector3d base_omega = f.rotation[0] * qd.segment<3>(3);
  const Eigen::Vector3d base_v = qd.head<3>();
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Vector3d w = base_omega;
    Eigen::Vector3d v = base_v + base_omega.cross(f.com[i] - f.origin[0]);
    for (int j = static_cast<int>(i); j > 0; j = model.body(j).parent) {
      const auto k = static_cast<std::size_t>(j);
      const Eigen::Vector3d axis = f.rotation[k] * model.body(j).axis;
      const double rate = qd(model.v_index(j));
      w += axis * rate;
      v += (axis * rate).cross(f.com[i] - f.origin[k]);
    }
    out.omega.push_back(w);
    out.v_com.push_back(v);
  }
  return out;
}

}  // namespace

Eigen::Matrix<double, 6, 1> momentum_by_summation(const rbd::RobotModel& model, const Eigen::VectorXd& q,
                                                 const Eigen::VectorXd& qd, const Eigen::Vector3d& point) {
  const BodyFrames f = forward_kinematics(model, q);
  const BodyVelocities bv = body_velocities(model, f, qd);
  Eigen::Matrix<double, 6, 1> out = Eigen::Matrix<double, 6, 1>::Zero();
  for (std::size_t i = 0; i < f.com.size(); ++i) {
    const rbd::BodyInertia& in = model.body(static_cast<int>(i)).inertia;
    const Eigen::Matrix3d I_world = f.rotation[i] * in.rotational * f.rotation[i].transpose();
    const Eigen::Vector3d p = in.mass * bv.v_com[i];
    out.head<3>() += I_world * bv.omega[i] + (f.com[i] - point).cross(p);
    out.tail<3>() += p;
  }
  return out;
}

Eigen::Vector3d com_by_summation(const rbd::RobotModel& model, const Eigen::VectorXd& q) {
  const BodyFrames f = forward_kinematics(model, q);
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  double m = 0.0;
  for (std::size_t i = 0; i < f.com.size(); ++i) {
    const double mi = model.body(static_cast<int>(i)).inertia.mass;
    c += mi * f.com[i];
    m += mi;
  }
  return c / m;
}

double kinetic_energy_by_summation(const rbd::RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd) {
  const BodyFrames f = forward_kinematics(model, q);
  const BodyVelocities bv = body_velocities(model, f, qd);
  double e = 0.0;
  for (std::size_t i = 0; i < f.com.size(); ++i) {
    const rbd::BodyInertia& in = model.body(static_cast<int>(i)).inertia;
    const Eigen::Matrix3d I_world = f.rotation[i] * in.rotational * f.rotation[i].transpose();
    e += 0.5 * in.mass * bv.v_com[i].squaredNorm() + 0.5 * bv.omega[i].dot(I_world * bv.omega[i]);
  }
  return e;
}

Eigen::VectorXd lexicographic_oracle(const std::vector<Eigen::MatrixXd>& A, const std::vector<Eigen::VectorXd>& b) {
  if (A.empty() || A.size() != b.size()) throw std::invalid_argument("lexicographic oracle needs matching levels");
  const auto n = A.front().cols();
  Eigen::MatrixXd C(0, n);
  Eigen::VectorXd c(0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < A.size(); ++k) {
    // Parametrise {x : C x = c} as x_p + K y using an LU kernel.
    Eigen::VectorXd x_p = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n);
    if (C.rows() > 0) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
      lu.setThreshold(1e-10);
      x_p = lu.solve(c);
      K = lu.rank() < n ? Eigen::MatrixXd(lu.kernel()) : Eigen::MatrixXd(n, 0);
    }
    if (K.cols() > 0) {
      // Orthonormal kernel basis and a particular solution orthogonal to it,
      // so that ||x||^2 = ||x_p||^2 + ||y||^2 and the minimum-norm x comes from
      // the minimum-norm least-squares y.
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
      K = qr.householderQ() * Eigen::MatrixXd::Identity(n, K.cols());
      x_p -= K * (K.transpose() * x_p);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
      cod.setThreshold(1e-10);
      cod.compute(A[k] * K);
      const Eigen::VectorXd y = cod.solve(b[k] - A[k] * x_p);
      x = x_p + K * y;
    } else {
      x = x_p;
    }
    Eigen::MatrixXd C2(C.rows() + A[k].rows(), n);
    C2 << C, A[k];
    Eigen::VectorXd c2(c.size() + A[k].rows());
    c2 << c, A[k] * x;
    C = C2;
    c = c2;
  }
  return x;
}

Eigen::VectorXd exhaustive_projection(const Eigen::MatrixXd& C, const Eigen::VectorXd& d, const Eigen::VectorXd& w,
                                      const Eigen::VectorXd& x0) {
  const auto m = static_cast<int>(C.rows());
  const auto n = static_cast<int>(C.cols());
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x = x0;
  const Eigen::MatrixXd W = w.asDiagonal();
  const double feas_tol = 1e-9 * (1.0 + d.cwiseAbs().maxCoeff() + (C * x0).cwiseAbs().maxCoeff());
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) act.push_back(i);
    }
    if (static_cast<int>(act.size()) > n) continue;
    const auto k = static_cast<Eigen::Index>(act.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = W;
    Eigen::VectorXd rhs(n + k);
    rhs.head(n) = W * x0;
    for (Eigen::Index j = 0; j < k; ++j) {
      kkt.block(0, n + j, n, 1) = C.row(act[static_cast<std::size_t>(j)]).transpose();
      kkt.block(n + j, 0, 1, n) = C.row(act[static_cast<std::size_t>(j)]);
      rhs(n + j) = d(act[static_cast<std::size_t>(j)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd x = sol.head(n);
    // Stationarity W (x - x0) + C_a^T nu = 0 with multipliers nu = sol.tail >= 0.
    if (k > 0 && (sol.tail(k).array() < -1e-9 * (1.0 + sol.tail(k).cwiseAbs().maxCoeff())).any()) continue;
    if ((C * x - d).maxCoeff() > feas_tol) continue;
    const double cost = (x - x0).dot(W * (x - x0));
    if (cost < best) {
      best = cost;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace alip::validation
