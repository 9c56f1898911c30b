#include "alip/rbd/model.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "alip/rbd/spatial.hpp"

namespace alip::rbd {

RobotModel::RobotModel(std::vector<Body> bodies, std::array<FootGeometry, 2> feet)
    : bodies_(std::move(bodies)), feet_(std::move(feet)) {
  if (bodies_.empty()) throw std::invalid_argument("robot model has no bodies");
  int nq = 0;
  int nv = 0;
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    const Body& b = bodies_[i];
    const bool root = i == 0;
    if (root != (b.joint == JointType::Free)) {
      throw std::invalid_argument("body '" + b.name + "': exactly the root body must carry the free joint");
    }
    if (root ? b.parent != -1 : (b.parent < 0 || b.parent >= static_cast<int>(i))) {
      throw std::invalid_argument("body '" + b.name + "': parent must precede the body in the list");
    }
    if (!(b.inertia.mass > 0.0)) throw std::invalid_argument("body '" + b.name + "': mass must be positive");
    const Eigen::Matrix3d& I = b.inertia.rotational;
    if ((I - I.transpose()).norm() > 1e-12 * std::max(1.0, I.norm())) {
      throw std::invalid_argument("body '" + b.name + "': inertia must be symmetric");
    }
    if (Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(I).eigenvalues().minCoeff() <= 0.0) {
      throw std::invalid_argument("body '" + b.name + "': inertia must be positive definite");
    }
    if (!root) {
      if (b.axis.norm() < 1e-12) throw std::invalid_argument("body '" + b.name + "': zero joint axis");
      bodies_[i].axis.normalize();
    }
    q_index_.push_back(nq);
    v_index_.push_back(nv);
    nq += root ? 7 : 1;
    nv += root ? 6 : 1;
    total_mass_ += b.inertia.mass;
  }
  nq_ = nq;
  nv_ = nv;
  for (auto& f : feet_) {
    f.body = body_index(f.body_name);
    if (!(f.toe > 0.0) || !(f.heel > 0.0) || !(f.half_width > 0.0)) {
      throw std::invalid_argument("foot '" + f.body_name + "': polygon extents must be positive");
    }
  }
}

int RobotModel::body_index(std::string_view name) const {
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    if (bodies_[i].name == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown body '" + std::string(name) + "'");
}

bool RobotModel::is_ancestor(int ancestor, int b) const {
  for (int j = b; j >= 0; j = body(j).parent) {
    if (j == ancestor) return true;
  }
  return false;
}

RobotModel RobotModel::with_scaled_bodies(const std::function<bool(const Body&)>& select, double factor) const {
  std::vector<Body> scaled = bodies_;
  for (auto& b : scaled) {
    if (select(b)) {
      b.inertia.mass *= factor;
      b.inertia.rotational *= factor;
    }
  }
  return RobotModel(std::move(scaled), feet_);
}

State neutral_state(const RobotModel& model, const Eigen::Vector3d& base_pos) {
  State s{Eigen::VectorXd::Zero(model.nq()), Eigen::VectorXd::Zero(model.nv())};
  set_base_pose(s.q, base_pos, Eigen::Quaterniond::Identity());
  return s;
}

Eigen::Vector3d base_position(const Eigen::VectorXd& q) { return q.head<3>(); }

Eigen::Quaterniond base_orientation(const Eigen::VectorXd& q) { return {q(3), q(4), q(5), q(6)}; }

void set_base_pose(Eigen::VectorXd& q, const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation) {
  q.head<3>() = position;
  const Eigen::Quaterniond o = orientation.normalized();
  q(3) = o.w();
  q(4) = o.x();
  q(5) = o.y();
  q(6) = o.z();
}

Eigen::VectorXd integrate(const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& v, double dt) {
  Eigen::VectorXd out = q;
  out.head<3>() += dt * v.head<3>();
  const Eigen::Quaterniond rot = base_orientation(q) * quaternion_exp(dt * v.segment<3>(3));
  set_base_pose(out, out.head<3>(), rot);
  const int nj = model.num_actuated();
  out.tail(nj) += dt * v.tail(nj);
  return out;
}

void validate_state(const RobotModel& model, const State& state) {
  if (state.q.size() != model.nq() || state.qd.size() != model.nv()) {
    throw std::invalid_argument("state dimensions do not match the model");
  }
  if (!state.q.allFinite() || !state.qd.allFinite()) throw std::invalid_argument("state has non-finite entries");
  if (std::abs(state.q.segment<4>(3).norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("base orientation is not a unit quaternion");
  }
}

}  // namespace alip::rbd
