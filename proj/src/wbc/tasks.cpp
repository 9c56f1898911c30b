#include "alip/wbc/tasks.hpp"

#include <stdexcept>

namespace alip::wbc {

void Task::validate(int nv) const {
  if (priority < 1) throw std::invalid_argument("task '" + name + "': priority must be >= 1");
  if (map.cols() != nv || bias.size() != map.rows() || target.size() != map.rows()) {
    throw std::invalid_argument("task '" + name + "': inconsistent dimensions");
  }
  if (map.rows() > nv) throw std::invalid_argument("task '" + name + "': more rows than coordinates");
  if (!map.allFinite() || !bias.allFinite() || !target.allFinite()) {
    throw std::invalid_argument("task '" + name + "': non-finite entries");
  }
}

Task Task::scaled(double weight) const {
  Task t = *this;
  t.map *= weight;
  t.bias *= weight;
  t.target *= weight;
  return t;
}

void Gains::validate() const {
  if (!(K_P.array() > 0.0).all() || !(K_D.array() > 0.0).all()) {
    throw std::invalid_argument("momentum gains must be positive");
  }
}

Vector6d desired_momentum_rate(const ComReference& ref, const Eigen::Vector3d& p_com, const Vector6d& h,
                               const Gains& gains, double mass) {
  Vector6d ff = Vector6d::Zero();
  ff.tail<3>() = mass * ref.acceleration;
  Vector6d h_ref = Vector6d::Zero();
  h_ref.tail<3>() = mass * ref.velocity;
  Vector6d pos_err = Vector6d::Zero();
  pos_err.tail<3>() = mass * (ref.position - p_com);
  return ff + gains.K_D.cwiseProduct(h_ref - h) + gains.K_P.cwiseProduct(pos_err);
}

Task momentum_task(const rbd::Matrix6Xd& A_com, const Vector6d& Adot_qd, const Vector6d& hdot_c) {
  return {"momentum", A_com, Adot_qd, hdot_c, 1};
}

Task swing_foot_task(const rbd::RobotModel& model, const rbd::Kinematics& kin, rbd::FootSide swing,
                     const PoseReference& ref, const ServoGains& linear, const ServoGains& angular) {
  const int body = model.foot(swing).body;
  const Eigen::Isometry3d pose = rbd::foot_reference_pose(model, kin, swing);
  const rbd::Matrix6Xd J = rbd::point_jacobian(model, kin, body, pose.translation());
  const Vector6d v = [&] {
    const Vector6d& s = kin.velocity[static_cast<std::size_t>(body)];
    Vector6d out;
    out << s.head<3>(), s.tail<3>() + s.head<3>().cross(pose.translation());
    return out;
  }();
  Vector6d target;
  target.head<3>() = angular.kp * rbd::rotation_log(ref.rotation * pose.linear().transpose()) - angular.kd * v.head<3>();
  target.tail<3>() = ref.acceleration + linear.kd * (ref.velocity - v.tail<3>()) +
                     linear.kp * (ref.position - pose.translation());
  return {"swing_foot", J, rbd::point_bias_acceleration(kin, body, pose.translation()), target, 2};
}

Task posture_task(const rbd::RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                  const std::vector<int>& joint_bodies, const Eigen::VectorXd& q_ideal, const ServoGains& gains) {
  const auto rows = static_cast<Eigen::Index>(joint_bodies.size());
  if (q_ideal.size() != rows) throw std::invalid_argument("posture target size does not match the joint list");
  Task t{"posture", Eigen::MatrixXd::Zero(rows, model.nv()), Eigen::VectorXd::Zero(rows), Eigen::VectorXd(rows), 3};
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int b = joint_bodies[static_cast<std::size_t>(r)];
    if (b <= 0 || b >= model.num_bodies()) throw std::invalid_argument("posture task on a non-revolute body");
    const int iv = model.v_index(b);
    const int iq = model.q_index(b);
    t.map(r, iv) = 1.0;
    t.target(r) = gains.kp * (q_ideal(r) - q(iq)) - gains.kd * qd(iv);
  }
  return t;
}

Task base_orientation_task(const rbd::RobotModel& model, const rbd::Kinematics& kin, const Eigen::Matrix3d& desired,
                           const ServoGains& gains) {
  const rbd::Matrix6Xd J = rbd::point_jacobian(model, kin, 0, kin.position[0]);
  const Vector6d bias = rbd::point_bias_acceleration(kin, 0, kin.position[0]);
  const Eigen::Vector3d omega = kin.velocity[0].head<3>();
  const Eigen::Vector3d target = gains.kp * rbd::rotation_log(desired * kin.rotation[0].transpose()) - gains.kd * omega;
  return {"base_orientation", J.topRows<3>(), bias.head<3>(), target, 3};
}

}  // namespace alip::wbc
