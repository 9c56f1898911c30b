#include "alip/rbd/dynamics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace alip::rbd {

void update_kinematics(const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                       Kinematics& kin) {
  const auto n = static_cast<std::size_t>(model.num_bodies());
  kin.rotation.resize(n);
  kin.position.resize(n);
  kin.motion_subspace.resize(n);
  kin.velocity.resize(n);
  kin.joint_bias.resize(n);
  kin.bias_acceleration.resize(n);
  kin.inertia.resize(n);

  for (int i = 0; i < model.num_bodies(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Body& b = model.body(i);
    Matrix6Xd& S = kin.motion_subspace[k];
    if (b.joint == JointType::Free) {
      const Eigen::Matrix3d R = base_orientation(q).toRotationMatrix();
      const Eigen::Vector3d p = base_position(q);
      kin.rotation[k] = R;
      kin.position[k] = p;
      S.setZero(6, 6);
      S.bottomLeftCorner<3, 3>().setIdentity();
      S.topRightCorner<3, 3>() = R;
      S.bottomRightCorner<3, 3>() = skew(p) * R;
      kin.velocity[k] = S * qd.head<6>();
      const Eigen::Vector3d omega = R * qd.segment<3>(3);
      kin.joint_bias[k].setZero();
      kin.joint_bias[k].tail<3>() = qd.head<3>().cross(omega);
      kin.bias_acceleration[k] = kin.joint_bias[k];
    } else {
      const auto pk = static_cast<std::size_t>(b.parent);
      const double angle = q(model.q_index(i));
      const double rate = qd(model.v_index(i));
      const Eigen::Matrix3d& Rp = kin.rotation[pk];
      kin.rotation[k] = Rp * Eigen::AngleAxisd(angle, b.axis).toRotationMatrix();
      kin.position[k] = kin.position[pk] + Rp * b.joint_origin;
      const Eigen::Vector3d axis = Rp * b.axis;
      S.resize(6, 1);
      S.col(0).head<3>() = axis;
      S.col(0).tail<3>() = kin.position[k].cross(axis);
      kin.velocity[k] = kin.velocity[pk] + S.col(0) * rate;
      kin.joint_bias[k] = motion_cross(kin.velocity[k], S.col(0) * rate);
      kin.bias_acceleration[k] = kin.bias_acceleration[pk] + kin.joint_bias[k];
    }
    const Eigen::Matrix3d& R = kin.rotation[k];
    kin.inertia[k] = spatial_inertia(b.inertia.mass, kin.position[k] + R * b.inertia.com,
                                     R * b.inertia.rotational * R.transpose());
  }
}

Kinematics compute_kinematics(const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd) {
  Kinematics kin;
  update_kinematics(model, q, qd, kin);
  return kin;
}

Eigen::Isometry3d body_pose(const Kinematics& kin, int body) {
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();
  pose.linear() = kin.rotation[static_cast<std::size_t>(body)];
  pose.translation() = kin.position[static_cast<std::size_t>(body)];
  return pose;
}

namespace {

std::vector<Matrix6d> composite_inertias(const RobotModel& model, const Kinematics& kin) {
  std::vector<Matrix6d> ic = kin.inertia;
  for (int i = model.num_bodies() - 1; i > 0; --i) {
    ic[static_cast<std::size_t>(model.body(i).parent)] += ic[static_cast<std::size_t>(i)];
  }
  return ic;
}

}  // namespace

Eigen::MatrixXd mass_matrix(const RobotModel& model, const Kinematics& kin) {
  const std::vector<Matrix6d> ic = composite_inertias(model, kin);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(model.nv(), model.nv());
  for (int i = 0; i < model.num_bodies(); ++i) {
    const Matrix6Xd& Si = kin.motion_subspace[static_cast<std::size_t>(i)];
    const Matrix6Xd F = ic[static_cast<std::size_t>(i)] * Si;
    const int vi = model.v_index(i);
    const int di = model.joint_dofs(i);
    M.block(vi, vi, di, di) = Si.transpose() * F;
    for (int j = model.body(i).parent; j >= 0; j = model.body(j).parent) {
      const int vj = model.v_index(j);
      const int dj = model.joint_dofs(j);
      M.block(vj, vi, dj, di) = kin.motion_subspace[static_cast<std::size_t>(j)].transpose() * F;
      M.block(vi, vj, di, dj) = M.block(vj, vi, dj, di).transpose();
    }
  }
  return M;
}

Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q) {
  return mass_matrix(model, compute_kinematics(model, q, Eigen::VectorXd::Zero(model.nv())));
}

Eigen::VectorXd inverse_dynamics(const RobotModel& model, const Kinematics& kin, const Eigen::VectorXd& qdd,
                                 const Eigen::Vector3d& g_vec) {
  const auto n = static_cast<std::size_t>(model.num_bodies());
  std::vector<Vector6d> acc(n);
  std::vector<Vector6d> force(n);
  Vector6d gravity_acc = Vector6d::Zero();
  gravity_acc.tail<3>() = -g_vec;
  for (std::size_t k = 0; k < n; ++k) {
    const int i = static_cast<int>(k);
    const Matrix6Xd& S = kin.motion_subspace[k];
    const Vector6d parent_acc = i == 0 ? gravity_acc : acc[static_cast<std::size_t>(model.body(i).parent)];
    acc[k] = parent_acc + S * qdd.segment(model.v_index(i), model.joint_dofs(i)) + kin.joint_bias[k];
    const Vector6d momentum = kin.inertia[k] * kin.velocity[k];
    force[k] = kin.inertia[k] * acc[k] + force_cross(kin.velocity[k], momentum);
  }
  Eigen::VectorXd tau(model.nv());
  for (int i = model.num_bodies() - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    tau.segment(model.v_index(i), model.joint_dofs(i)) = kin.motion_subspace[k].transpose() * force[k];
    if (i > 0) force[static_cast<std::size_t>(model.body(i).parent)] += force[k];
  }
  return tau;
}

Eigen::VectorXd bias_forces(const RobotModel& model, const Kinematics& kin, const Eigen::Vector3d& g_vec) {
  return inverse_dynamics(model, kin, Eigen::VectorXd::Zero(model.nv()), g_vec);
}

Eigen::VectorXd bias_forces(const RobotModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                            const Eigen::Vector3d& g_vec) {
  return bias_forces(model, compute_kinematics(model, q, qd), g_vec);
}

CentroidalTerms centroidal_momentum(const RobotModel& model, const Kinematics& kin, const Eigen::VectorXd& qd) {
  const std::vector<Matrix6d> ic = composite_inertias(model, kin);
  CentroidalTerms out;
  out.mass = model.total_mass();
  // The composite inertia of the root holds m * [c]x in its off-diagonal block.
  out.p_com = Eigen::Vector3d(ic[0](2, 4), ic[0](0, 5), ic[0](1, 3)) / out.mass;

  Matrix6Xd A_origin(6, model.nv());
  for (int i = 0; i < model.num_bodies(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    A_origin.middleCols(model.v_index(i), model.joint_dofs(i)) = ic[k] * kin.motion_subspace[k];
  }
  out.A = A_origin;
  out.A.topRows<3>() -= skew(out.p_com) * A_origin.bottomRows<3>();
  out.h = out.A * qd;
  out.v_com = out.h.tail<3>() / out.mass;

  // Total rate of momentum about the fixed origin at qdd = 0 without gravity;
  // the CoM shift commutes with d/dt because pdot_com x (m pdot_com) = 0.
  Vector6d hdot_origin = Vector6d::Zero();
  for (std::size_t k = 0; k < kin.inertia.size(); ++k) {
    hdot_origin += kin.inertia[k] * kin.bias_acceleration[k] +
                   force_cross(kin.velocity[k], kin.inertia[k] * kin.velocity[k]);
  }
  out.Adot_qd = shift_force(hdot_origin, out.p_com);
  return out;
}

ComState com_state(const RobotModel& model, const Kinematics& kin, const Eigen::VectorXd& qd) {
  const CentroidalTerms c = centroidal_momentum(model, kin, qd);
  return {c.p_com, c.v_com};
}

Matrix6Xd point_jacobian(const RobotModel& model, const Kinematics& kin, int body, const Eigen::Vector3d& point) {
  Matrix6Xd J = Matrix6Xd::Zero(6, model.nv());
  for (int j = body; j >= 0; j = model.body(j).parent) {
    J.middleCols(model.v_index(j), model.joint_dofs(j)) = kin.motion_subspace[static_cast<std::size_t>(j)];
  }
  J.bottomRows<3>() -= skew(point) * J.topRows<3>();
  return J;
}

Vector6d point_bias_acceleration(const Kinematics& kin, int body, const Eigen::Vector3d& point) {
  const auto k = static_cast<std::size_t>(body);
  const Vector6d& v = kin.velocity[k];
  const Vector6d& a = kin.bias_acceleration[k];
  const Eigen::Vector3d omega = v.head<3>();
  const Eigen::Vector3d v_point = v.tail<3>() + omega.cross(point);
  Vector6d out;
  out.head<3>() = a.head<3>();
  out.tail<3>() = a.tail<3>() + a.head<3>().cross(point) + omega.cross(v_point);
  return out;
}

Eigen::Vector3d foot_reference_point(const RobotModel& model, const Kinematics& kin, FootSide side) {
  const FootGeometry& f = model.foot(side);
  const auto k = static_cast<std::size_t>(f.body);
  return kin.position[k] + kin.rotation[k] * f.reference_offset;
}

Eigen::Isometry3d foot_reference_pose(const RobotModel& model, const Kinematics& kin, FootSide side) {
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();
  pose.linear() = kin.rotation[static_cast<std::size_t>(model.foot(side).body)];
  pose.translation() = foot_reference_point(model, kin, side);
  return pose;
}

Contact anchor_contact(const RobotModel& model, const Kinematics& kin, FootSide side,
                       const Eigen::Matrix3d& frame_rotation) {
  Contact c;
  c.foot = side;
  c.frame.rotation = frame_rotation;
  c.frame.origin = foot_reference_point(model, kin, side);
  c.foot_rotation = kin.rotation[static_cast<std::size_t>(model.foot(side).body)];
  return c;
}

namespace {

Matrix6Xd to_contact_axes(const Eigen::Matrix3d& R, const Matrix6Xd& J) {
  Matrix6Xd out(6, J.cols());
  out.topRows<3>() = R.transpose() * J.topRows<3>();
  out.bottomRows<3>() = R.transpose() * J.bottomRows<3>();
  return out;
}

}  // namespace

Eigen::MatrixXd contact_jacobian(const RobotModel& model, const Kinematics& kin, const ContactSet& contacts) {
  Eigen::MatrixXd J(6 * static_cast<Eigen::Index>(contacts.size()), model.nv());
  for (std::size_t c = 0; c < contacts.size(); ++c) {
    const int body = model.foot(contacts[c].foot).body;
    const Eigen::Vector3d point = foot_reference_point(model, kin, contacts[c].foot);
    J.middleRows(6 * static_cast<Eigen::Index>(c), 6) =
        to_contact_axes(contacts[c].frame.rotation, point_jacobian(model, kin, body, point));
  }
  return J;
}

Eigen::VectorXd jdot_qdot(const RobotModel& model, const Kinematics& kin, const ContactSet& contacts) {
  Eigen::VectorXd out(6 * static_cast<Eigen::Index>(contacts.size()));
  for (std::size_t c = 0; c < contacts.size(); ++c) {
    const int body = model.foot(contacts[c].foot).body;
    const Eigen::Vector3d point = foot_reference_point(model, kin, contacts[c].foot);
    const Vector6d a = point_bias_acceleration(kin, body, point);
    const Eigen::Matrix3d Rt = contacts[c].frame.rotation.transpose();
    out.segment<3>(6 * static_cast<Eigen::Index>(c)) = Rt * a.head<3>();
    out.segment<3>(6 * static_cast<Eigen::Index>(c) + 3) = Rt * a.tail<3>();
  }
  return out;
}

Eigen::VectorXd contact_pose_error(const RobotModel& model, const Kinematics& kin, const ContactSet& contacts) {
  Eigen::VectorXd out(6 * static_cast<Eigen::Index>(contacts.size()));
  for (std::size_t c = 0; c < contacts.size(); ++c) {
    const Contact& ct = contacts[c];
    const Eigen::Matrix3d Rt = ct.frame.rotation.transpose();
    const Eigen::Matrix3d& R_foot = kin.rotation[static_cast<std::size_t>(model.foot(ct.foot).body)];
    out.segment<3>(6 * static_cast<Eigen::Index>(c)) = Rt * rotation_log(R_foot * ct.foot_rotation.transpose());
    out.segment<3>(6 * static_cast<Eigen::Index>(c) + 3) =
        Rt * (foot_reference_point(model, kin, ct.foot) - ct.frame.origin);
  }
  return out;
}

Eigen::VectorXd generalized_torque(const RobotModel& model, const Eigen::VectorXd& tau) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(model.nv());
  out.tail(model.num_actuated()) = tau;
  return out;
}

namespace {

/// Cholesky of the operational-space inertia J M^-1 J^T with a rank check.
Eigen::LLT<Eigen::MatrixXd> factor_constraint_inertia(const Eigen::MatrixXd& lambda_inv) {
  Eigen::LLT<Eigen::MatrixXd> llt(lambda_inv);
  const Eigen::VectorXd d = llt.matrixLLT().diagonal();
  if (llt.info() != Eigen::Success || d.minCoeff() <= 1e-7 * d.maxCoeff()) {
    throw SingularConstraintError("contact Jacobian is rank deficient");
  }
  return llt;
}

}  // namespace

ConstrainedDynamics constrained_forward_dynamics(const Eigen::MatrixXd& M, const Eigen::VectorXd& h,
                                                 const Eigen::VectorXd& generalized_tau, const Eigen::MatrixXd& J,
                                                 const Eigen::VectorXd& constraint_rhs) {
  const Eigen::LLT<Eigen::MatrixXd> m_llt(M);
  const Eigen::VectorXd free_force = generalized_tau - h;
  ConstrainedDynamics out;
  if (J.rows() == 0) {
    out.qdd = m_llt.solve(free_force);
    out.lambda.resize(0);
    return out;
  }
  const Eigen::MatrixXd Minv_Jt = m_llt.solve(J.transpose());
  const Eigen::VectorXd qdd_free = m_llt.solve(free_force);
  const auto llt = factor_constraint_inertia(J * Minv_Jt);
  out.lambda = llt.solve(constraint_rhs - J * qdd_free);
  out.qdd = qdd_free + Minv_Jt * out.lambda;
  return out;
}

ConstrainedDynamics constrained_forward_dynamics(const RobotModel& model, const State& state,
                                                 const Eigen::VectorXd& tau, const ContactSet& contacts,
                                                 const Eigen::Vector3d& g_vec) {
  const Kinematics kin = compute_kinematics(model, state.q, state.qd);
  return constrained_forward_dynamics(mass_matrix(model, kin), bias_forces(model, kin, g_vec),
                                      generalized_torque(model, tau), contact_jacobian(model, kin, contacts),
                                      -jdot_qdot(model, kin, contacts));
}

Eigen::VectorXd impact_map(const Eigen::MatrixXd& M, const Eigen::MatrixXd& J, const Eigen::VectorXd& qd_minus) {
  if (J.rows() == 0) return qd_minus;
  const Eigen::LLT<Eigen::MatrixXd> m_llt(M);
  const Eigen::MatrixXd Minv_Jt = m_llt.solve(J.transpose());
  const auto llt = factor_constraint_inertia(J * Minv_Jt);
  return qd_minus - Minv_Jt * llt.solve(J * qd_minus);
}

Eigen::VectorXd impact_map(const RobotModel& model, const State& state, const ContactSet& new_contacts) {
  const Kinematics kin = compute_kinematics(model, state.q, state.qd);
  return impact_map(mass_matrix(model, kin), contact_jacobian(model, kin, new_contacts), state.qd);
}

}  // namespace alip::rbd
