#include "alip/sim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "alip/core/errors.hpp"
#include "alip/planner/contact_frame.hpp"
#include "alip/planner/rollout.hpp"

namespace alip::sim {

GaitSchedule::GaitSchedule(std::vector<ScheduleEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ConfigError("schedule: at least one entry is required");
  double expected = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ScheduleEntry& e = entries_[i];
    if (!std::isfinite(e.t_start) || !std::isfinite(e.t_end) || !std::isfinite(e.v_x) || !std::isfinite(e.v_y)) {
      throw ConfigError("schedule: non-finite value in entry " + std::to_string(i));
    }
    if (std::abs(e.t_start - expected) > 1e-9) {
      throw ConfigError("schedule: entry " + std::to_string(i) + (e.t_start < expected ? " overlaps" : " leaves a gap after") +
                        " the previous window");
    }
    if (!(e.t_end > e.t_start)) throw ConfigError("schedule: entry " + std::to_string(i) + " has t_end <= t_start");
    expected = e.t_end;
  }
}

Eigen::Vector2d GaitSchedule::command(double t) const {
  if (entries_.empty()) return Eigen::Vector2d::Zero();
  for (const ScheduleEntry& e : entries_) {
    if (t < e.t_end) return {e.v_x, e.v_y};
  }
  return {entries_.back().v_x, entries_.back().v_y};
}

ControllerGains::ControllerGains() {
  momentum.K_P << 1.0, 1.0, 1.0, 40.0, 40.0, 100.0;
  momentum.K_D << 10.0, 10.0, 10.0, 12.0, 12.0, 20.0;
}

void ControllerGains::validate() const {
  momentum.validate();
  for (const wbc::ServoGains* g : {&swing_linear, &swing_angular, &posture, &pelvis}) {
    if (!(g->kp >= 0.0) || !(g->kd >= 0.0)) throw ConfigError("servo gains must be non-negative");
  }
  if (!(swing_apex > 0.0)) throw ConfigError("swing apex must be positive");
  if (!(retarget_freeze_phase > 0.0 && retarget_freeze_phase <= 1.0)) {
    throw ConfigError("retarget freeze phase must lie in (0, 1]");
  }
  if (!(velocity_ramp_per_step >= 0.0)) throw ConfigError("velocity ramp must be non-negative");
  if (!(reach.forward > 0.0) || !(reach.lateral > 0.0)) throw ConfigError("reach box must be positive");
  try {
    limits.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void SimOptions::validate() const {
  if (!(dt > 0.0) || dt > 0.01) throw ConfigError("dt must lie in (0, 0.01] s");
  if (substeps < 1) throw ConfigError("substeps must be at least 1");
  if (!(duration >= 0.0)) throw ConfigError("duration must be non-negative");
  if (!(baumgarte_velocity >= 0.0) || !(baumgarte_position >= 0.0)) {
    throw ConfigError("Baumgarte coefficients must be non-negative");
  }
  if (!(snap_tolerance > 0.0)) throw ConfigError("snap tolerance must be positive");
  if (projection_iterations < 0) throw ConfigError("projection iterations must be non-negative");
  if (wrench_streak_limit < 1 || reach_streak_limit < 1) throw ConfigError("streak limits must be positive");
  if (!(height_divergence > 0.0)) throw ConfigError("height divergence bound must be positive");
}

Scenario::Scenario(rbd::RobotModel model_, double com_height, double gravity_magnitude)
    : model(std::move(model_)),
      params(model.total_mass(), com_height, gravity_magnitude),
      gravity(0.0, 0.0, -gravity_magnitude) {}

namespace {

Eigen::Matrix3d yaw_rotation(double yaw) { return Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix(); }

// Walking heading is fixed to the world x axis.
constexpr double kHeading = 0.0;

void require_finite(const rbd::State& s, const char* where) {
  if (!s.q.allFinite() || !s.qd.allFinite()) throw DivergenceError(std::string("non-finite state after ") + where);
}

/// Bodies driven by the posture task: every revolute joint outside the legs.
std::vector<int> posture_bodies(const rbd::RobotModel& model) {
  const int lf = model.foot(rbd::FootSide::Left).body;
  const int rf = model.foot(rbd::FootSide::Right).body;
  std::vector<int> out;
  for (int b = 1; b < model.num_bodies(); ++b) {
    if (!model.is_ancestor(b, lf) && !model.is_ancestor(b, rf)) out.push_back(b);
  }
  return out;
}

std::vector<int> leg_bodies(const rbd::RobotModel& model) {
  const int lf = model.foot(rbd::FootSide::Left).body;
  const int rf = model.foot(rbd::FootSide::Right).body;
  std::vector<int> out;
  for (int b = 1; b < model.num_bodies(); ++b) {
    if (model.is_ancestor(b, lf) || model.is_ancestor(b, rf)) out.push_back(b);
  }
  return out;
}

Eigen::VectorXd posture_targets(const Scenario& sc, const std::vector<int>& bodies) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(bodies.size()));
  for (const auto& [name, angle] : sc.posture) {
    const int b = sc.model.body_index(name);
    const auto it = std::find(bodies.begin(), bodies.end(), b);
    if (it == bodies.end()) throw ConfigError("posture joint '" + name + "' is not an arm or torso joint");
    out(it - bodies.begin()) = angle;
  }
  return out;
}

/// Gauss-Newton projection of q onto the anchored pose of `contacts`,
/// minimum-norm in the velocity coordinates.
Eigen::VectorXd project_pose(const rbd::RobotModel& model, Eigen::VectorXd q, const rbd::ContactSet& contacts,
                             int iterations) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.nv());
  for (int it = 0; it < iterations; ++it) {
    const rbd::Kinematics kin = rbd::compute_kinematics(model, q, zero);
    const Eigen::VectorXd e = rbd::contact_pose_error(model, kin, contacts);
    if (e.lpNorm<Eigen::Infinity>() < 1e-14) break;
    const Eigen::MatrixXd J = rbd::contact_jacobian(model, kin, contacts);
    const Eigen::VectorXd dv = -J.transpose() * (J * J.transpose()).ldlt().solve(e);
    q = rbd::integrate(model, q, dv, 1.0);
  }
  return q;
}

}  // namespace

AlipMeasurement measure_alip_state(const rbd::RobotModel& model, const rbd::Kinematics& kin,
                                   const Eigen::VectorXd& qd, const ContactFrame& frame) {
  const rbd::CentroidalTerms ct = rbd::centroidal_momentum(model, kin, qd);
  AlipMeasurement m;
  m.p_com_c = frame.point_to_local(ct.p_com);
  m.v_com_c = frame.vector_to_local(ct.v_com);
  m.L_com_c = frame.vector_to_local(ct.h.head<3>());
  m.L_c = contact_from_centroidal(m.L_com_c, m.p_com_c, m.v_com_c, ct.mass);
  m.x = {m.p_com_c.x(), m.L_c.y()};
  m.y = {m.p_com_c.y(), m.L_c.x()};
  return m;
}

AlipMeasurement measure_alip_state(const rbd::RobotModel& model, const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& qd, const ContactFrame& frame) {
  return measure_alip_state(model, rbd::compute_kinematics(model, q, qd), qd, frame);
}

TickResult control_tick(const Scenario& sc, SimState& sim) {
  const rbd::RobotModel& model = sc.model;
  const AlipParams& P = sc.params;
  const GaitSpec& spec = sim.spec;
  const double T = spec.step_duration;
  const double H = P.height();
  const double m = P.mass();
  const ContactFrame& frame = sim.contact.frame;

  const rbd::Kinematics kin = rbd::compute_kinematics(model, sim.state.q, sim.state.qd);
  const rbd::CentroidalTerms ct = rbd::centroidal_momentum(model, kin, sim.state.qd);
  const AlipMeasurement meas = measure_alip_state(model, kin, sim.state.qd, frame);

  TickResult out;
  LogRecord& rec = out.record;
  rec.t = sim.t;
  rec.step = sim.step;
  rec.stance = sim.stance;
  rec.t_step = sim.t_step;
  rec.x = meas.x;
  rec.y = meas.y;
  rec.L_com = meas.L_com_c;
  rec.v_command = sc.schedule.command(sim.t);
  rec.v_planner = {spec.v_x, spec.v_y};
  rec.com = ct.p_com;
  rec.com_velocity = ct.v_com;
  rec.h = ct.h;

  // Planner: deadbeat placement from the measured template state.
  const double ts = std::clamp(sim.t_step, 0.0, T);
  rec.L_hat_cy = estimate_Lcy_end(meas.x, ts, spec, P);
  rec.L_hat_cx = estimate_Lcx_end(meas.y, ts, spec, P);
  const FootPlacement u_raw = plan_step(meas.x, meas.y, ts, sim.stance, spec, P);
  rec.u = clamp_placement(u_raw, sim.stance, spec, sc.gains.reach, &rec.placement_clamped);
  const Eigen::Vector2d landing_c = landing_point(meas.x, meas.y, ts, rec.u, spec, P);
  const Eigen::Vector2d landing_w = frame.point_to_world({landing_c.x(), landing_c.y(), 0.0}).head<2>();
  if (!sim.landing_frozen && ts < sc.gains.retarget_freeze_phase * T) {
    sim.swing.retarget(ts, landing_w);
  } else {
    sim.landing_frozen = true;
  }
  rec.landing = sim.swing.landing();

  // Constant-height CoM reference following the template flow of the measured state.
  const Eigen::Vector3d v_c(meas.x.L_cy / (m * H), -meas.y.L_cx / (m * H), 0.0);
  const Eigen::Vector3d a_c = (P.gravity() / H) * Eigen::Vector3d(meas.x.p_x, meas.y.p_y, 0.0);
  wbc::ComReference ref;
  ref.position = frame.point_to_world({meas.x.p_x, meas.y.p_y, H});
  ref.velocity = frame.vector_to_world(v_c);
  ref.acceleration = frame.vector_to_world(a_c);
  rec.com_desired = ref.position;
  rec.com_velocity_desired = ref.velocity;
  rec.h_desired.tail<3>() = m * ref.velocity;

  const rbd::Vector6d hdot_d = wbc::desired_momentum_rate(ref, ct.p_com, ct.h, sc.gains.momentum, m);
  const wbc::ConstrainedMomentumRate cm =
      wbc::constrain_momentum_rate(hdot_d, ct.p_com, m, sc.gravity, frame, sc.gains.limits);
  rec.wrench_modified = cm.modified;
  rec.wrench_saturated = cm.saturated;

  std::vector<wbc::Task> tasks;
  tasks.push_back(wbc::momentum_task(ct.A, ct.Adot_qd, cm.hdot));

  const SwingSample s = sim.swing.sample(ts);
  wbc::PoseReference foot_ref{s.position, s.velocity, s.acceleration, yaw_rotation(s.yaw)};
  tasks.push_back(wbc::swing_foot_task(model, kin, swing_foot(sim.stance), foot_ref, sc.gains.swing_linear,
                                       sc.gains.swing_angular));

  const std::vector<int> bodies = posture_bodies(model);
  tasks.push_back(wbc::posture_task(model, sim.state.q, sim.state.qd, bodies, posture_targets(sc, bodies),
                                    sc.gains.posture));
  tasks.push_back(wbc::base_orientation_task(model, kin, yaw_rotation(kHeading), sc.gains.pelvis));
  if (!sc.gains.momentum_task_enabled) {
    tasks.erase(tasks.begin());
    for (wbc::Task& t : tasks) --t.priority;
  }

  const rbd::ContactSet contacts{sim.contact};
  const Eigen::MatrixXd J = rbd::contact_jacobian(model, kin, contacts);
  const Eigen::VectorXd Jdot_qd = rbd::jdot_qdot(model, kin, contacts);
  const Eigen::MatrixXd M = rbd::mass_matrix(model, kin);
  const Eigen::VectorXd h = rbd::bias_forces(model, kin, sc.gravity);
  out.control = wbc::solve_hierarchy(tasks, M, h, J, Jdot_qd);

  rec.tau = out.control.tau;
  rec.constraint_residual = out.control.constraint_residual;
  for (const wbc::LevelResult& l : out.control.levels) rec.level_residuals.push_back(l.residual);
  return out;
}

AdvanceResult advance(const Scenario& sc, const SimState& sim, const Eigen::VectorXd& tau, double dt) {
  const rbd::RobotModel& model = sc.model;
  const rbd::ContactSet contacts{sim.contact};
  const rbd::State& s = sim.state;

  const rbd::Kinematics kin = rbd::compute_kinematics(model, s.q, s.qd);
  const Eigen::MatrixXd M = rbd::mass_matrix(model, kin);
  const Eigen::VectorXd h = rbd::bias_forces(model, kin, sc.gravity);
  const Eigen::MatrixXd J = rbd::contact_jacobian(model, kin, contacts);
  Eigen::VectorXd rhs = -rbd::jdot_qdot(model, kin, contacts);
  const double alpha = sc.options.baumgarte_velocity;
  const double beta = sc.options.baumgarte_position;
  if (alpha > 0.0) rhs -= 2.0 * alpha * (J * s.qd);
  if (beta > 0.0) rhs -= beta * beta * rbd::contact_pose_error(model, kin, contacts);
  const rbd::ConstrainedDynamics fd =
      rbd::constrained_forward_dynamics(M, h, rbd::generalized_torque(model, tau), J, rhs);

  AdvanceResult out;
  out.lambda = fd.lambda;
  out.state.qd = s.qd + dt * fd.qdd;
  out.state.q = rbd::integrate(model, s.q, out.state.qd, dt);
  require_finite(out.state, "integration");

  const rbd::Kinematics kin1 = rbd::compute_kinematics(model, out.state.q, out.state.qd);
  out.pose_error = rbd::contact_pose_error(model, kin1, contacts).norm();
  out.state.q = project_pose(model, out.state.q, contacts, sc.options.projection_iterations);
  out.state.qd = rbd::impact_map(model, out.state, contacts);
  require_finite(out.state, "constraint projection");
  return out;
}

StepEvent step_transition(const Scenario& sc, SimState& sim) {
  const rbd::RobotModel& model = sc.model;
  StepEvent ev;
  ev.step = sim.step;
  ev.stance = sim.stance;
  ev.t = sim.t;

  const rbd::Kinematics kin = rbd::compute_kinematics(model, sim.state.q, sim.state.qd);
  const AlipMeasurement minus = measure_alip_state(model, kin, sim.state.qd, sim.contact.frame);
  ev.x_minus = minus.x;
  ev.y_minus = minus.y;
  const double vz_minus = rbd::com_state(model, kin, sim.state.qd).velocity.z();

  const rbd::FootSide landing = swing_foot(sim.stance);
  const Eigen::Vector3d point = rbd::foot_reference_point(model, kin, landing);
  ev.touchdown_height = point.z();

  rbd::Contact contact;
  if (std::abs(point.z()) > sc.options.snap_tolerance) {
    // Snap the landing foot flat onto the ground plane at its current yaw.
    ev.snapped = true;
    const Eigen::Matrix3d& R = kin.rotation[static_cast<std::size_t>(model.foot(landing).body)];
    contact.foot = landing;
    contact.foot_rotation = yaw_rotation(std::atan2(R(1, 0), R(0, 0)));
    contact.frame.rotation = yaw_rotation(kHeading);
    contact.frame.origin = {point.x(), point.y(), 0.0};
    sim.state.q = project_pose(model, sim.state.q, {contact}, 20);
  } else {
    contact = rbd::anchor_contact(model, kin, landing, yaw_rotation(kHeading));
  }
  const rbd::Kinematics kin_snap = rbd::compute_kinematics(model, sim.state.q, sim.state.qd);
  const ContactFrame frame =
      contact_frame_for_step(rbd::foot_reference_pose(model, kin_snap, landing), kHeading);
  contact.frame = frame;

  const Eigen::Vector3d liftoff = rbd::foot_reference_point(model, kin_snap, stance_foot(sim.stance));
  sim.state.qd = rbd::impact_map(model, sim.state, {contact});
  require_finite(sim.state, "impact");

  const rbd::Kinematics kin_plus = rbd::compute_kinematics(model, sim.state.q, sim.state.qd);
  const AlipMeasurement plus = measure_alip_state(model, kin_plus, sim.state.qd, frame);
  ev.x_plus = plus.x;
  ev.y_plus = plus.y;
  ev.vertical_velocity_jump = rbd::com_state(model, kin_plus, sim.state.qd).velocity.z() - vz_minus;
  ev.contact_origin = frame.origin.head<2>();

  sim.stance = opposite(sim.stance);
  sim.contact = contact;
  sim.step += 1;
  sim.t_step = 0.0;
  sim.landing_frozen = false;

  const Eigen::Vector2d cmd = sc.schedule.command(sim.t);
  const double ramp = sc.gains.velocity_ramp_per_step;
  sim.spec.v_x = ramp_toward(sim.spec.v_x, cmd.x(), ramp);
  sim.spec.v_y = ramp_toward(sim.spec.v_y, cmd.y(), ramp);
  sim.swing = SwingReference(liftoff, liftoff.head<2>(), sim.spec.step_duration, sc.gains.swing_apex, kHeading);
  return ev;
}

SimState periodic_stand(const Scenario& sc, Stance first_stance, const GaitSpec& spec) {
  const rbd::RobotModel& model = sc.model;
  const AlipParams& P = sc.params;
  spec.validate();

  // Previous step of the same orbit gives the liftoff position of the swing foot.
  const auto prev_start = periodic_step_start(opposite(first_stance), spec, P);
  const TemplateRollout r = rollout_template(
      prev_start.first, prev_start.second, opposite(first_stance), [&](int) { return spec; }, P, 2);
  const Eigen::Vector2d displacement = r.steps[1].contact_origin - r.steps[0].contact_origin;
  const SagittalState x0 = r.steps[1].x_plus;
  const FrontalState y0 = r.steps[1].y_plus;

  const Eigen::Vector3d stance_point(0.0, first_stance == Stance::LeftSupport ? 0.5 * spec.step_width
                                                                              : -0.5 * spec.step_width,
                                     0.0);
  const Eigen::Vector3d swing_point = stance_point - Eigen::Vector3d(displacement.x(), displacement.y(), 0.0);
  const Eigen::Vector3d com_target = stance_point + Eigen::Vector3d(x0.p_x, y0.p_y, P.height());

  rbd::State st = rbd::neutral_state(model, com_target - Eigen::Vector3d(0.0, 0.0, 0.1));
  const std::vector<int> arms = posture_bodies(model);
  const Eigen::VectorXd arm_q = posture_targets(sc, arms);
  for (std::size_t i = 0; i < arms.size(); ++i) st.q(model.q_index(arms[i])) = arm_q(static_cast<Eigen::Index>(i));

  // Bent-knee seed so the solver settles on the knee-forward branch.
  std::vector<int> free_v{0, 1, 2, 3, 4, 5};
  for (int b : leg_bodies(model)) {
    free_v.push_back(model.v_index(b));
    const rbd::Body& body = model.body(b);
    const bool pitch = body.axis.cwiseAbs().isApprox(Eigen::Vector3d::UnitY());
    if (!pitch) continue;
    const int depth = [&] {
      int d = 0;
      for (int a = body.parent; a > 0 && model.body(a).axis.cwiseAbs().isApprox(Eigen::Vector3d::UnitY()); a = model.body(a).parent) ++d;
      return d;
    }();
    st.q(model.q_index(b)) = depth == 0 ? -0.3 : depth == 1 ? 0.6 : -0.3;
  }
  const auto nf = static_cast<Eigen::Index>(free_v.size());

  const rbd::FootSide sf = stance_foot(first_stance);
  const rbd::FootSide wf = swing_foot(first_stance);
  const Eigen::Matrix3d flat = yaw_rotation(kHeading);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.nv());
  auto select = [&](const Eigen::MatrixXd& Jfull) {
    Eigen::MatrixXd out(Jfull.rows(), nf);
    for (Eigen::Index c = 0; c < nf; ++c) out.col(c) = Jfull.col(free_v[static_cast<std::size_t>(c)]);
    return out;
  };

  const Eigen::Index n_rows = 18;
  double err = 1.0;
  for (int it = 0; it < 100 && err > 1e-13; ++it) {
    const rbd::Kinematics kin = rbd::compute_kinematics(model, st.q, zero);
    const rbd::CentroidalTerms ct = rbd::centroidal_momentum(model, kin, zero);
    Eigen::MatrixXd Jf(n_rows, model.nv());
    Eigen::VectorXd e(n_rows);
    Eigen::Index row = 0;
    for (const auto& [side, target] : {std::pair{sf, stance_point}, std::pair{wf, swing_point}}) {
      const int body = model.foot(side).body;
      const Eigen::Vector3d p = rbd::foot_reference_point(model, kin, side);
      Jf.middleRows(row, 6) = rbd::point_jacobian(model, kin, body, p);
      e.segment<3>(row) = rbd::rotation_log(flat * kin.rotation[static_cast<std::size_t>(body)].transpose());
      e.segment<3>(row + 3) = target - p;
      row += 6;
    }
    Jf.middleRows(row, 3) = ct.A.bottomRows<3>() / ct.mass;
    e.segment<3>(row) = com_target - ct.p_com;
    row += 3;
    Jf.middleRows(row, 3) = rbd::point_jacobian(model, kin, 0, kin.position[0]).topRows<3>();
    e.segment<3>(row) = rbd::rotation_log(flat * kin.rotation[0].transpose());
    err = e.lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd step = select(Jf).fullPivLu().solve(e);
    Eigen::VectorXd dv = Eigen::VectorXd::Zero(model.nv());
    for (Eigen::Index c = 0; c < nf; ++c) dv(free_v[static_cast<std::size_t>(c)]) = step(c);
    st.q = rbd::integrate(model, st.q, dv, 1.0);
  }
  if (!(err <= 1e-9)) throw ConfigError("periodic stand: no leg configuration reaches the requested CoM height");

  // Velocity: both feet at rest, zero centroidal angular momentum, template CoM velocity.
  const rbd::Kinematics kin = rbd::compute_kinematics(model, st.q, zero);
  const rbd::CentroidalTerms ct = rbd::centroidal_momentum(model, kin, zero);
  Eigen::MatrixXd Jv(n_rows, model.nv());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_rows);
  Jv.topRows(12) = rbd::contact_jacobian(model, kin, {rbd::anchor_contact(model, kin, sf, flat),
                                                      rbd::anchor_contact(model, kin, wf, flat)});
  Jv.bottomRows(6) = ct.A;
  const double mH = P.mass() * P.height();
  rhs.segment<3>(15) = P.mass() * flat * Eigen::Vector3d(x0.L_cy / mH, -y0.L_cx / mH, 0.0);
  const Eigen::VectorXd v = select(Jv).fullPivLu().solve(rhs);
  st.qd.setZero();
  for (Eigen::Index c = 0; c < nf; ++c) st.qd(free_v[static_cast<std::size_t>(c)]) = v(c);

  SimState sim;
  sim.state = st;
  sim.stance = first_stance;
  sim.spec = spec;
  const rbd::Kinematics kin_final = rbd::compute_kinematics(model, st.q, st.qd);
  sim.contact = rbd::anchor_contact(model, kin_final, sf, flat);
  sim.contact.frame = contact_frame_for_step(rbd::foot_reference_pose(model, kin_final, sf), kHeading);
  const Eigen::Vector3d liftoff = rbd::foot_reference_point(model, kin_final, wf);
  sim.swing = SwingReference(liftoff, liftoff.head<2>(), spec.step_duration, sc.gains.swing_apex, kHeading);
  return sim;
}

}  // namespace alip::sim
