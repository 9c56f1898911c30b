#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alip/core/alip.hpp"
#include "alip/core/frames.hpp"
#include "alip/planner/planner.hpp"
#include "alip/planner/swing.hpp"
#include "alip/rbd/dynamics.hpp"
#include "alip/wbc/hierarchy.hpp"
#include "alip/wbc/tasks.hpp"
#include "alip/wbc/wrench.hpp"

namespace alip::sim {

/// Raised when the state leaves the finite, physically plausible region.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScheduleEntry {
  double t_start = 0.0;  // [s]
  double t_end = 0.0;    // [s]
  double v_x = 0.0;      // [m/s]
  double v_y = 0.0;      // [m/s]
};

/// Piecewise-constant velocity command. Entries are contiguous, ordered and
/// start at 0; the last command holds past the final entry.
class GaitSchedule {
 public:
  GaitSchedule() = default;
  /// Throws alip::ConfigError on gaps, overlaps, empty or reversed windows.
  explicit GaitSchedule(std::vector<ScheduleEntry> entries);

  const std::vector<ScheduleEntry>& entries() const { return entries_; }
  double end_time() const { return entries_.empty() ? 0.0 : entries_.back().t_end; }
  Eigen::Vector2d command(double t) const;

 private:
  std::vector<ScheduleEntry> entries_;
};

struct ControllerGains {
  wbc::Gains momentum;
  wbc::ServoGains swing_linear{400.0, 40.0};
  wbc::ServoGains swing_angular{400.0, 40.0};
  wbc::ServoGains posture{100.0, 20.0};
  wbc::ServoGains pelvis{100.0, 20.0};
  double swing_apex = 0.08;              // [m]
  double retarget_freeze_phase = 0.85;   // landing target frozen past this fraction of T
  double velocity_ramp_per_step = 0.1125;  // [m/s] change of the planner command per step
  ReachBox reach;
  wbc::WrenchLimits limits;
  /// Ablation switch. When off, the remaining levels move up one priority.
  bool momentum_task_enabled = true;

  ControllerGains();
  void validate() const;
};

struct SimOptions {
  double dt = 1e-3;             // control and physics period [s]
  int substeps = 1;             // physics steps per control tick
  double duration = 0.0;        // [s]; 0 means the schedule end
  double baumgarte_velocity = 0.0;  // alpha [1/s]
  double baumgarte_position = 0.0;  // beta [1/s]
  double snap_tolerance = 5e-3;     // [m]
  int projection_iterations = 3;
  int wrench_streak_limit = 100;    // consecutive saturated ticks before a failure flag
  int reach_streak_limit = 4;       // consecutive clamped steps before a failure flag
  double height_divergence = 0.25;  // |p_z - H| above this aborts [m]

  void validate() const;
};

struct Scenario {
  rbd::RobotModel model;
  AlipParams params;
  GaitSpec gait;  // T and W; velocities come from the schedule
  GaitSchedule schedule;
  ControllerGains gains;
  SimOptions options;
  Eigen::Vector3d gravity = Eigen::Vector3d(0.0, 0.0, -9.81);
  /// Joint angles held by the posture task, by body name; unlisted joints default to 0.
  std::vector<std::pair<std::string, double>> posture;

  Scenario(rbd::RobotModel model_, double com_height, double gravity_magnitude = 9.81);
};

struct SimState {
  rbd::State state;
  Stance stance = Stance::LeftSupport;
  int step = 0;
  double t = 0.0;       // wall clock [s]
  double t_step = 0.0;  // time since the last touchdown [s]
  rbd::Contact contact;  // stance foot anchor; contact.frame is {c}
  GaitSpec spec;         // ramped command used by the planner this step
  SwingReference swing;
  bool landing_frozen = false;
};

inline rbd::FootSide stance_foot(Stance s) {
  return s == Stance::LeftSupport ? rbd::FootSide::Left : rbd::FootSide::Right;
}
inline rbd::FootSide swing_foot(Stance s) { return stance_foot(opposite(s)); }

struct AlipMeasurement {
  SagittalState x;
  FrontalState y;
  Eigen::Vector3d p_com_c;  // CoM in {c}
  Eigen::Vector3d v_com_c;
  Eigen::Vector3d L_com_c;  // centroidal angular momentum in {c} axes
  Eigen::Vector3d L_c;      // contact angular momentum in {c} axes
};

AlipMeasurement measure_alip_state(const rbd::RobotModel& model, const rbd::Kinematics& kin,
                                   const Eigen::VectorXd& qd, const ContactFrame& frame);
AlipMeasurement measure_alip_state(const rbd::RobotModel& model, const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& qd, const ContactFrame& frame);

struct LogRecord {
  double t = 0.0;
  int step = 0;
  Stance stance = Stance::LeftSupport;
  double t_step = 0.0;
  SagittalState x;
  FrontalState y;
  Eigen::Vector3d L_com = Eigen::Vector3d::Zero();  // {c} axes
  double L_hat_cx = 0.0;
  double L_hat_cy = 0.0;
  Eigen::Vector2d v_command = Eigen::Vector2d::Zero();   // schedule
  Eigen::Vector2d v_planner = Eigen::Vector2d::Zero();   // ramped
  Eigen::Vector3d com = Eigen::Vector3d::Zero();         // world
  Eigen::Vector3d com_velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d com_desired = Eigen::Vector3d::Zero();
  Eigen::Vector3d com_velocity_desired = Eigen::Vector3d::Zero();
  rbd::Vector6d h = rbd::Vector6d::Zero();          // measured centroidal momentum (world)
  rbd::Vector6d h_desired = rbd::Vector6d::Zero();  // momentum the reference implies
  wbc::ContactWrench lambda;                        // executed, contact axes
  double wrench_violation = 0.0;
  bool wrench_modified = false;
  bool wrench_saturated = false;
  std::vector<double> level_residuals;
  double constraint_residual = 0.0;
  FootPlacement u;
  bool placement_clamped = false;
  Eigen::Vector2d landing = Eigen::Vector2d::Zero();  // world
  Eigen::VectorXd tau;
};

struct StepEvent {
  int step = 0;  // index of the step that just ended
  Stance stance = Stance::LeftSupport;
  double t = 0.0;
  SagittalState x_minus;  // old {c}
  FrontalState y_minus;
  SagittalState x_plus;  // new {c}
  FrontalState y_plus;
  double L_hat_cx_mid = 0.0;  // end-of-step estimate taken at mid-step
  double L_hat_cy_mid = 0.0;
  double peak_L_c = 0.0;       // max |L_c,xy| over the step
  double touchdown_height = 0.0;  // swing reference point height at the switch [m]
  bool snapped = false;
  double stance_drift = 0.0;   // summed pre-projection stance slip over the step [m]
  double vertical_velocity_jump = 0.0;  // vz+ - vz- of the CoM
  Eigen::Vector2d contact_origin = Eigen::Vector2d::Zero();  // new stance anchor (world)
};

struct TickResult {
  wbc::ControlOutput control;
  LogRecord record;
};

/// One controller evaluation. Retargets the swing reference stored in `sim`.
TickResult control_tick(const Scenario& scenario, SimState& sim);

struct AdvanceResult {
  rbd::State state;
  Eigen::VectorXd lambda;     // executed contact wrench (moment; force), contact axes
  double pose_error = 0.0;    // stance pose error before projection [m or rad]
};

/// Semi-implicit Euler under the stance constraint followed by projection of
/// the stance pose and velocity onto the constraint manifold.
AdvanceResult advance(const Scenario& scenario, const SimState& sim, const Eigen::VectorXd& tau, double dt);

/// Touchdown at the end of the step: plastic impact on the swing foot,
/// stance swap and a new {c}.
StepEvent step_transition(const Scenario& scenario, SimState& sim);

/// Pose that places the stance foot on the ground at the start of a step on
/// the periodic orbit of `spec`, with the CoM moving at the template velocity.
SimState periodic_stand(const Scenario& scenario, Stance first_stance, const GaitSpec& spec);

}  // namespace alip::sim
