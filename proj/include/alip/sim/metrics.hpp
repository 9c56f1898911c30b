#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "alip/sim/simulation.hpp"

namespace alip::sim {

/// Thresholds of the steady-gait checks.
///
/// A window turns steady once the planner command has finished ramping from
/// the previous window's command and one full averaging interval has passed
/// since: settle = ceil(|dv| / ramp) * T + average_window.
struct MetricOptions {
  double average_window = 1.0;       // moving-average length for CoM velocity [s]
  double velocity_relative = 0.2;    // allowed fraction of the command
  double velocity_absolute = 0.05;   // floor of the allowed error [m/s]
  double height_tolerance = 0.01;    // |p_z - H| [m]
  double momentum_ratio = 0.3;       // RMS |L_com,xy| / RMS |L_c,xy|
  double prediction_fraction = 0.05; // |L_hat(mid) - L(end)| / step peak |L_c|
};

/// Checks over the steady part [t_start, t_end] of one schedule window.
struct WindowMetrics {
  double t_start = 0.0;
  double t_end = 0.0;
  Eigen::Vector2d command = Eigen::Vector2d::Zero();
  Eigen::Vector2d max_velocity_error = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity_tolerance = Eigen::Vector2d::Zero();
  double max_height_error = 0.0;
  double rms_L_com = 0.0;
  double rms_L_c = 0.0;
  double max_prediction_error = 0.0;  // as a fraction of the step peak
  int steps_evaluated = 0;
  int samples = 0;

  bool velocity_ok = true;
  bool height_ok = true;
  bool ratio_ok = true;
  bool prediction_ok = true;
};

struct Summary {
  double duration = 0.0;           // simulated [s]
  double requested_duration = 0.0;
  int steps = 0;
  bool completed = false;
  bool diverged = false;
  std::string divergence_message;
  bool wrench_streak = false;      // saturation held longer than the streak limit
  bool reach_streak = false;       // placement clamped on too many consecutive steps
  int longest_wrench_streak = 0;
  int longest_reach_streak = 0;
  double max_constraint_residual = 0.0;
  double max_wrench_violation = 0.0;
  double max_stance_drift = 0.0;   // per step [m]
  int snaps = 0;
  double max_snap_distance = 0.0;
  double max_vertical_velocity_jump = 0.0;  // largest positive jump at touchdown [m/s]
  std::vector<WindowMetrics> windows;

  bool failed() const { return diverged || !completed || wrench_streak || reach_streak; }
  bool tracking_ok() const;
  bool height_ok() const;
  bool ratio_ok() const;
  bool prediction_ok() const;
};

/// Fills the window checks of `summary` from the per-tick log and step events.
void evaluate_windows(const Scenario& scenario, const std::vector<LogRecord>& records,
                      const std::vector<StepEvent>& steps, const MetricOptions& options, Summary& summary);

/// key=value lines, one per scalar, windows indexed as window.<i>.<key>.
std::string format_summary(const Summary& summary);

}  // namespace alip::sim
