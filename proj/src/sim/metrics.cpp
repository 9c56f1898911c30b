#include "alip/sim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace alip::sim {

namespace {

bool all_windows(const Summary& s, bool WindowMetrics::*flag) {
  return std::all_of(s.windows.begin(), s.windows.end(), [flag](const WindowMetrics& w) { return w.*flag; });
}

}  // namespace

bool Summary::tracking_ok() const { return all_windows(*this, &WindowMetrics::velocity_ok); }
bool Summary::height_ok() const { return all_windows(*this, &WindowMetrics::height_ok); }
bool Summary::ratio_ok() const { return all_windows(*this, &WindowMetrics::ratio_ok); }
bool Summary::prediction_ok() const { return all_windows(*this, &WindowMetrics::prediction_ok); }

void evaluate_windows(const Scenario& sc, const std::vector<LogRecord>& records, const std::vector<StepEvent>& steps,
                      const MetricOptions& opt, Summary& summary) {
  summary.windows.clear();
  if (records.empty()) return;
  const double dt = sc.options.dt;
  const auto lag = static_cast<long>(std::lround(opt.average_window / dt));
  const double T = sc.gait.step_duration;
  const double end = records.back().t + dt;

  Eigen::Vector2d previous = sc.schedule.command(0.0);
  for (const ScheduleEntry& e : sc.schedule.entries()) {
    WindowMetrics w;
    w.command = {e.v_x, e.v_y};
    const double jump = (w.command - previous).cwiseAbs().maxCoeff();
    const double ramp = sc.gains.velocity_ramp_per_step;
    const double ramp_steps = ramp > 0.0 ? std::ceil(jump / ramp - 1e-9) : 0.0;
    previous = w.command;
    w.t_start = e.t_start + ramp_steps * T + opt.average_window;
    w.t_end = std::min(e.t_end, end);
    if (!(w.t_end > w.t_start)) continue;
    w.velocity_tolerance = (opt.velocity_relative * w.command.cwiseAbs()).cwiseMax(opt.velocity_absolute);

    double sum_com = 0.0, sum_c = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const LogRecord& r = records[i];
      if (r.t < w.t_start - 1e-9 || r.t >= w.t_end - 1e-9) continue;
      ++w.samples;
      if (static_cast<long>(i) >= lag) {
        const LogRecord& past = records[i - static_cast<std::size_t>(lag)];
        const Eigen::Vector2d v_avg = (r.com - past.com).head<2>() / (r.t - past.t);
        w.max_velocity_error = w.max_velocity_error.cwiseMax((v_avg - w.command).cwiseAbs());
      }
      w.max_height_error = std::max(w.max_height_error, std::abs(r.com.z() - sc.params.height()));
      sum_com += r.L_com.head<2>().squaredNorm();
      sum_c += Eigen::Vector2d(r.y.L_cx, r.x.L_cy).squaredNorm();
    }
    if (w.samples > 0) {
      w.rms_L_com = std::sqrt(sum_com / w.samples);
      w.rms_L_c = std::sqrt(sum_c / w.samples);
    }

    for (const StepEvent& s : steps) {
      const double t0 = s.t - T;
      if (t0 < w.t_start - 1e-9 || s.t > w.t_end + 1e-9) continue;
      ++w.steps_evaluated;
      const double err = std::max(std::abs(s.L_hat_cx_mid - s.y_minus.L_cx), std::abs(s.L_hat_cy_mid - s.x_minus.L_cy));
      w.max_prediction_error = std::max(w.max_prediction_error, s.peak_L_c > 0.0 ? err / s.peak_L_c : 0.0);
    }

    w.velocity_ok = (w.max_velocity_error.array() <= w.velocity_tolerance.array()).all();
    w.height_ok = w.max_height_error <= opt.height_tolerance;
    w.ratio_ok = w.rms_L_com <= opt.momentum_ratio * w.rms_L_c;
    w.prediction_ok = w.max_prediction_error <= opt.prediction_fraction;
    summary.windows.push_back(w);
  }
}

std::string format_summary(const Summary& s) {
  std::string out;
  auto put = [&out](std::string_view key, const auto& value) { out += fmt::format("{}={}\n", key, value); };
  put("completed", s.completed);
  put("failed", s.failed());
  put("diverged", s.diverged);
  put("divergence_message", s.divergence_message);
  put("wrench_streak", s.wrench_streak);
  put("reach_streak", s.reach_streak);
  put("duration_s", s.duration);
  put("requested_duration_s", s.requested_duration);
  put("steps", s.steps);
  put("longest_wrench_streak_ticks", s.longest_wrench_streak);
  put("longest_reach_streak_steps", s.longest_reach_streak);
  put("max_constraint_residual", s.max_constraint_residual);
  put("max_wrench_violation", s.max_wrench_violation);
  put("max_stance_drift_m", s.max_stance_drift);
  put("snaps", s.snaps);
  put("max_snap_distance_m", s.max_snap_distance);
  put("max_vertical_velocity_jump_mps", s.max_vertical_velocity_jump);
  put("tracking_ok", s.tracking_ok());
  put("height_ok", s.height_ok());
  put("momentum_ratio_ok", s.ratio_ok());
  put("prediction_ok", s.prediction_ok());
  for (std::size_t i = 0; i < s.windows.size(); ++i) {
    const WindowMetrics& w = s.windows[i];
    const std::string p = fmt::format("window.{}.", i);
    put(p + "t_start_s", w.t_start);
    put(p + "t_end_s", w.t_end);
    put(p + "command_x_mps", w.command.x());
    put(p + "command_y_mps", w.command.y());
    put(p + "max_velocity_error_x_mps", w.max_velocity_error.x());
    put(p + "max_velocity_error_y_mps", w.max_velocity_error.y());
    put(p + "velocity_tolerance_x_mps", w.velocity_tolerance.x());
    put(p + "velocity_tolerance_y_mps", w.velocity_tolerance.y());
    put(p + "max_height_error_m", w.max_height_error);
    put(p + "rms_L_com", w.rms_L_com);
    put(p + "rms_L_c", w.rms_L_c);
    put(p + "max_prediction_error_fraction", w.max_prediction_error);
    put(p + "steps_evaluated", w.steps_evaluated);
    put(p + "velocity_ok", w.velocity_ok);
    put(p + "height_ok", w.height_ok);
    put(p + "ratio_ok", w.ratio_ok);
    put(p + "prediction_ok", w.prediction_ok);
  }
  return out;
}

}  // namespace alip::sim
