#include "alip/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alip/core/errors.hpp"

namespace alip::sim {

ScenarioResult run_scenario(const Scenario& sc, const MetricOptions& metrics, const RecordSink& sink) {
  sc.options.validate();
  sc.gains.validate();
  sc.gait.validate();

  ScenarioResult result;
  Summary& sum = result.summary;
  const double dt = sc.options.dt;
  const double duration = sc.options.duration > 0.0 ? sc.options.duration : sc.schedule.end_time();
  sum.requested_duration = duration;
  const long n_ticks = std::lround(duration / dt);
  const long ticks_per_step = std::lround(sc.gait.step_duration / dt);
  if (ticks_per_step < 2 || std::abs(ticks_per_step * dt - sc.gait.step_duration) > 1e-9) {
    throw ConfigError("step duration must be an integer multiple of dt");
  }

  GaitSpec spec = sc.gait;
  const Eigen::Vector2d cmd0 = sc.schedule.command(0.0);
  spec.v_x = cmd0.x();
  spec.v_y = cmd0.y();
  SimState sim = periodic_stand(sc, Stance::LeftSupport, spec);

  result.records.reserve(static_cast<std::size_t>(n_ticks));
  long tick_in_step = 0;
  int wrench_run = 0;
  int reach_run = 0;
  bool step_clamped = false;
  double step_drift = 0.0;
  double step_peak = 0.0;
  double mid_cx = 0.0, mid_cy = 0.0;
  const double sub_dt = dt / sc.options.substeps;

  long k = 0;
  try {
    for (; k < n_ticks; ++k) {
      if (tick_in_step == ticks_per_step) {
        StepEvent ev = step_transition(sc, sim);
        ev.L_hat_cx_mid = mid_cx;
        ev.L_hat_cy_mid = mid_cy;
        ev.peak_L_c = std::max(step_peak, Eigen::Vector2d(ev.x_minus.L_cy, ev.y_minus.L_cx).norm());
        ev.stance_drift = step_drift;
        sum.max_stance_drift = std::max(sum.max_stance_drift, step_drift);
        if (ev.snapped) {
          ++sum.snaps;
          sum.max_snap_distance = std::max(sum.max_snap_distance, std::abs(ev.touchdown_height));
        }
        sum.max_vertical_velocity_jump = std::max(sum.max_vertical_velocity_jump, ev.vertical_velocity_jump);
        result.steps.push_back(ev);

        reach_run = step_clamped ? reach_run + 1 : 0;
        sum.longest_reach_streak = std::max(sum.longest_reach_streak, reach_run);
        if (reach_run >= sc.options.reach_streak_limit) sum.reach_streak = true;
        step_clamped = false;
        step_drift = 0.0;
        step_peak = 0.0;
        tick_in_step = 0;
      }

      TickResult tick = control_tick(sc, sim);
      LogRecord& rec = tick.record;
      step_clamped = step_clamped || rec.placement_clamped;
      step_peak = std::max(step_peak, Eigen::Vector2d(rec.x.L_cy, rec.y.L_cx).norm());
      if (tick_in_step == ticks_per_step / 2) {
        mid_cx = rec.L_hat_cx;
        mid_cy = rec.L_hat_cy;
      }

      for (int s = 0; s < sc.options.substeps; ++s) {
        const AdvanceResult adv = advance(sc, sim, tick.control.tau, sub_dt);
        sim.state = adv.state;
        step_drift += adv.pose_error;
        if (s == 0) rec.lambda = wbc::ContactWrench::from(adv.lambda.head<6>());
      }
      rec.wrench_violation = wbc::wrench_violation(rec.lambda, sc.gains.limits);
      ++tick_in_step;
      sim.t = static_cast<double>(k + 1) * dt;
      sim.t_step = static_cast<double>(tick_in_step) * dt;

      sum.max_constraint_residual = std::max(sum.max_constraint_residual, rec.constraint_residual);
      sum.max_wrench_violation = std::max(sum.max_wrench_violation, rec.wrench_violation);
      wrench_run = rec.wrench_saturated ? wrench_run + 1 : 0;
      sum.longest_wrench_streak = std::max(sum.longest_wrench_streak, wrench_run);
      if (wrench_run >= sc.options.wrench_streak_limit) sum.wrench_streak = true;

      if (sink) sink(rec);
      result.records.push_back(std::move(rec));

      const double height = result.records.back().com.z() - sim.contact.frame.origin.z();
      if (std::abs(height - sc.params.height()) > sc.options.height_divergence) {
        throw DivergenceError("CoM height left the admissible band at t = " + std::to_string(sim.t));
      }
    }
  } catch (const DivergenceError& e) {
    sum.diverged = true;
    sum.divergence_message = e.what();
  } catch (const rbd::SingularConstraintError& e) {
    sum.diverged = true;
    sum.divergence_message = std::string("contact solve failed: ") + e.what();
  }

  sum.duration = static_cast<double>(k) * dt;
  sum.completed = !sum.diverged && k == n_ticks;
  sum.steps = static_cast<int>(result.steps.size());
  evaluate_windows(sc, result.records, result.steps, metrics, sum);
  return result;
}

}  // namespace alip::sim
