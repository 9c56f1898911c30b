#include "alip/planner/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alip {

namespace {

void require_step_time(double t, const GaitSpec& spec) {
  if (!(t >= 0.0) || !(t <= spec.step_duration)) {
    throw std::invalid_argument("step time must lie in [0, T]");
  }
}

}  // namespace

void GaitSpec::validate() const {
  if (!(step_duration > 0.0)) throw std::invalid_argument("GaitSpec: step duration must be positive");
  if (!(step_width > 0.0)) throw std::invalid_argument("GaitSpec: step width must be positive");
  if (!std::isfinite(v_x) || !std::isfinite(v_y)) throw std::invalid_argument("GaitSpec: non-finite velocity");
}

double estimate_Lcy_end(const SagittalState& x, double t, const GaitSpec& spec, const AlipParams& params) {
  require_step_time(t, spec);
  const double tau = params.ell() * (spec.step_duration - t);
  return params.momentum_scale() * std::sinh(tau) * x.p_x + std::cosh(tau) * x.L_cy;
}

double desired_Lcy(const GaitSpec& spec, const AlipParams& params) {
  spec.validate();
  const double lT = params.ell() * spec.step_duration;
  return 0.5 * params.momentum_scale() * spec.v_x * spec.step_duration * (1.0 + std::cosh(lT)) / std::sinh(lT);
}

double forward_placement(double L_hat_cy, double L_d_cy, const GaitSpec& spec, const AlipParams& params) {
  spec.validate();
  const double lT = params.ell() * spec.step_duration;
  return (L_d_cy - std::cosh(lT) * L_hat_cy) / (params.momentum_scale() * std::sinh(lT));
}

double estimate_Lcx_end(const FrontalState& y, double t, const GaitSpec& spec, const AlipParams& params) {
  require_step_time(t, spec);
  const double tau = params.ell() * (spec.step_duration - t);
  return -params.momentum_scale() * std::sinh(tau) * y.p_y + std::cosh(tau) * y.L_cx;
}

double p_star(Stance stance, const GaitSpec& spec) {
  const double half = 0.5 * spec.step_width;
  if (stance == Stance::LeftSupport) return half - std::min(0.0, spec.v_y) * spec.step_duration;
  return -half - std::max(0.0, spec.v_y) * spec.step_duration;
}

double desired_Lcx(Stance stance, const GaitSpec& spec, const AlipParams& params) {
  spec.validate();
  const double lT = params.ell() * spec.step_duration;
  const double k = params.momentum_scale();
  const double s = std::sinh(lT);
  const double c = std::cosh(lT);
  return -k * (s / (1.0 + c)) * p_star(stance, spec) - k * (c / s) * spec.v_y * spec.step_duration;
}

double lateral_placement(double L_hat_cx, double L_d_cx, const GaitSpec& spec, const AlipParams& params) {
  spec.validate();
  const double lT = params.ell() * spec.step_duration;
  return -(L_d_cx - std::cosh(lT) * L_hat_cx) / (params.momentum_scale() * std::sinh(lT));
}

FootPlacement plan_step(const SagittalState& x, const FrontalState& y, double t, Stance stance,
                        const GaitSpec& spec, const AlipParams& params) {
  const double L_hat_cy = estimate_Lcy_end(x, t, spec, params);
  const double L_hat_cx = estimate_Lcx_end(y, t, spec, params);
  return {forward_placement(L_hat_cy, desired_Lcy(spec, params), spec, params),
          lateral_placement(L_hat_cx, desired_Lcx(stance, spec, params), spec, params)};
}

FootPlacement clamp_placement(const FootPlacement& u, Stance stance, const GaitSpec& spec,
                              const ReachBox& box, bool* clamped) {
  const double centre = stance == Stance::LeftSupport ? 0.5 * spec.step_width : -0.5 * spec.step_width;
  FootPlacement out{std::clamp(u.u_x, -box.forward, box.forward),
                    std::clamp(u.u_y, centre - box.lateral, centre + box.lateral)};
  if (clamped != nullptr) *clamped = out.u_x != u.u_x || out.u_y != u.u_y;
  return out;
}

Eigen::Vector2d landing_point(const SagittalState& x, const FrontalState& y, double t,
                              const FootPlacement& u, const GaitSpec& spec, const AlipParams& params) {
  require_step_time(t, spec);
  const double remaining = spec.step_duration - t;
  const SagittalState x_end = flow(x, remaining, params);
  const FrontalState y_end = flow(y, remaining, params);
  return {x_end.p_x - u.u_x, y_end.p_y - u.u_y};
}

double ramp_toward(double current, double target, double max_delta) {
  if (!(max_delta > 0.0)) return target;
  return current + std::clamp(target - current, -max_delta, max_delta);
}

}  // namespace alip
