#include "alip/planner/rollout.hpp"

#include <cmath>

namespace alip {

TemplateRollout rollout_template(const SagittalState& x0, const FrontalState& y0, Stance first_stance,
                                 const std::function<GaitSpec(int)>& spec_for_step, const AlipParams& params,
                                 int num_steps, double sample_dt) {
  TemplateRollout out;
  SagittalState x = x0;
  FrontalState y = y0;
  Stance stance = first_stance;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double t_start = 0.0;
  for (int k = 0; k < num_steps; ++k) {
    const GaitSpec spec = spec_for_step(k);
    spec.validate();
    const double T = spec.step_duration;
    TemplateStep step;
    step.index = k;
    step.stance = stance;
    step.spec = spec;
    step.x_plus = x;
    step.y_plus = y;
    step.contact_origin = origin;
    step.placement = plan_step(x, y, 0.0, stance, spec, params);
    step.x_minus = flow(x, T, params);
    step.y_minus = flow(y, T, params);

    if (sample_dt > 0.0) {
      const int n = static_cast<int>(std::floor(T / sample_dt + 1e-9));
      for (int i = 0; i <= n; ++i) {
        const double t = std::min(i * sample_dt, T);
        TemplateSample s;
        s.step = k;
        s.stance = stance;
        s.t = t_start + t;
        s.x = flow(x, t, params);
        s.y = flow(y, t, params);
        s.com_world = origin + Eigen::Vector2d(s.x.p_x, s.y.p_y);
        out.samples.push_back(s);
      }
    }

    // Support transfer: the new contact sits at (p_end - u) in the old frame,
    // the contact momentum carries over unchanged.
    origin += Eigen::Vector2d(step.x_minus.p_x - step.placement.u_x, step.y_minus.p_y - step.placement.u_y);
    x = {step.placement.u_x, step.x_minus.L_cy};
    y = {step.placement.u_y, step.y_minus.L_cx};
    stance = opposite(stance);
    t_start += T;
    out.steps.push_back(step);
  }
  return out;
}

std::pair<SagittalState, FrontalState> periodic_step_start(Stance stance, const GaitSpec& spec,
                                                           const AlipParams& params) {
  // Deadbeat: every step from the third on starts on the orbit.
  const TemplateRollout r = rollout_template({}, {}, stance, [&](int) { return spec; }, params, 5);
  const TemplateStep& s = r.steps[4];
  return {s.x_plus, s.y_plus};
}

}  // namespace alip
