#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "alip/core/alip.hpp"
#include "alip/planner/planner.hpp"

namespace alip {

/// One step of a pure-template rollout: states right after the previous
/// support transfer (+) and right before the next one (-).
struct TemplateStep {
  int index = 0;
  Stance stance = Stance::LeftSupport;
  GaitSpec spec;
  SagittalState x_plus;
  FrontalState y_plus;
  SagittalState x_minus;
  FrontalState y_minus;
  FootPlacement placement;
  Eigen::Vector2d contact_origin = Eigen::Vector2d::Zero();  // world position of this step's contact
};

struct TemplateSample {
  int step = 0;
  Stance stance = Stance::LeftSupport;
  double t = 0.0;  // time since the start of the rollout [s]
  SagittalState x;
  FrontalState y;
  Eigen::Vector2d com_world = Eigen::Vector2d::Zero();
};

struct TemplateRollout {
  std::vector<TemplateStep> steps;
  std::vector<TemplateSample> samples;
};

/// Closed-loop rollout of the template with the deadbeat planner and
/// instantaneous support transfer at exactly t = T. `spec_for_step` supplies
/// the gait command of each step. Samples are taken every `sample_dt`
/// seconds within each step (0 disables sampling).
TemplateRollout rollout_template(const SagittalState& x0, const FrontalState& y0, Stance first_stance,
                                 const std::function<GaitSpec(int)>& spec_for_step, const AlipParams& params,
                                 int num_steps, double sample_dt = 0.0);

/// Step-start state of the periodic orbit for `spec` when `stance` is the
/// support, found by iterating the deadbeat rollout from rest.
std::pair<SagittalState, FrontalState> periodic_step_start(Stance stance, const GaitSpec& spec,
                                                           const AlipParams& params);

}  // namespace alip
