#pragma once

#include <Eigen/Core>

#include "alip/core/alip.hpp"

namespace alip {

/// Step timing, in-place width and commanded CoM velocity for one step.
struct GaitSpec {
  double step_duration = 0.4;  // T [s]
  double step_width = 0.2;     // W [m]
  double v_x = 0.0;            // desired forward CoM velocity [m/s]
  double v_y = 0.0;            // desired lateral CoM velocity [m/s]

  void validate() const;
};

enum class Stance { LeftSupport, RightSupport };

inline Stance opposite(Stance s) {
  return s == Stance::LeftSupport ? Stance::RightSupport : Stance::LeftSupport;
}

inline const char* to_string(Stance s) { return s == Stance::LeftSupport ? "L" : "R"; }

/// Deadbeat placement. (u_x, u_y) is the CoM position relative to the next
/// contact at the start of the next step, expressed in the current {c}.
struct FootPlacement {
  double u_x = 0.0;
  double u_y = 0.0;
};

/// Predicted sagittal contact momentum at the end of the current step.
double estimate_Lcy_end(const SagittalState& x, double t, const GaitSpec& spec, const AlipParams& params);
/// Contact momentum that the sagittal orbit for spec.v_x has at every step end.
double desired_Lcy(const GaitSpec& spec, const AlipParams& params);
double forward_placement(double L_hat_cy, double L_d_cy, const GaitSpec& spec, const AlipParams& params);

double estimate_Lcx_end(const FrontalState& y, double t, const GaitSpec& spec, const AlipParams& params);
/// Signed lateral CoM offset targeted at the end of the next step; never
/// smaller than W/2 in magnitude.
double p_star(Stance stance, const GaitSpec& spec);
double desired_Lcx(Stance stance, const GaitSpec& spec, const AlipParams& params);
double lateral_placement(double L_hat_cx, double L_d_cx, const GaitSpec& spec, const AlipParams& params);

/// Full placement for the current measured state at step time t in [0, T].
FootPlacement plan_step(const SagittalState& x, const FrontalState& y, double t, Stance stance,
                        const GaitSpec& spec, const AlipParams& params);

/// Kinematic reach limits on the placement, centred on (0, +-W/2).
struct ReachBox {
  double forward = 0.5;
  double lateral = 0.3;
};

/// Clamps the placement into the reach box. The lateral band is centred on
/// the in-place offset of the next stance foot: +W/2 when the current
/// support is left, -W/2 otherwise.
FootPlacement clamp_placement(const FootPlacement& u, Stance stance, const GaitSpec& spec,
                              const ReachBox& box, bool* clamped = nullptr);

/// Landing point of the swing foot in the current {c}: predicted CoM position
/// at the end of the step minus the placement.
Eigen::Vector2d landing_point(const SagittalState& x, const FrontalState& y, double t,
                              const FootPlacement& u, const GaitSpec& spec, const AlipParams& params);

/// Moves `current` towards `target` by at most max_delta.
double ramp_toward(double current, double target, double max_delta);

}  // namespace alip
