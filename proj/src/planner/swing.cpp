#include "alip/planner/swing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alip {

QuinticToRest::QuinticToRest(double t0, double t1, double p0, double v0, double a0, double p1) : t0_(t0), t1_(t1) {
  if (!(t1 > t0)) throw std::invalid_argument("quintic segment needs t1 > t0");
  const double d = t1 - t0;
  c_[0] = p0;
  c_[1] = v0 * d;
  c_[2] = 0.5 * a0 * d * d;
  const double delta = p1 - c_[0] - c_[1] - c_[2];
  const double vel = -c_[1] - 2.0 * c_[2];
  const double acc = -2.0 * c_[2];
  c_[3] = 10.0 * delta - 4.0 * vel + 0.5 * acc;
  c_[4] = -15.0 * delta + 7.0 * vel - acc;
  c_[5] = 6.0 * delta - 3.0 * vel + 0.5 * acc;
}

Eigen::Vector3d QuinticToRest::evaluate(double t) const {
  const double d = t1_ - t0_;
  const double s = std::clamp((t - t0_) / d, 0.0, 1.0);
  double p = 0.0, dp = 0.0, ddp = 0.0;
  for (int k = 5; k >= 0; --k) p = p * s + c_[k];
  for (int k = 5; k >= 1; --k) dp = dp * s + k * c_[k];
  for (int k = 5; k >= 2; --k) ddp = ddp * s + k * (k - 1) * c_[k];
  return {p, dp / d, ddp / (d * d)};
}

SwingReference::SwingReference(const Eigen::Vector3d& liftoff, const Eigen::Vector2d& landing, double duration,
                               double apex, double yaw)
    : duration_(duration), apex_(apex), yaw_(yaw), landing_(landing) {
  if (!(duration > 0.0)) throw std::invalid_argument("swing duration must be positive");
  if (!landing.allFinite() || !liftoff.allFinite()) throw std::invalid_argument("swing endpoints must be finite");
  for (int i = 0; i < 2; ++i) horizontal_[i] = QuinticToRest(0.0, duration, liftoff(i), 0.0, 0.0, landing(i));
  rise_ = QuinticToRest(0.0, 0.5 * duration, liftoff(2), 0.0, 0.0, apex);
  fall_ = QuinticToRest(0.5 * duration, duration, apex, 0.0, 0.0, 0.0);
}

void SwingReference::retarget(double t, const Eigen::Vector2d& landing) {
  if (!landing.allFinite()) throw std::invalid_argument("swing landing point must be finite");
  if (t >= duration_) return;
  for (int i = 0; i < 2; ++i) {
    const Eigen::Vector3d now = horizontal_[i].evaluate(t);
    horizontal_[i] = QuinticToRest(t, duration_, now(0), now(1), now(2), landing(i));
  }
  landing_ = landing;
}

SwingSample SwingReference::sample(double t) const {
  SwingSample out;
  for (int i = 0; i < 2; ++i) {
    const Eigen::Vector3d h = horizontal_[i].evaluate(t);
    out.position(i) = h(0);
    out.velocity(i) = h(1);
    out.acceleration(i) = h(2);
  }
  const Eigen::Vector3d v = t < 0.5 * duration_ ? rise_.evaluate(t) : fall_.evaluate(t);
  out.position(2) = v(0);
  out.velocity(2) = v(1);
  out.acceleration(2) = v(2);
  out.yaw = yaw_;
  return out;
}

}  // namespace alip
