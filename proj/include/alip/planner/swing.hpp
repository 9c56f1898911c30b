#pragma once

#include <array>

#include <Eigen/Core>

namespace alip {

/// Position, velocity and acceleration of the swing-foot reference point,
/// plus a flat orientation given by its yaw.
struct SwingSample {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();
  double yaw = 0.0;
};

/// Quintic segment on [t0, t1] ending at rest.
class QuinticToRest {
 public:
  QuinticToRest() = default;
  QuinticToRest(double t0, double t1, double p0, double v0, double a0, double p1);

  /// Value, first and second time derivatives at t (clamped to the segment).
  Eigen::Vector3d evaluate(double t) const;
  double end_time() const { return t1_; }

 private:
  double t0_ = 0.0;
  double t1_ = 1.0;
  std::array<double, 6> c_{};
};

/// Swing-foot reference over one step, expressed in the step's contact frame.
///
/// Horizontal motion is a quintic to the landing point with zero terminal
/// velocity and acceleration; it is re-fit from the reference's own current
/// state whenever the landing point changes, which keeps it C2. Vertical
/// motion is a fixed pair of quintics rising to the apex at mid-step and
/// landing at zero height with zero velocity.
class SwingReference {
 public:
  SwingReference() = default;
  SwingReference(const Eigen::Vector3d& liftoff, const Eigen::Vector2d& landing, double duration, double apex,
                 double yaw = 0.0);

  void retarget(double t, const Eigen::Vector2d& landing);
  SwingSample sample(double t) const;

  double duration() const { return duration_; }
  double apex() const { return apex_; }
  const Eigen::Vector2d& landing() const { return landing_; }

 private:
  double duration_ = 0.0;
  double apex_ = 0.0;
  double yaw_ = 0.0;
  Eigen::Vector2d landing_ = Eigen::Vector2d::Zero();
  std::array<QuinticToRest, 2> horizontal_;
  QuinticToRest rise_;
  QuinticToRest fall_;
};

}  // namespace alip
