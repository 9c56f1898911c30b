#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace alip {

/// Constants of the angular-momentum linear inverted pendulum.
///
/// The pendulum frequency is derived from (mass, height, gravity) at
/// construction and the object is immutable afterwards.
class AlipParams {
 public:
  AlipParams(double mass, double height, double gravity = 9.81);

  double mass() const { return mass_; }
  double height() const { return height_; }
  double gravity() const { return gravity_; }
  double ell() const { return ell_; }

  /// m * H * ell, the scale that converts CoM offsets into contact momentum.
  double momentum_scale() const { return mass_ * height_ * ell_; }

 private:
  double mass_;
  double height_;
  double gravity_;
  double ell_;
};

/// Sagittal template state in the per-step contact frame {c}.
struct SagittalState {
  double p_x = 0.0;   // CoM offset along the forward axis [m]
  double L_cy = 0.0;  // contact angular momentum about y [kg m^2/s]

  Eigen::Vector2d vec() const { return {p_x, L_cy}; }
  static SagittalState from(const Eigen::Vector2d& v) { return {v(0), v(1)}; }
};

/// Frontal template state in the per-step contact frame {c}.
struct FrontalState {
  double p_y = 0.0;   // CoM offset along the lateral axis [m]
  double L_cx = 0.0;  // contact angular momentum about x [kg m^2/s]

  Eigen::Vector2d vec() const { return {p_y, L_cx}; }
  static FrontalState from(const Eigen::Vector2d& v) { return {v(0), v(1)}; }
};

/// Momentum of the whole system about its CoM (angular) and its linear momentum.
struct CentroidalMomentum {
  Eigen::Vector3d L_com = Eigen::Vector3d::Zero();
  Eigen::Vector3d K_com = Eigen::Vector3d::Zero();
};

/// Parallel-axis shift of the centroidal angular momentum to the contact point:
/// L_c = L_com + p_com x (m v_com). All vectors in the same contact frame.
Eigen::Vector3d contact_from_centroidal(const Eigen::Vector3d& L_com, const Eigen::Vector3d& p_com,
                                        const Eigen::Vector3d& v_com, double mass);

/// Horizontal CoM velocity implied by the contact momentum under constant height.
Eigen::Vector2d alip_velocity(const SagittalState& x, const FrontalState& y,
                              const Eigen::Vector2d& L_com_xy, const AlipParams& params);

/// Rate of contact angular momentum: p_com x (m g) + reaction moment.
Eigen::Vector3d contact_momentum_rate(const Eigen::Vector3d& p_com, double mass,
                                      const Eigen::Vector3d& g_vec, const Eigen::Vector3d& lambda_m);

/// State transition matrix of the sagittal template over t >= 0 seconds.
Eigen::Matrix2d transition_matrix_sagittal(const AlipParams& params, double t);
/// State transition matrix of the frontal template over t >= 0 seconds.
Eigen::Matrix2d transition_matrix_frontal(const AlipParams& params, double t);

SagittalState flow(const SagittalState& x, double t, const AlipParams& params);
FrontalState flow(const FrontalState& y, double t, const AlipParams& params);

}  // namespace alip
