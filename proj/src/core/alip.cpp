#include "alip/core/alip.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace alip {

namespace {

void require_forward_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("template flow requires a finite t >= 0, got " + std::to_string(t));
  }
}

}  // namespace

AlipParams::AlipParams(double mass, double height, double gravity)
    : mass_(mass), height_(height), gravity_(gravity) {
  if (!(mass > 0.0) || !(height > 0.0) || !(gravity > 0.0)) {
    throw std::invalid_argument("AlipParams: mass, height and gravity must be positive");
  }
  ell_ = std::sqrt(gravity_ / height_);
}

Eigen::Vector3d contact_from_centroidal(const Eigen::Vector3d& L_com, const Eigen::Vector3d& p_com,
                                        const Eigen::Vector3d& v_com, double mass) {
  return L_com + p_com.cross(mass * v_com);
}

Eigen::Vector2d alip_velocity(const SagittalState& x, const FrontalState& y,
                              const Eigen::Vector2d& L_com_xy, const AlipParams& params) {
  const double mH = params.mass() * params.height();
  return {(x.L_cy - L_com_xy(1)) / mH, (-y.L_cx + L_com_xy(0)) / mH};
}

Eigen::Vector3d contact_momentum_rate(const Eigen::Vector3d& p_com, double mass,
                                      const Eigen::Vector3d& g_vec, const Eigen::Vector3d& lambda_m) {
  return p_com.cross(mass * g_vec) + lambda_m;
}

Eigen::Matrix2d transition_matrix_sagittal(const AlipParams& params, double t) {
  require_forward_time(t);
  const double lt = params.ell() * t;
  const double k = params.momentum_scale();
  const double c = std::cosh(lt);
  const double s = std::sinh(lt);
  Eigen::Matrix2d m;
  m << c, s / k, k * s, c;
  return m;
}

Eigen::Matrix2d transition_matrix_frontal(const AlipParams& params, double t) {
  require_forward_time(t);
  const double lt = params.ell() * t;
  const double k = params.momentum_scale();
  const double c = std::cosh(lt);
  const double s = std::sinh(lt);
  Eigen::Matrix2d m;
  m << c, -s / k, -k * s, c;
  return m;
}

SagittalState flow(const SagittalState& x, double t, const AlipParams& params) {
  return SagittalState::from(transition_matrix_sagittal(params, t) * x.vec());
}

FrontalState flow(const FrontalState& y, double t, const AlipParams& params) {
  return FrontalState::from(transition_matrix_frontal(params, t) * y.vec());
}

}  // namespace alip
