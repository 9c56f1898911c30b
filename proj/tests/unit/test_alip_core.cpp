#include <cmath>

#include <gtest/gtest.h>

#include "alip/core/alip.hpp"
#include "alip/core/errors.hpp"
#include "alip/validation/oracles.hpp"
#include "generators.hpp"

namespace {

using alip::AlipParams;
using alip::FrontalState;
using alip::SagittalState;
using alip::testing::Gen;

const AlipParams kParams(150.0, 0.9, 9.81);

double rel_err(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

TEST(AlipParams, EllIsDerived) {
  EXPECT_DOUBLE_EQ(kParams.ell(), std::sqrt(9.81 / 0.9));
  EXPECT_DOUBLE_EQ(kParams.momentum_scale(), 150.0 * 0.9 * kParams.ell());
}

TEST(AlipParams, RejectsNonPositive) {
  EXPECT_THROW(AlipParams(0.0, 0.9), std::invalid_argument);
  EXPECT_THROW(AlipParams(150.0, -0.1), std::invalid_argument);
  EXPECT_THROW(AlipParams(150.0, 0.9, 0.0), std::invalid_argument);
  EXPECT_THROW(AlipParams(std::nan(""), 0.9), std::invalid_argument);
}

TEST(ContactFromCentroidal, RestIsZero) {
  const Eigen::Vector3d L = alip::contact_from_centroidal(Eigen::Vector3d::Zero(), {0, 0, 0.9}, Eigen::Vector3d::Zero(), 150);
  EXPECT_EQ(L, Eigen::Vector3d::Zero());
}

TEST(ContactFromCentroidal, ForwardMotionAtHeight) {
  const Eigen::Vector3d L = alip::contact_from_centroidal(Eigen::Vector3d::Zero(), {0, 0, 0.9}, {0.45, 0, 0}, 150);
  EXPECT_NEAR(L.x(), 0.0, 1e-12);
  EXPECT_NEAR(L.y(), 60.75, 1e-12);
  EXPECT_NEAR(L.z(), 0.0, 1e-12);
}

TEST(ContactFromCentroidal, MatchesComponentwiseExpansion) {
  Gen g(11);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d Lc = g.vec3(-5, 5), p = g.vec3(-1, 1), v = g.vec3(-1, 1);
    const double m = g.uniform(1, 200);
    const Eigen::Vector3d got = alip::contact_from_centroidal(Lc, p, v, m);
    const Eigen::Vector3d want(Lc.x() + m * (p.y() * v.z() - p.z() * v.y()),
                               Lc.y() + m * (p.z() * v.x() - p.x() * v.z()),
                               Lc.z() + m * (p.x() * v.y() - p.y() * v.x()));
    EXPECT_LE((got - want).norm(), 1e-12 * (1 + want.norm()));
  }
}

TEST(AlipVelocity, RestAndInverse) {
  EXPECT_EQ(alip::alip_velocity({0.1, 0.0}, {0.0, 0.0}, Eigen::Vector2d::Zero(), kParams).x(), 0.0);
  EXPECT_NEAR(alip::alip_velocity({0.0, 60.75}, {}, Eigen::Vector2d::Zero(), kParams).x(), 0.45, 1e-12);
}

TEST(AlipVelocity, MatchesDirectFormula) {
  Gen g(12);
  for (int i = 0; i < 100; ++i) {
    const SagittalState x{g.uniform(-0.2, 0.2), g.uniform(-80, 80)};
    const FrontalState y{g.uniform(-0.2, 0.2), g.uniform(-80, 80)};
    const Eigen::Vector2d Lcom(g.uniform(-5, 5), g.uniform(-5, 5));
    const Eigen::Vector2d v = alip::alip_velocity(x, y, Lcom, kParams);
    const double mH = 150.0 * 0.9;
    EXPECT_NEAR(v.x(), (x.L_cy - Lcom.y()) / mH, 1e-12);
    EXPECT_NEAR(v.y(), (-y.L_cx + Lcom.x()) / mH, 1e-12);
  }
}

TEST(AlipVelocity, InvertsContactMomentumAtConstantHeight) {
  Gen g(13);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d p(g.uniform(-0.3, 0.3), g.uniform(-0.3, 0.3), 0.9);
    const Eigen::Vector3d v(g.uniform(-1, 1), g.uniform(-1, 1), 0.0);
    const Eigen::Vector3d Lc = alip::contact_from_centroidal(Eigen::Vector3d::Zero(), p, v, 150.0);
    const Eigen::Vector2d got = alip::alip_velocity({p.x(), Lc.y()}, {p.y(), Lc.x()}, Eigen::Vector2d::Zero(), kParams);
    EXPECT_NEAR(got.x(), v.x(), 1e-12);
    EXPECT_NEAR(got.y(), v.y(), 1e-12);
  }
}

TEST(ContactMomentumRate, Examples) {
  const Eigen::Vector3d g(0, 0, -9.81);
  EXPECT_LE(alip::contact_momentum_rate({0, 0, 0.9}, 150, g, Eigen::Vector3d::Zero()).norm(), 1e-12);
  const Eigen::Vector3d r = alip::contact_momentum_rate({0.1, 0, 0.9}, 150, g, Eigen::Vector3d::Zero());
  EXPECT_NEAR(r.y(), 147.15, 1e-9);
  EXPECT_NEAR(r.x(), 0.0, 1e-12);
  EXPECT_EQ(alip::contact_momentum_rate(Eigen::Vector3d::Zero(), 150, g, {1, 2, 3}), Eigen::Vector3d(1, 2, 3));
}

TEST(TransitionMatrix, IdentityAtZero) {
  EXPECT_TRUE(alip::transition_matrix_sagittal(kParams, 0.0).isIdentity(0.0));
  EXPECT_TRUE(alip::transition_matrix_frontal(kParams, 0.0).isIdentity(0.0));
}

TEST(TransitionMatrix, UnitDeterminantOverTwoSeconds) {
  for (int k = 0; k <= 2000; ++k) {
    const double t = 1e-3 * k;
    EXPECT_NEAR(alip::transition_matrix_sagittal(kParams, t).determinant(), 1.0, 1e-10);
    EXPECT_NEAR(alip::transition_matrix_frontal(kParams, t).determinant(), 1.0, 1e-10);
  }
}

TEST(TransitionMatrix, FrontalIsSagittalWithNegatedOffDiagonal) {
  for (double t : {0.1, 0.4, 1.3}) {
    Eigen::Matrix2d Mx = alip::transition_matrix_sagittal(kParams, t);
    Mx(0, 1) = -Mx(0, 1);
    Mx(1, 0) = -Mx(1, 0);
    EXPECT_TRUE(Mx.isApprox(alip::transition_matrix_frontal(kParams, t), 1e-15));
  }
}

TEST(TransitionMatrix, Semigroup) {
  Gen g(14);
  for (int i = 0; i < 100; ++i) {
    const double t1 = g.uniform(0, 1), t2 = g.uniform(0, 1);
    const Eigen::Matrix2d a = alip::transition_matrix_sagittal(kParams, t1) * alip::transition_matrix_sagittal(kParams, t2);
    const Eigen::Matrix2d b = alip::transition_matrix_sagittal(kParams, t1 + t2);
    const Eigen::Matrix2d c = alip::transition_matrix_frontal(kParams, t1) * alip::transition_matrix_frontal(kParams, t2);
    const Eigen::Matrix2d d = alip::transition_matrix_frontal(kParams, t1 + t2);
    // Entries span several orders of magnitude; compare each relative to its own scale.
    for (int r = 0; r < 2; ++r) {
      for (int col = 0; col < 2; ++col) {
        EXPECT_LE(std::abs(a(r, col) - b(r, col)), 1e-10 * std::max(1.0, std::abs(b(r, col))));
        EXPECT_LE(std::abs(c(r, col) - d(r, col)), 1e-10 * std::max(1.0, std::abs(d(r, col))));
      }
    }
  }
}

TEST(TransitionMatrix, RejectsNegativeTime) {
  EXPECT_THROW(alip::transition_matrix_sagittal(kParams, -1e-9), std::invalid_argument);
  EXPECT_THROW(alip::transition_matrix_frontal(kParams, std::nan("")), std::invalid_argument);
}

TEST(TransitionMatrix, MatchesRk4AtStepDuration) {
  using alip::validation::rk4_linear;
  const Eigen::Matrix2d Ax = alip::validation::sagittal_system(150, 0.9, 9.81);
  const Eigen::Matrix2d Ay = alip::validation::frontal_system(150, 0.9, 9.81);
  const Eigen::Matrix2d Mx = alip::transition_matrix_sagittal(kParams, 0.4);
  const Eigen::Matrix2d My = alip::transition_matrix_frontal(kParams, 0.4);
  for (int c = 0; c < 2; ++c) {
    const Eigen::Vector2d e = Eigen::Vector2d::Unit(c);
    EXPECT_LE(rel_err(Mx.col(c), rk4_linear(Ax, e, 0.4, 1e-5)), 1e-9);
    EXPECT_LE(rel_err(My.col(c), rk4_linear(Ay, e, 0.4, 1e-5)), 1e-9);
  }
}

TEST(Flow, ZeroTimeAndComposition) {
  const SagittalState x{0.05, 5.0};
  EXPECT_EQ(alip::flow(x, 0.0, kParams).vec(), x.vec());
  const SagittalState a = alip::flow(alip::flow(x, 0.13, kParams), 0.27, kParams);
  const SagittalState b = alip::flow(x, 0.40, kParams);
  EXPECT_LE(rel_err(a.vec(), b.vec()), 1e-10);
}

TEST(Flow, MatchesRk4FixtureState) {
  const SagittalState x{0.05, 5.0};
  const Eigen::Vector2d want =
      alip::validation::rk4_linear(alip::validation::sagittal_system(150, 0.9, 9.81), x.vec(), 0.4, 1e-5);
  EXPECT_LE(rel_err(alip::flow(x, 0.4, kParams).vec(), want), 1e-9);
}

TEST(Flow, MatchesRk4OnRandomStates) {
  Gen g(15);
  const Eigen::Matrix2d Ax = alip::validation::sagittal_system(150, 0.9, 9.81);
  const Eigen::Matrix2d Ay = alip::validation::frontal_system(150, 0.9, 9.81);
  for (int i = 0; i < 100; ++i) {
    const double t = g.uniform(1e-3, 1.0);
    const SagittalState x{g.uniform(-0.3, 0.3), g.uniform(-100, 100)};
    const FrontalState y{g.uniform(-0.3, 0.3), g.uniform(-100, 100)};
    EXPECT_LE(rel_err(alip::flow(x, t, kParams).vec(), alip::validation::rk4_linear(Ax, x.vec(), t, 1e-5)), 1e-9);
    EXPECT_LE(rel_err(alip::flow(y, t, kParams).vec(), alip::validation::rk4_linear(Ay, y.vec(), t, 1e-5)), 1e-9);
  }
}

}  // namespace
