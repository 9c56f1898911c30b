#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "alip/core/errors.hpp"
#include "alip/planner/rollout.hpp"
#include "alip/sim/scenario.hpp"
#include "alip/validation/oracles.hpp"
#include "generators.hpp"

namespace {

using namespace alip;
using namespace alip::sim;
using alip::testing::Gen;

Scenario standing(double duration, const rbd::RobotModel& model = alip::testing::surrogate_model()) {
  Scenario sc(model, 0.88);
  sc.schedule = GaitSchedule({{0.0, duration, 0.0, 0.0}});
  return sc;
}

TEST(GaitSchedule, RejectsMalformedWindows) {
  EXPECT_THROW(GaitSchedule(std::vector<ScheduleEntry>{}), ConfigError);
  EXPECT_THROW(GaitSchedule({{0, 2, 0, 0}, {1.5, 4, 0, 0}}), ConfigError);
  EXPECT_THROW(GaitSchedule({{0, 2, 0, 0}, {2.5, 4, 0, 0}}), ConfigError);
  EXPECT_THROW(GaitSchedule({{0, 2, 0, 0}, {2, 2, 0, 0}}), ConfigError);
  EXPECT_THROW(GaitSchedule({{1, 2, 0, 0}}), ConfigError);
  EXPECT_THROW(GaitSchedule({{0, 2, std::nan(""), 0}}), ConfigError);
}

TEST(GaitSchedule, PiecewiseConstantAndHoldsLastCommand) {
  const GaitSchedule s({{0, 2, 0.0, 0.0}, {2, 8, 0.225, 0.0}, {8, 10, 0.0, -0.225}});
  EXPECT_EQ(s.command(1.999), Eigen::Vector2d(0.0, 0.0));
  EXPECT_EQ(s.command(2.0), Eigen::Vector2d(0.225, 0.0));
  EXPECT_EQ(s.command(9.0), Eigen::Vector2d(0.0, -0.225));
  EXPECT_EQ(s.command(50.0), Eigen::Vector2d(0.0, -0.225));
  EXPECT_DOUBLE_EQ(s.end_time(), 10.0);
}

TEST(Measure, MatchesPerBodySummationAboutContact) {
  const rbd::RobotModel model = alip::testing::surrogate_model();
  Gen g(71);
  for (int i = 0; i < 50; ++i) {
    const rbd::State s = g.state(model, 1.0, 1.0);
    ContactFrame f;
    f.rotation = Eigen::AngleAxisd(g.uniform(-3.0, 3.0), Eigen::Vector3d::UnitZ()).toRotationMatrix();
    f.origin = g.vec3(-1.0, 1.0);
    const AlipMeasurement m = measure_alip_state(model, s.q, s.qd, f);
    const auto h = validation::momentum_by_summation(model, s.q, s.qd, f.origin);
    const Eigen::Vector3d L = f.vector_to_local(h.head<3>());
    EXPECT_LE((m.L_c - L).norm(), 1e-10 * (1.0 + L.norm()));
    EXPECT_NEAR(m.x.L_cy, L.y(), 1e-10 * (1.0 + L.norm()));
    EXPECT_NEAR(m.y.L_cx, L.x(), 1e-10 * (1.0 + L.norm()));
    const Eigen::Vector3d p = f.point_to_local(rbd::centroidal_momentum(model, rbd::compute_kinematics(model, s.q, s.qd), s.qd).p_com);
    EXPECT_NEAR(m.x.p_x, p.x(), 1e-12);
    EXPECT_NEAR(m.y.p_y, p.y(), 1e-12);
  }
}

TEST(Measure, HalfTurnOfFrameFlipsHorizontalComponents) {
  const rbd::RobotModel model = alip::testing::surrogate_model();
  Gen g(72);
  const rbd::State s = g.state(model, 1.0, 1.0);
  ContactFrame a;
  a.origin = g.vec3(-0.5, 0.5);
  ContactFrame b = a;
  b.rotation = Eigen::AngleAxisd(std::numbers::pi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const AlipMeasurement ma = measure_alip_state(model, s.q, s.qd, a);
  const AlipMeasurement mb = measure_alip_state(model, s.q, s.qd, b);
  EXPECT_NEAR(ma.x.p_x, -mb.x.p_x, 1e-12);
  EXPECT_NEAR(ma.y.p_y, -mb.y.p_y, 1e-12);
  EXPECT_NEAR(ma.x.L_cy, -mb.x.L_cy, 1e-10);
  EXPECT_NEAR(ma.y.L_cx, -mb.y.L_cx, 1e-10);
  EXPECT_NEAR(ma.L_c.z(), mb.L_c.z(), 1e-10);
}

TEST(PeriodicStand, StartsOnTheTemplateOrbit) {
  const Scenario sc = standing(1.0);
  GaitSpec spec = sc.gait;
  spec.v_x = 0.225;
  const SimState s = periodic_stand(sc, Stance::LeftSupport, spec);
  const auto [x0, y0] = periodic_step_start(Stance::LeftSupport, spec, sc.params);
  const AlipMeasurement m = measure_alip_state(sc.model, s.state.q, s.state.qd, s.contact.frame);
  EXPECT_NEAR(m.x.p_x, x0.p_x, 1e-8);
  EXPECT_NEAR(m.y.p_y, y0.p_y, 1e-8);
  EXPECT_NEAR(m.x.L_cy, x0.L_cy, 1e-6);
  EXPECT_NEAR(m.y.L_cx, y0.L_cx, 1e-6);
  EXPECT_NEAR(m.p_com_c.z(), sc.params.height(), 1e-8);
  EXPECT_LE(m.L_com_c.norm(), 1e-8);
}

TEST(RunScenario, IsDeterministic) {
  const Scenario sc = standing(1.0);
  const ScenarioResult a = run_scenario(sc);
  const ScenarioResult b = run_scenario(sc);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    ASSERT_EQ(a.records[i].com, b.records[i].com);
    ASSERT_EQ(a.records[i].tau, b.records[i].tau);
  }
}

class InPlace : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { result_ = new ScenarioResult(run_scenario(standing(10.0))); }
  static void TearDownTestSuite() { delete result_; }
  static ScenarioResult* result_;
};
ScenarioResult* InPlace::result_ = nullptr;

TEST_F(InPlace, CompletesWithoutFailureFlags) {
  EXPECT_TRUE(result_->summary.completed);
  EXPECT_FALSE(result_->summary.failed()) << format_summary(result_->summary);
}

TEST_F(InPlace, MeanVelocityNearZeroAndHeightHeld) {
  const auto& r = result_->records;
  const LogRecord& a = r[1000];
  const LogRecord& b = r.back();
  const Eigen::Vector2d mean_v = (b.com - a.com).head<2>() / (b.t - a.t);
  EXPECT_LE(mean_v.cwiseAbs().maxCoeff(), 0.02);
  double worst = 0.0;
  for (const LogRecord& x : r) worst = std::max(worst, std::abs(x.com.z() - 0.88));
  EXPECT_LE(worst, 2e-3);
}

TEST_F(InPlace, StancesAlternateEveryStepDuration) {
  const auto& steps = result_->steps;
  ASSERT_GE(steps.size(), 20u);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    EXPECT_EQ(steps[i].stance, i % 2 == 0 ? Stance::LeftSupport : Stance::RightSupport);
    EXPECT_NEAR(steps[i].t, 0.4 * static_cast<double>(i + 1), 1e-9);
  }
}

TEST_F(InPlace, ImpactNeverAddsUpwardVelocity) {
  for (const StepEvent& s : result_->steps) EXPECT_LE(s.vertical_velocity_jump, 1e-9);
}

TEST_F(InPlace, StanceFootHoldsAndConstraintIsMet) {
  EXPECT_LE(result_->summary.max_stance_drift, 5e-3);
  EXPECT_EQ(result_->summary.snaps, 0);
  for (const LogRecord& r : result_->records) ASSERT_LE(r.constraint_residual, 1e-8);
}

TEST(RunScenario, WithoutMomentumTaskHeightIsLost) {
  Scenario sc = standing(4.0);
  sc.gains.momentum_task_enabled = false;
  const ScenarioResult r = run_scenario(sc);
  double worst = 0.0;
  for (const LogRecord& x : r.records) worst = std::max(worst, std::abs(x.com.z() - 0.88));
  EXPECT_TRUE(r.summary.failed() || worst > 0.01) << "height error " << worst;
}

TEST(RunScenario, HalvingDtConvergesAtFirstOrder) {
  const auto com_at = [](double dt) {
    Scenario sc = standing(0.4);
    sc.options.dt = dt;
    return run_scenario(sc).records.back().com;
  };
  // The last record sits at t = 0.4 - dt; that offset is itself first order.
  const Eigen::Vector3d c1 = com_at(2e-3), c2 = com_at(1e-3), c4 = com_at(5e-4);
  const double e1 = (c1 - c2).norm(), e2 = (c2 - c4).norm();
  ASSERT_GT(e2, 0.0);
  EXPECT_GT(e1 / e2, 1.5);
  EXPECT_LT(e1 / e2, 2.8);
}

TEST(RunScenario, DoubledArmMassStillWalksInPlace) {
  const rbd::RobotModel heavy = alip::testing::surrogate_model().with_scaled_bodies(
      [](const rbd::Body& b) {
        return b.name.find("shoulder") != std::string::npos || b.name.find("arm") != std::string::npos;
      },
      2.0);
  const ScenarioResult r = run_scenario(standing(4.0, heavy));
  EXPECT_FALSE(r.summary.failed()) << format_summary(r.summary);
}

}  // namespace
