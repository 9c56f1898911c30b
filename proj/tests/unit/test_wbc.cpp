#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include <Eigen/LU>

#include "alip/rbd/dynamics.hpp"
#include "alip/validation/oracles.hpp"
#include "alip/wbc/hierarchy.hpp"
#include "alip/wbc/nnls.hpp"
#include "alip/wbc/tasks.hpp"
#include "alip/wbc/wrench.hpp"
#include "generators.hpp"

namespace {

using namespace alip::wbc;
using alip::ContactFrame;
using alip::testing::Gen;
namespace rbd = alip::rbd;

const Eigen::Vector3d kGravity(0, 0, -9.81);

const rbd::RobotModel& robot() {
  static const rbd::RobotModel m = alip::testing::surrogate_model();
  return m;
}

TEST(Nnls, KnownSolution) {
  Eigen::MatrixXd A(3, 2);
  A << 1, 0, 0, 1, 1, 1;
  const Eigen::Vector3d b(-1, 2, 1);
  const Eigen::VectorXd x = nnls(A, b);
  // x1 clamps at zero; x2 = argmin (2 - x2)^2 + (1 - x2)^2.
  EXPECT_NEAR(x(0), 0.0, 1e-14);
  EXPECT_NEAR(x(1), 1.5, 1e-12);
}

TEST(Nnls, SatisfiesKktOnRandomProblems) {
  Gen g(51);
  for (int i = 0; i < 200; ++i) {
    const Eigen::MatrixXd A = Eigen::MatrixXd(g.vector(8 * 5, -1, 1).reshaped(8, 5));
    const Eigen::VectorXd b = g.vector(8, -1, 1);
    const Eigen::VectorXd x = nnls(A, b);
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    EXPECT_GE(x.minCoeff(), 0.0);
    for (int j = 0; j < 5; ++j) {
      if (x(j) > 0) EXPECT_NEAR(w(j), 0.0, 1e-10);
      else EXPECT_LE(w(j), 1e-10);
    }
  }
}

TEST(LeastDistance, HalfSpaceAndInfeasible) {
  Eigen::MatrixXd G(1, 2);
  G << 1, 1;
  const auto x = least_distance(G, Eigen::VectorXd::Constant(1, 2.0));
  ASSERT_TRUE(x.has_value());
  EXPECT_LE((*x - Eigen::Vector2d(1, 1)).norm(), 1e-12);
  Eigen::MatrixXd G2(2, 1);
  G2 << 1, -1;
  EXPECT_FALSE(least_distance(G2, Eigen::Vector2d(1, 1)).has_value());
}

TEST(Nullspace, PropertiesAndRank) {
  Gen g(52);
  for (int i = 0; i < 50; ++i) {
    const Eigen::MatrixXd J = Eigen::MatrixXd(g.vector(12 * 27, -1, 1).reshaped(12, 27));
    const Eigen::VectorXd jd = g.vector(12, -1, 1);
    const NullspaceParametrization p = nullspace_parametrization(J, jd);
    EXPECT_LE((J * p.qdd_particular + jd).norm(), 1e-10);
    EXPECT_LE((J * p.Z).norm(), 1e-10);
    EXPECT_LE((p.Z.transpose() * p.Z - Eigen::MatrixXd::Identity(p.Z.cols(), p.Z.cols())).norm(), 1e-10);
    EXPECT_EQ(p.Z.cols(), 27 - Eigen::FullPivLU<Eigen::MatrixXd>(J).rank());
    const Eigen::VectorXd z = g.vector(p.Z.cols(), -10, 10);
    EXPECT_LE((J * (p.qdd_particular + p.Z * z) + jd).norm(), 1e-10 * (1 + z.norm()));
  }
}

TEST(Nullspace, StationaryContactGivesZeroParticular) {
  const Eigen::MatrixXd J = Eigen::MatrixXd::Identity(6, 10);
  EXPECT_EQ(nullspace_parametrization(J, Eigen::VectorXd::Zero(6)).qdd_particular.norm(), 0.0);
}

TEST(Nullspace, RankDeficientThrows) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, 4);
  J.row(0) << 1, 2, 3, 4;
  J.row(1) = 2 * J.row(0);
  EXPECT_THROW(nullspace_parametrization(J, Eigen::Vector2d::Zero()), rbd::SingularConstraintError);
}

TEST(DesiredMomentumRate, Structure) {
  Gains gains;
  gains.K_P << 1, 2, 3, 40, 50, 60;
  gains.K_D << 4, 5, 6, 7, 8, 9;
  ComReference ref{{0.1, 0.2, 0.9}, {0.3, -0.1, 0.0}, {0.5, 0.4, 0.0}};
  const double m = 94.4;
  Vector6d h = Vector6d::Zero();
  h.tail<3>() = m * ref.velocity;
  Vector6d want = Vector6d::Zero();
  want.tail<3>() = m * ref.acceleration;
  EXPECT_LE((desired_momentum_rate(ref, ref.position, h, gains, m) - want).norm(), 1e-12);
  h.head<3>() << 1.0, -2.0, 0.5;
  const Vector6d out = desired_momentum_rate(ref, ref.position, h, gains, m);
  EXPECT_LE((out.head<3>() + gains.K_D.head<3>().cwiseProduct(h.head<3>())).norm(), 1e-12);
}

TEST(DesiredMomentumRate, MatchesFormula) {
  Gen g(53);
  for (int i = 0; i < 100; ++i) {
    Gains gains;
    gains.K_P = g.vector(6, 0.1, 50);
    gains.K_D = g.vector(6, 0.1, 50);
    const ComReference ref{g.vec3(-1, 1), g.vec3(-1, 1), g.vec3(-1, 1)};
    const Eigen::Vector3d p = g.vec3(-1, 1);
    const Vector6d h = g.vector(6, -10, 10);
    const double m = g.uniform(10, 150);
    const Vector6d out = desired_momentum_rate(ref, p, h, gains, m);
    for (int r = 0; r < 3; ++r) {
      EXPECT_NEAR(out(r), -gains.K_D(r) * h(r), 1e-10);
      EXPECT_NEAR(out(3 + r),
                  m * ref.acceleration(r) + gains.K_D(3 + r) * (m * ref.velocity(r) - h(3 + r)) +
                      gains.K_P(3 + r) * m * (ref.position(r) - p(r)),
                  1e-9);
    }
  }
}

TEST(Gains, RejectNonPositive) {
  Gains g;
  g.K_D(2) = 0.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(WrenchLimits, Validation) {
  WrenchLimits l;
  EXPECT_NO_THROW(l.validate());
  l.mu = 0;
  EXPECT_THROW(l.validate(), std::invalid_argument);
  l = WrenchLimits{};
  l.f_z_max = -1;
  EXPECT_THROW(l.validate(), std::invalid_argument);
}

ContactFrame frame_at(const Eigen::Vector3d& origin, double yaw) {
  return {Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix(), origin};
}

TEST(ConstrainMomentumRate, StaticStand) {
  const double m = 94.4;
  const Eigen::Vector3d p_com(0.02, 0.01, 0.9);
  const ContactFrame f = frame_at({0, 0, 0}, 0.0);
  const ConstrainedMomentumRate r = constrain_momentum_rate(Vector6d::Zero(), p_com, m, kGravity, f, WrenchLimits{});
  EXPECT_FALSE(r.modified);
  EXPECT_LE((r.wrench.force - Eigen::Vector3d(0, 0, m * 9.81)).norm(), 1e-10);
  // The reaction moment cancels the lever of the weight about the contact.
  const Eigen::Vector3d lever = (f.origin - p_com).cross(r.wrench.force);
  EXPECT_LE((r.wrench.moment + lever).norm(), 1e-10);
  EXPECT_EQ(r.hdot, Vector6d::Zero());
}

TEST(ConstrainMomentumRate, FeasibleRequestPassesThroughAndScales) {
  const double m = 94.4;
  const Eigen::Vector3d p_com(0.0, 0.0, 0.9);
  const ContactFrame f = frame_at({0, 0, 0}, 0.4);
  Vector6d hd = Vector6d::Zero();
  hd.tail<3>() << 20, -10, 5;
  const ConstrainedMomentumRate a = constrain_momentum_rate(hd, p_com, m, kGravity, f, WrenchLimits{});
  const ConstrainedMomentumRate b = constrain_momentum_rate(2 * hd, p_com, m, kGravity, f, WrenchLimits{});
  EXPECT_FALSE(a.modified);
  EXPECT_FALSE(b.modified);
  EXPECT_EQ(a.hdot, hd);
  EXPECT_EQ(b.hdot, 2 * hd);
}

TEST(ConstrainMomentumRate, CopBeyondToeLandsOnEdge) {
  const double m = 94.4;
  // CoM far ahead of the foot: the static CoP would be 0.3 m forward.
  const Eigen::Vector3d p_com(0.3, 0.0, 0.9);
  const ContactFrame f = frame_at({0, 0, 0}, 0.0);
  WrenchLimits lim;
  const ConstrainedMomentumRate r = constrain_momentum_rate(Vector6d::Zero(), p_com, m, kGravity, f, lim);
  EXPECT_TRUE(r.modified);
  const double cop_x = -r.wrench.moment.y() / r.wrench.force.z();
  EXPECT_NEAR(cop_x, lim.toe, 1e-6);
  EXPECT_LE(wrench_violation(r.wrench, lim), 1e-8);
}

TEST(ProjectWrench, MatchesExhaustiveActiveSetOracle) {
  Gen g(54);
  WrenchLimits lim;
  lim.margin = 0.0;
  lim.f_z_min = 10.0;
  lim.f_z_max = 2000.0;
  Eigen::Matrix<double, 12, 6> C;
  Eigen::Matrix<double, 12, 1> d;
  wrench_constraints(lim, C, d);
  Eigen::VectorXd w(6);
  w << kMomentWeight, kMomentWeight, kMomentWeight, 1, 1, 1;
  int modified = 0;
  for (int i = 0; i < 300; ++i) {
    ContactWrench req;
    req.force = Eigen::Vector3d(g.uniform(-600, 600), g.uniform(-600, 600), g.uniform(-200, 2500));
    req.moment = Eigen::Vector3d(g.uniform(-150, 150), g.uniform(-250, 250), g.uniform(-40, 40));
    const WrenchProjection p = project_wrench(req, lim);
    const Eigen::VectorXd want = alip::validation::exhaustive_projection(C, d, w, req.vec());
    modified += p.modified;
    EXPECT_LE((p.wrench.vec() - want).norm(), 1e-7 * (1 + want.norm())) << "case " << i;
    EXPECT_LE(wrench_violation(p.wrench, lim), 1e-8);
  }
  EXPECT_GT(modified, 100);
}

TEST(ProjectWrench, InfeasibleForceIsSaturated) {
  WrenchLimits lim;
  lim.f_z_min = 50.0;
  ContactWrench req;
  req.force.z() = -100.0;
  const WrenchProjection p = project_wrench(req, lim);
  EXPECT_TRUE(p.saturated);
  EXPECT_GE(p.wrench.force.z(), lim.f_z_min);
}

TEST(MomentumRateWrench, RoundTrip) {
  Gen g(55);
  for (int i = 0; i < 50; ++i) {
    const ContactFrame f = frame_at(g.vec3(-1, 1), g.uniform(-3, 3));
    const ContactWrench w{g.vec3(-50, 50), g.vec3(-500, 500)};
    const Eigen::Vector3d p = g.vec3(-1, 1);
    const Vector6d h = momentum_rate_from_wrench(w, f, p, 80.0, kGravity);
    const ContactWrench back = wrench_from_momentum_rate(h, f, p, 80.0, kGravity);
    EXPECT_LE((back.vec() - w.vec()).norm(), 1e-10);
  }
}

// Five-coordinate toy system without contacts.
NullspaceParametrization free_system(int n) { return {Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n)}; }

Task row_task(const std::string& name, Eigen::MatrixXd A, Eigen::VectorXd b, int priority) {
  return {name, A, Eigen::VectorXd::Zero(A.rows()), b, priority};
}

TEST(Hierarchy, SingleLevelIsLeastSquares) {
  Gen g(56);
  // Rank 3 with five rows: a genuine least-squares problem with a tie.
  const Eigen::MatrixXd A = Eigen::MatrixXd(g.vector(5 * 3, -1, 1).reshaped(5, 3)) *
                            Eigen::MatrixXd(g.vector(3 * 5, -1, 1).reshaped(3, 5));
  const Eigen::VectorXd b = g.vector(5, -1, 1);
  const LexicographicSolution s = solve_lexicographic({row_task("a", A, b, 1)}, free_system(5));
  const Eigen::VectorXd ls = A.completeOrthogonalDecomposition().solve(b);
  EXPECT_LE((s.qdd - ls).norm(), 1e-10);
  EXPECT_NEAR(s.levels[0].residual, (A * ls - b).norm(), 1e-10);
}

TEST(Hierarchy, ConflictingRankOneTasks) {
  Eigen::MatrixXd a1(1, 5), a2(1, 5);
  a1 << 1, 1, 0, 0, 0;
  a2 << 1, -1, 0, 0, 0;
  // Both also want x3 = 1, x4 = 0 at the lower level to force a conflict.
  Eigen::MatrixXd a2b(2, 5);
  a2b << a2, a1;
  const Eigen::Vector2d b2(3.0, 5.0);
  const LexicographicSolution s =
      solve_lexicographic({row_task("hi", a1, Eigen::VectorXd::Constant(1, 1.0), 1), row_task("lo", a2b, b2, 2)},
                          free_system(5));
  const Eigen::VectorXd want =
      alip::validation::lexicographic_oracle({a1, a2b}, {Eigen::VectorXd::Constant(1, 1.0), b2});
  EXPECT_LE((s.qdd - want).norm(), 1e-9);
  EXPECT_LE(s.levels[0].residual, 1e-12);
  EXPECT_NEAR(s.levels[1].residual, (a2b * want - b2).norm(), 1e-9);
  EXPECT_NEAR(s.levels[1].residual, 4.0, 1e-9);  // x1 + x2 is pinned to 1, request was 5
}

TEST(Hierarchy, MatchesDenseLexicographicOracle) {
  Gen g(57);
  for (int i = 0; i < 200; ++i) {
    std::vector<Eigen::MatrixXd> A;
    std::vector<Eigen::VectorXd> b;
    std::vector<Task> tasks;
    const int levels = g.integer(2, 4);
    for (int k = 0; k < levels; ++k) {
      const int rows = g.integer(1, 3);
      const int rank = g.integer(1, rows);
      Eigen::MatrixXd Ak = Eigen::MatrixXd(g.vector(rows * rank, -1, 1).reshaped(rows, rank)) *
                           Eigen::MatrixXd(g.vector(rank * 5, -1, 1).reshaped(rank, 5));
      Eigen::VectorXd bk = g.vector(rows, -2, 2);
      A.push_back(Ak);
      b.push_back(bk);
      tasks.push_back(row_task("t", Ak, bk, k + 1));
    }
    const LexicographicSolution s = solve_lexicographic(tasks, free_system(5));
    const Eigen::VectorXd want = alip::validation::lexicographic_oracle(A, b);
    for (int k = 0; k < levels; ++k) {
      EXPECT_NEAR(s.levels[static_cast<std::size_t>(k)].residual, (A[static_cast<std::size_t>(k)] * want - b[static_cast<std::size_t>(k)]).norm(), 1e-9);
    }
    EXPECT_LE((s.qdd - want).norm(), 1e-9 * (1 + want.norm())) << "case " << i;
  }
}

TEST(Hierarchy, LevelsAreLocallyOptimal) {
  Gen g(58);
  std::vector<Task> tasks;
  for (int k = 0; k < 3; ++k) {
    tasks.push_back(row_task("t", Eigen::MatrixXd(g.vector(2 * 7, -1, 1).reshaped(2, 7)), g.vector(2, -1, 1), k + 1));
  }
  const LexicographicSolution s = solve_lexicographic(tasks, free_system(7));
  Eigen::MatrixXd above(0, 7);
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const Eigen::MatrixXd N = above.rows() ? Eigen::MatrixXd(Eigen::FullPivLU<Eigen::MatrixXd>(above).kernel())
                                           : Eigen::MatrixXd::Identity(7, 7);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd dz = N * g.vector(N.cols(), -1e-3, 1e-3);
      const double r = (tasks[k].map * (s.qdd + dz) - tasks[k].target).norm();
      EXPECT_GE(r, s.levels[k].residual - 1e-9);
    }
    Eigen::MatrixXd next(above.rows() + 2, 7);
    next << above, tasks[k].map;
    above = next;
  }
}

TEST(Hierarchy, RowOrderWithinLevelIrrelevant) {
  Gen g(59);
  const Task a = row_task("a", Eigen::MatrixXd(g.vector(2 * 5, -1, 1).reshaped(2, 5)), g.vector(2, -1, 1), 1);
  const Task b = row_task("b", Eigen::MatrixXd(g.vector(4 * 5, -1, 1).reshaped(4, 5)), g.vector(4, -1, 1), 1);
  const Task c = row_task("c", Eigen::MatrixXd(g.vector(3 * 5, -1, 1).reshaped(3, 5)), g.vector(3, -1, 1), 2);
  const Eigen::VectorXd x1 = solve_lexicographic({a, b, c}, free_system(5)).qdd;
  const Eigen::VectorXd x2 = solve_lexicographic({c, b, a}, free_system(5)).qdd;
  EXPECT_LE((x1 - x2).norm(), 1e-10);
}

TEST(Hierarchy, ExhaustedNullspaceIsReportedNotThrown) {
  Gen g(60);
  const Task a = row_task("a", Eigen::MatrixXd::Identity(5, 5), g.vector(5, -1, 1), 1);
  const Task b = row_task("b", Eigen::MatrixXd(g.vector(2 * 5, -1, 1).reshaped(2, 5)), g.vector(2, 5, 6), 2);
  const LexicographicSolution s = solve_lexicographic({a, b}, free_system(5));
  EXPECT_TRUE(s.levels[0].achievable);
  EXPECT_EQ(s.levels[1].free_dimensions, 0);
  EXPECT_FALSE(s.levels[1].achievable);
  EXPECT_GT(s.levels[1].residual, 0.0);
}

TEST(Hierarchy, RejectsPriorityGaps) {
  const Task a = row_task("a", Eigen::MatrixXd::Identity(1, 5), Eigen::VectorXd::Zero(1), 2);
  EXPECT_THROW(solve_lexicographic({a}, free_system(5)), std::invalid_argument);
}

struct RobotFixture {
  rbd::State state;
  rbd::Kinematics kin;
  rbd::ContactSet contacts;
  Eigen::MatrixXd M, J;
  Eigen::VectorXd h, jd;
};

RobotFixture robot_fixture(Gen& g, bool double_support) {
  RobotFixture f;
  f.state = g.state(robot(), 0.5, 0.5);
  f.kin = rbd::compute_kinematics(robot(), f.state.q, f.state.qd);
  f.contacts.push_back(rbd::anchor_contact(robot(), f.kin, rbd::FootSide::Left, Eigen::Matrix3d::Identity()));
  if (double_support) {
    f.contacts.push_back(rbd::anchor_contact(robot(), f.kin, rbd::FootSide::Right, Eigen::Matrix3d::Identity()));
  }
  // Make the contacts stationary.
  const Eigen::MatrixXd J0 = rbd::contact_jacobian(robot(), f.kin, f.contacts);
  const Eigen::MatrixXd N = Eigen::FullPivLU<Eigen::MatrixXd>(J0).kernel();
  f.state.qd = N * g.vector(N.cols(), -0.5, 0.5);
  f.kin = rbd::compute_kinematics(robot(), f.state.q, f.state.qd);
  f.M = rbd::mass_matrix(robot(), f.kin);
  f.h = rbd::bias_forces(robot(), f.kin, kGravity);
  f.J = rbd::contact_jacobian(robot(), f.kin, f.contacts);
  f.jd = rbd::jdot_qdot(robot(), f.kin, f.contacts);
  return f;
}

TEST(SolveHierarchy, ConsistentWithDynamicsAndForwardSolve) {
  Gen g(61);
  for (int i = 0; i < 30; ++i) {
    RobotFixture f = robot_fixture(g, i % 3 == 0);
    const rbd::CentroidalTerms c = rbd::centroidal_momentum(robot(), f.kin, f.state.qd);
    Vector6d hdot = g.vector(6, -20, 20);
    std::vector<Task> tasks{momentum_task(c.A, c.Adot_qd, hdot)};
    std::vector<int> arms;
    for (int b = 1; b < robot().num_bodies(); ++b) {
      const std::string& n = robot().body(b).name;
      if (n.find("arm") != std::string::npos || n.find("shoulder") != std::string::npos || n == "torso") arms.push_back(b);
    }
    tasks.push_back(posture_task(robot(), f.state.q, f.state.qd, arms, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(arms.size())), ServoGains{}));
    tasks.back().priority = 2;
    const ControlOutput out = solve_hierarchy(tasks, f.M, f.h, f.J, f.jd);
    EXPECT_LE(out.constraint_residual, 1e-8);
    EXPECT_LE(out.dynamics_residual, 1e-8);
    EXPECT_TRUE(out.levels[0].achievable);
    // The simulated response to tau reproduces the controller's qdd and wrench.
    const rbd::ConstrainedDynamics cd =
        rbd::constrained_forward_dynamics(f.M, f.h, rbd::generalized_torque(robot(), out.tau), f.J, -f.jd);
    EXPECT_LE((cd.qdd - out.qdd).norm(), 1e-7 * (1 + out.qdd.norm()));
    if (f.contacts.size() == 1) {
      EXPECT_LE((cd.lambda - out.lambda[0].vec()).norm(), 1e-7 * (1 + cd.lambda.norm()));
      EXPECT_LE((c.A * out.qdd + c.Adot_qd - hdot).norm(), 1e-9 * (1 + hdot.norm()));
    }
  }
}

TEST(MomentumTask, ResidualMatchesLeastSquares) {
  Gen g(62);
  RobotFixture f = robot_fixture(g, false);
  const rbd::CentroidalTerms c = rbd::centroidal_momentum(robot(), f.kin, f.state.qd);
  const Vector6d hdot = g.vector(6, -20, 20);
  const Task t = momentum_task(c.A, c.Adot_qd, hdot);
  const NullspaceParametrization p = nullspace_parametrization(f.J, f.jd);
  const LexicographicSolution s = solve_lexicographic({t}, p);
  const Eigen::MatrixXd B = c.A * p.Z;
  const Eigen::VectorXd e = hdot - c.Adot_qd - c.A * p.qdd_particular;
  const Eigen::VectorXd z = B.completeOrthogonalDecomposition().solve(e);
  EXPECT_NEAR(s.levels[0].residual, (B * z - e).norm(), 1e-9);
}

TEST(MomentumTask, ZeroTargetAtRestStaysInNullspace) {
  rbd::State s = rbd::neutral_state(robot(), {0, 0, 1});
  const rbd::Kinematics kin = rbd::compute_kinematics(robot(), s.q, s.qd);
  const rbd::CentroidalTerms c = rbd::centroidal_momentum(robot(), kin, s.qd);
  const Task t = momentum_task(c.A, c.Adot_qd, Vector6d::Zero());
  const LexicographicSolution sol = solve_lexicographic({t}, free_system(robot().nv()));
  EXPECT_LE((c.A * sol.qdd).norm(), 1e-12);
}

TEST(PostureTask, SelectsOnlyListedJoints) {
  rbd::State s = rbd::neutral_state(robot());
  const std::vector<int> bodies{robot().body_index("torso"), robot().body_index("l_forearm")};
  const Task t = posture_task(robot(), s.q, s.qd, bodies, Eigen::Vector2d(0.1, -0.2), ServoGains{});
  EXPECT_EQ(t.map.rows(), 2);
  EXPECT_EQ(t.map.sum(), 2.0);
  EXPECT_EQ(t.map(0, robot().v_index(bodies[0])), 1.0);
  EXPECT_EQ(t.map(1, robot().v_index(bodies[1])), 1.0);
  EXPECT_NEAR(t.target(0), ServoGains{}.kp * 0.1, 1e-12);
  EXPECT_THROW(posture_task(robot(), s.q, s.qd, {0}, Eigen::VectorXd::Zero(1), ServoGains{}), std::invalid_argument);
}

TEST(SwingFootTask, OnReferenceTargetIsFeedforward) {
  Gen g(63);
  const rbd::State s = g.state(robot());
  const rbd::Kinematics kin = rbd::compute_kinematics(robot(), s.q, s.qd);
  const Eigen::Isometry3d pose = rbd::foot_reference_pose(robot(), kin, rbd::FootSide::Right);
  const rbd::Matrix6Xd J = rbd::point_jacobian(robot(), kin, robot().foot(rbd::FootSide::Right).body, pose.translation());
  const Vector6d v = J * s.qd;
  PoseReference ref{pose.translation(), v.tail<3>(), Eigen::Vector3d(0.3, -0.2, 1.0), pose.linear()};
  ServoGains ang{50, 10};
  const Task t = swing_foot_task(robot(), kin, rbd::FootSide::Right, ref, ServoGains{}, ang);
  EXPECT_LE((t.target.tail<3>() - ref.acceleration).norm(), 1e-10);
  EXPECT_LE((t.target.head<3>() + ang.kd * v.head<3>()).norm(), 1e-10);
}

TEST(SwingFootTask, IsolatedServoFollowsSecondOrderErrorDynamics) {
  // Kinematic rollout that realises only the swing task: the position error
  // must follow e'' + kd e' + kp e = 0.
  rbd::State s = rbd::neutral_state(robot(), {0, 0, 1});
  const ServoGains lin{100.0, 20.0};  // critically damped, e(t) = e0 (1 + w t) exp(-w t)
  const rbd::Kinematics k0 = rbd::compute_kinematics(robot(), s.q, s.qd);
  const Eigen::Isometry3d p0 = rbd::foot_reference_pose(robot(), k0, rbd::FootSide::Right);
  const Eigen::Vector3d goal = p0.translation() + Eigen::Vector3d(0.02, -0.01, 0.03);
  PoseReference ref{goal, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), p0.linear()};
  const double dt = 1e-4;
  const NullspaceParametrization free = free_system(robot().nv());
  for (int k = 0; k < 3000; ++k) {
    const rbd::Kinematics kin = rbd::compute_kinematics(robot(), s.q, s.qd);
    Task t = swing_foot_task(robot(), kin, rbd::FootSide::Right, ref, lin, ServoGains{100.0, 20.0});
    t.priority = 1;
    const Eigen::VectorXd qdd = solve_lexicographic({t}, free).qdd;
    const Eigen::VectorXd v_mid = s.qd + 0.5 * dt * qdd;
    s.q = rbd::integrate(robot(), s.q, v_mid, dt);
    s.qd += dt * qdd;
  }
  const double t_end = 0.3, w = 10.0;
  const rbd::Kinematics kin = rbd::compute_kinematics(robot(), s.q, s.qd);
  const Eigen::Vector3d e = goal - rbd::foot_reference_point(robot(), kin, rbd::FootSide::Right);
  const Eigen::Vector3d e0 = goal - p0.translation();
  const Eigen::Vector3d want = e0 * (1 + w * t_end) * std::exp(-w * t_end);
  EXPECT_LE((e - want).norm(), 2e-5);
}

}  // namespace
