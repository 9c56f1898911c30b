#include "alip/validation/suites.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <fmt/format.h>

#include "alip/core/alip.hpp"
#include "alip/planner/planner.hpp"
#include "alip/planner/rollout.hpp"
#include "alip/rbd/dynamics.hpp"
#include "alip/validation/oracles.hpp"
#include "alip/wbc/hierarchy.hpp"
#include "alip/wbc/wrench.hpp"

namespace alip::validation {

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Eigen::VectorXd vector(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  Eigen::MatrixXd matrix(Eigen::Index r, Eigen::Index c, double lo, double hi) {
    return vector(r * c, lo, hi).reshaped(r, c);
  }
  rbd::State state(const rbd::RobotModel& model, double joint_amp, double rate_amp) {
    rbd::State s = rbd::neutral_state(model);
    Eigen::Vector4d quat = vector(4, -1.0, 1.0);
    while (quat.norm() < 1e-3) quat = vector(4, -1.0, 1.0);
    quat.normalize();
    rbd::set_base_pose(s.q, vector(3, -1.0, 1.0), Eigen::Quaterniond(quat(0), quat(1), quat(2), quat(3)));
    s.q.tail(model.num_actuated()) = vector(model.num_actuated(), -joint_amp, joint_amp);
    s.qd = vector(model.nv(), -rate_amp, rate_amp);
    return s;
  }

 private:
  std::mt19937_64 rng_;
};

CheckResult check(std::string name, double error, double tolerance, std::string detail = {}) {
  return {std::move(name), error, tolerance, error <= tolerance, std::move(detail)};
}

template <class F>
SuiteResult timed(std::string name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r{std::move(name), {}, 0.0};
  body(r.checks);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

const std::array<std::pair<double, double>, 6> kScheduleCommands{
    {{0.0, 0.0}, {0.225, 0.0}, {0.45, 0.0}, {0.0, -0.225}, {-0.225, 0.0}, {0.0, 0.225}}};

}  // namespace

SuiteResult alip_core_suite(const ValidationOptions& options) {
  return timed("alip_core", [&](std::vector<CheckResult>& out) {
    Sampler s(options.seed);
    const double m = 150.0, H = 0.9, g = 9.81;
    const AlipParams P(m, H, g);
    const Eigen::Matrix2d As = sagittal_system(m, H, g);
    const Eigen::Matrix2d Af = frontal_system(m, H, g);
    double worst_s = 0.0, worst_f = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double t = s.uniform(1e-3, 1.0);
      const Eigen::Vector2d x0(s.uniform(-0.3, 0.3), s.uniform(-60.0, 60.0));
      const Eigen::Vector2d y0(s.uniform(-0.3, 0.3), s.uniform(-60.0, 60.0));
      const Eigen::Vector2d xs = rk4_linear(As, x0, t, 1e-5);
      const Eigen::Vector2d ys = rk4_linear(Af, y0, t, 1e-5);
      Eigen::Matrix2d Mf = transition_matrix_frontal(P, t);
      if (options.inject_frontal_sign_error) {
        Mf(0, 1) = -Mf(0, 1);
        Mf(1, 0) = -Mf(1, 0);
      }
      worst_s = std::max(worst_s, (transition_matrix_sagittal(P, t) * x0 - xs).norm() / xs.norm());
      worst_f = std::max(worst_f, (Mf * y0 - ys).norm() / ys.norm());
    }
    out.push_back(check("sagittal flow vs RK4 (relative)", worst_s, 1e-9));
    out.push_back(check("frontal flow vs RK4 (relative)", worst_f, 1e-9,
                        options.inject_frontal_sign_error ? "frontal sign error injected" : ""));
  });
}

SuiteResult planner_suite(const ValidationOptions& options) {
  return timed("planner", [&](std::vector<CheckResult>& out) {
    Sampler s(options.seed + 1);
    const AlipParams P(150.0, 0.9, 9.81);
    double deadbeat = 0.0, displacement = 0.0, closure = 0.0;
    for (const auto& [vx, vy] : kScheduleCommands) {
      GaitSpec spec;
      spec.v_x = vx;
      spec.v_y = vy;
      for (Stance first : {Stance::LeftSupport, Stance::RightSupport}) {
        for (int seed = 0; seed < 3; ++seed) {
          SagittalState x0;
          FrontalState y0;
          if (seed > 0) {
            x0 = {s.uniform(-0.15, 0.15), s.uniform(-40.0, 40.0)};
            y0 = {s.uniform(-0.15, 0.15), s.uniform(-40.0, 40.0)};
          }
          const TemplateRollout r = rollout_template(x0, y0, first, [&](int) { return spec; }, P, 12);
          for (std::size_t k = 2; k < r.steps.size(); ++k) {
            deadbeat = std::max(deadbeat, std::abs(r.steps[k].x_minus.L_cy - desired_Lcy(spec, P)));
            deadbeat = std::max(deadbeat,
                                std::abs(r.steps[k].y_minus.L_cx - desired_Lcx(r.steps[k - 1].stance, spec, P)));
          }
          const auto com_start = [&](std::size_t k) {
            const TemplateStep& st = r.steps[k];
            return Eigen::Vector2d(st.contact_origin + Eigen::Vector2d(st.x_plus.p_x, st.y_plus.p_y));
          };
          for (std::size_t k = 3; k + 2 < r.steps.size(); ++k) {
            displacement = std::max(displacement, std::abs((com_start(k + 1) - com_start(k)).x() - vx * spec.step_duration));
            displacement =
                std::max(displacement, std::abs((com_start(k + 2) - com_start(k)).y() - 2.0 * vy * spec.step_duration));
          }
          // Within 10 steps: sagittal pre-impact state repeats every step, the
          // frontal one every stride (its sign follows the stance).
          const double gap = (r.steps[8].x_minus.vec() - r.steps[9].x_minus.vec()).norm() +
                             (r.steps[8].y_minus.vec() - r.steps[10].y_minus.vec()).norm();
          closure = std::max(closure, gap);
        }
      }
    }
    out.push_back(check("end-of-step momentum vs desired from step 2", deadbeat, 1e-8));
    out.push_back(check("per-step displacement vs v T on the orbit [m]", displacement, 1e-6));
    out.push_back(check("pre-impact closure within 10 steps", closure, 1e-8));
  });
}

SuiteResult rbd_suite(const ValidationOptions& options, const rbd::RobotModel& model) {
  return timed("rbd", [&](std::vector<CheckResult>& out) {
    Sampler s(options.seed + 2);
    const Eigen::Vector3d g_vec(0.0, 0.0, -9.81);

    double cmm = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const rbd::State st = s.state(model, 2.0, 2.0);
      const rbd::CentroidalTerms c = rbd::centroidal_momentum(model, rbd::compute_kinematics(model, st.q, st.qd), st.qd);
      const rbd::Vector6d want = momentum_by_summation(model, st.q, st.qd, c.p_com);
      cmm = std::max(cmm, (c.A * st.qd - want).cwiseAbs().maxCoeff());
    }
    out.push_back(check("A_com qd vs per-body summation (1000 states)", cmm, 1e-10));

    double drift = 0.0;
    for (int i = 0; i < 100; ++i) {
      const rbd::State st = s.state(model, 1.5, 1.5);
      const rbd::CentroidalTerms c = rbd::centroidal_momentum(model, rbd::compute_kinematics(model, st.q, st.qd), st.qd);
      const double d = 1e-6;
      const auto Aqd = [&](double eps) {
        const Eigen::VectorXd q = rbd::integrate(model, st.q, st.qd, eps);
        return rbd::Vector6d(rbd::centroidal_momentum(model, rbd::compute_kinematics(model, q, st.qd), st.qd).A * st.qd);
      };
      const rbd::Vector6d fd = (Aqd(d) - Aqd(-d)) / (2.0 * d);
      drift = std::max(drift, (fd - c.Adot_qd).norm() / std::max(1.0, fd.norm()));
    }
    out.push_back(check("Adot qd vs central differences (relative)", drift, 1e-5));

    rbd::State st = s.state(model, 0.5, 1.0);
    const rbd::Vector6d h0 = rbd::centroidal_momentum(model, rbd::compute_kinematics(model, st.q, st.qd), st.qd).h;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.num_actuated());
    for (int k = 0; k < 10000; ++k) st = rk4_free_step(model, st, zero, g_vec, 1e-4);
    const rbd::Vector6d h1 = rbd::centroidal_momentum(model, rbd::compute_kinematics(model, st.q, st.qd), st.qd).h;
    out.push_back(check("free-fall centroidal angular momentum drift over 1 s", (h1.head<3>() - h0.head<3>()).norm(), 1e-6));
    out.push_back(check("free-fall linear momentum vs m g t over 1 s",
                        (h1.tail<3>() - h0.tail<3>() - model.total_mass() * g_vec).norm(), 1e-6));
  });
}

namespace {

struct ToyCase {
  Eigen::MatrixXd M;
  Eigen::VectorXd h;
  Eigen::MatrixXd J;
  Eigen::VectorXd Jdot_qd;
  std::vector<wbc::Task> tasks;
};

/// Generalized forces (tau; lambda) explaining qdd, by a dense square solve.
Eigen::VectorXd dense_forces(const ToyCase& c, const Eigen::VectorXd& qdd) {
  const Eigen::Index n = c.M.rows();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, (n - 6) + 6);
  B.block(6, 0, n - 6, n - 6).setIdentity();
  B.rightCols(6) = c.J.transpose();
  return B.fullPivLu().solve(c.M * qdd + c.h);
}

double toy_error(const ToyCase& c) {
  const wbc::ControlOutput out = wbc::solve_hierarchy(c.tasks, c.M, c.h, c.J, c.Jdot_qd);
  int levels = 0;
  for (const wbc::Task& t : c.tasks) levels = std::max(levels, t.priority);
  std::vector<Eigen::MatrixXd> A{c.J};
  std::vector<Eigen::VectorXd> b{-c.Jdot_qd};
  for (int p = 1; p <= levels; ++p) {
    Eigen::MatrixXd Ap(0, c.M.cols());
    Eigen::VectorXd bp(0);
    for (const wbc::Task& t : c.tasks) {
      if (t.priority != p) continue;
      Ap.conservativeResize(Ap.rows() + t.map.rows(), Eigen::NoChange);
      Ap.bottomRows(t.map.rows()) = t.map;
      bp.conservativeResize(bp.size() + t.target.size());
      bp.tail(t.target.size()) = t.target - t.bias;
    }
    A.push_back(Ap);
    b.push_back(bp);
  }
  const Eigen::VectorXd qdd = lexicographic_oracle(A, b);
  const Eigen::VectorXd forces = dense_forces(c, qdd);
  Eigen::VectorXd lambda(6);
  lambda = out.lambda.front().vec();
  const double scale = 1.0 + qdd.norm() + forces.norm();
  return std::max({(out.qdd - qdd).norm(), (out.tau - forces.head(out.tau.size())).norm(),
                   (lambda - forces.tail<6>()).norm()}) /
         scale;
}

}  // namespace

SuiteResult wbc_suite(const ValidationOptions& options) {
  return timed("wbc", [&](std::vector<CheckResult>& out) {
    // Floating body clamped by one full contact, carrying a 5-joint chain:
    // unit inertia, no bias, so qdd on the joints is the torque itself.
    ToyCase hand;
    hand.M = Eigen::MatrixXd::Identity(11, 11);
    hand.h = Eigen::VectorXd::Zero(11);
    hand.J = Eigen::MatrixXd::Zero(6, 11);
    hand.J.leftCols<6>().setIdentity();
    hand.Jdot_qd = Eigen::VectorXd::Zero(6);
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(1, 11), a2 = Eigen::MatrixXd::Zero(2, 11),
                    a3 = Eigen::MatrixXd::Zero(2, 11);
    a1(0, 6) = a1(0, 7) = 1.0;                      // x1 + x2 = 1
    a2(0, 6) = 1.0, a2(0, 7) = -1.0;                // x1 - x2 = 3
    a2(1, 6) = a2(1, 7) = 1.0;                      // x1 + x2 = 5 (conflicts with level 1)
    a3(0, 8) = 1.0, a3(1, 9) = 1.0;                 // x3 = 2, x4 = -1
    hand.tasks = {{"a", a1, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 1.0), 1},
                  {"b", a2, Eigen::VectorXd::Zero(2), Eigen::Vector2d(3.0, 5.0), 2},
                  {"c", a3, Eigen::VectorXd::Zero(2), Eigen::Vector2d(2.0, -1.0), 3}};
    const wbc::ControlOutput ho = wbc::solve_hierarchy(hand.tasks, hand.M, hand.h, hand.J, hand.Jdot_qd);
    Eigen::VectorXd tau_expected(5);
    tau_expected << 2.0, -1.0, 2.0, -1.0, 0.0;
    const double hand_err = std::max({(ho.tau - tau_expected).norm(), ho.qdd.head<6>().norm(),
                                      ho.lambda.front().vec().norm(), std::abs(ho.levels[1].residual - 4.0),
                                      ho.levels[0].residual, ho.levels[2].residual});
    out.push_back(check("5-DoF toy: hand-derived torques and residuals", hand_err, 1e-9));
    out.push_back(check("5-DoF toy: hand case vs dense lexicographic oracle", toy_error(hand), 1e-9));

    Sampler s(options.seed + 3);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      ToyCase c;
      const Eigen::MatrixXd R = s.matrix(11, 11, -1.0, 1.0);
      c.M = R * R.transpose() + Eigen::MatrixXd::Identity(11, 11);
      c.h = s.vector(11, -5.0, 5.0);
      c.J = s.matrix(6, 11, -1.0, 1.0);
      c.J.leftCols<6>() += 3.0 * Eigen::MatrixXd::Identity(6, 6);
      c.Jdot_qd = s.vector(6, -1.0, 1.0);
      const int levels = s.integer(1, 3);
      for (int k = 1; k <= levels; ++k) {
        const int rows = s.integer(1, 4);
        const int rank = s.integer(1, rows);
        const Eigen::MatrixXd map = s.matrix(rows, rank, -1.0, 1.0) * s.matrix(rank, 11, -1.0, 1.0);
        c.tasks.push_back({"t", map, s.vector(rows, -1.0, 1.0), s.vector(rows, -2.0, 2.0), k});
      }
      worst = std::max(worst, toy_error(c));
    }
    out.push_back(check("5-DoF toy: 200 random hierarchies vs dense oracle", worst, 1e-9));

    wbc::WrenchLimits lim;
    lim.margin = 0.0;
    lim.f_z_min = 10.0;
    Eigen::Matrix<double, 12, 6> C;
    Eigen::Matrix<double, 12, 1> d;
    wbc::wrench_constraints(lim, C, d);
    Eigen::VectorXd w(6);
    w << wbc::kMomentWeight, wbc::kMomentWeight, wbc::kMomentWeight, 1.0, 1.0, 1.0;
    double proj = 0.0, violation = 0.0;
    for (int i = 0; i < 300; ++i) {
      wbc::ContactWrench req;
      req.force = Eigen::Vector3d(s.uniform(-600, 600), s.uniform(-600, 600), s.uniform(-200, 2500));
      req.moment = Eigen::Vector3d(s.uniform(-150, 150), s.uniform(-250, 250), s.uniform(-40, 40));
      const wbc::WrenchProjection p = wbc::project_wrench(req, lim);
      const Eigen::VectorXd want = exhaustive_projection(C, d, w, req.vec());
      proj = std::max(proj, (p.wrench.vec() - want).norm() / (1.0 + want.norm()));
      violation = std::max(violation, wbc::wrench_violation(p.wrench, lim));
    }
    out.push_back(check("wrench projection vs active-set enumeration (relative)", proj, 1e-7));
    out.push_back(check("projected wrench limit violation", violation, 1e-8));
  });
}

std::vector<std::string> suite_names() { return {"alip_core", "planner", "rbd", "wbc"}; }

SuiteResult run_suite(const std::string& name, const ValidationOptions& options, const rbd::RobotModel& model) {
  if (name == "alip_core") return alip_core_suite(options);
  if (name == "planner") return planner_suite(options);
  if (name == "rbd") return rbd_suite(options, model);
  if (name == "wbc") return wbc_suite(options);
  throw std::invalid_argument(fmt::format("unknown suite '{}'", name));
}

}  // namespace alip::validation
