// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "alip/cli/commands.hpp"
#include "alip/rbd/model_io.hpp"
#include "alip/validation/suites.hpp"

namespace {

using namespace alip;
namespace fs = std::filesystem;

std::string config(const char* name) { return std::string(ALIP_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

double worst_ratio(const validation::SuiteResult& r) {
  double w = 0.0;
  for (const auto& c : r.checks) w = std::max(w, c.max_error / c.tolerance);
  return w;
}

struct Gate {
  int failures = 0;
  void report(int id, bool pass, const std::string& what) {
    fmt::print("criterion {}: {} {}\n", id, pass ? "PASS" : "FAIL", what);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

void suite_criterion(Gate& gate, int id, const validation::SuiteResult& r, double runtime_limit) {
  std::string detail;
  for (const auto& c : r.checks)
    detail += fmt::format("; {} {:.2e}/{:.0e}{}", c.name, c.max_error, c.tolerance, c.passed ? "" : " FAIL");
  gate.report(id, r.passed() && r.seconds < runtime_limit,
              fmt::format("{} suite, runtime {:.2f} s < {} s, worst error/tolerance {:.2e}{}", r.name, r.seconds,
                          runtime_limit, worst_ratio(r), detail));
}

}  // namespace

int main() {
  Gate gate;
  const rbd::RobotModel model = rbd::load_robot_model(config("surrogate_biped.json"));
  const validation::ValidationOptions opt;
  const fs::path out = fs::temp_directory_path() / "alip_acceptance";
  fs::remove_all(out);

  suite_criterion(gate, 1, validation::alip_core_suite(opt), 5.0);
  suite_criterion(gate, 2, validation::planner_suite(opt), 5.0);

  {
    const cli::PlanReport p = cli::cmd_plan(cli::load_scenario_config(config("velocity_steps.json")), out / "plan");
    double closure = 0.0, impact = 0.0;
    int converge = 0;
    bool all_converged = true;
    for (const cli::PlanSeries& s : p.series) {
      closure = std::max({closure, s.orbit_closure, s.seed_closure});
      impact = std::max(impact, s.impact_mismatch);
      converge = std::max(converge, s.convergence_step);
      all_converged = all_converged && s.convergence_step >= 0;
    }
    gate.report(3, p.passed() && all_converged,
                fmt::format("{} commanded orbits: closure {:.2e} <= 1e-8, impact L_c mismatch {:.2e} <= 1e-8, "
                            "off-orbit seed on orbit from step {} <= 8",
                            p.series.size(), closure, impact, converge));
  }

  suite_criterion(gate, 4, validation::rbd_suite(opt, model), 30.0);

  const validation::SuiteResult wbc = validation::wbc_suite(opt);

  // Closed loop: the velocity-step schedule, run twice through the CLI layer.
  const cli::ScenarioConfig schedule = cli::load_scenario_config(config("velocity_steps.json"));
  const auto t0 = std::chrono::steady_clock::now();
  const cli::SimulateReport a = cli::cmd_simulate(schedule, out / "run_a");
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const cli::SimulateReport b = cli::cmd_simulate(schedule, out / "run_b");
  const sim::Summary& s = a.summary;

  const double residual = std::max(s.max_constraint_residual, b.summary.max_constraint_residual);
  const double violation = std::max(s.max_wrench_violation, b.summary.max_wrench_violation);
  gate.report(5, wbc.passed() && residual <= 1e-8 && violation <= 1e-8 && s.completed,
              fmt::format("5-DoF toy and wrench projection (worst error/tolerance {:.2e}); closed-loop contact "
                          "residual {:.2e} <= 1e-8, executed wrench violation {:.2e} <= 1e-8",
                          worst_ratio(wbc), residual, violation));

  Eigen::Vector2d v_margin = Eigen::Vector2d::Constant(-1.0);
  double height = 0.0, ratio = 0.0, pred = 0.0;
  for (const sim::WindowMetrics& w : s.windows) {
    v_margin = v_margin.cwiseMax(w.max_velocity_error.cwiseQuotient(w.velocity_tolerance));
    height = std::max(height, w.max_height_error);
    ratio = std::max(ratio, w.rms_L_c > 0.0 ? w.rms_L_com / w.rms_L_c : 0.0);
    pred = std::max(pred, w.max_prediction_error);
  }
  const bool walked = a.exit_code == cli::kOk && !s.failed() && s.tracking_ok() && s.height_ok() && s.ratio_ok() &&
                      s.prediction_ok() && wall < 300.0;
  gate.report(6, walked,
              fmt::format("velocity-step schedule {:.0f} s, {} steps, failure flags {}, {} windows; velocity error/tolerance "
                          "x {:.2f} y {:.2f} <= 1; height error {:.2e} <= 1e-2 m; RMS L_com/L_c {:.3f} <= 0.3; "
                          "end-of-step prediction {:.3f} <= 0.05 of peak; wall {:.1f} s < 300 s{}",
                          s.duration, s.steps, s.failed() ? "raised" : "none", s.windows.size(), v_margin.x(),
                          v_margin.y(), height, ratio, pred, wall, a.error.empty() ? "" : " (" + a.error + ")"));

  int files = 0, identical = 0;
  for (const char* f : {"com_tracking.csv", "momentum_tracking.csv", "alip_states.csv", "momentum_prediction.csv",
                        "wrench.csv", "steps.csv", "summary.txt"}) {
    ++files;
    const std::string x = slurp(out / "run_a" / f);
    if (!x.empty() && x == slurp(out / "run_b" / f)) ++identical;
  }
  gate.report(7, identical == files, fmt::format("{}/{} output files byte-identical across two velocity-step runs", identical, files));

  return gate.failures == 0 ? 0 : 1;
}
