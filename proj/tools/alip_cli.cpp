#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "alip/cli/commands.hpp"
#include "alip/core/errors.hpp"
#include "alip/rbd/model_io.hpp"

using namespace alip;
using namespace alip::cli;

namespace {

int run_plan(const std::vector<std::string>& configs, const std::string& out) {
  std::vector<int> codes;
  for (const std::string& path : configs) {
    const ScenarioConfig c = load_scenario_config(path);
    const std::filesystem::path dir = !out.empty() ? std::filesystem::path(out) : c.output_dir;
    const PlanReport r = cmd_plan(c, configs.size() > 1 ? dir / c.source.stem() : dir);
    for (const PlanSeries& s : r.series) {
      fmt::print("v=({:+.3f}, {:+.3f}) closure={:.2e} seed_closure={:.2e} impact={:.2e} converged_at_step={}\n",
                 s.command.x(), s.command.y(), s.orbit_closure, s.seed_closure, s.impact_mismatch,
                 s.convergence_step);
    }
    fmt::print("{}: plan {}\n", path, r.passed() ? "passed" : "FAILED");
    codes.push_back(r.passed() ? kOk : kFailure);
  }
  return combine_exit_codes(codes);
}

int run_simulate(const std::vector<std::string>& paths, const std::string& out, int jobs) {
  std::vector<ScenarioConfig> configs;
  for (const std::string& p : paths) configs.push_back(load_scenario_config(p));
  std::vector<SimulateReport> reports;
  if (configs.size() == 1) {
    const std::filesystem::path dir = !out.empty() ? std::filesystem::path(out) : configs[0].output_dir;
    reports.push_back(cmd_simulate(configs[0], dir));
  } else {
    reports = simulate_many(configs, !out.empty() ? std::filesystem::path(out) : configs[0].output_dir, jobs);
  }
  std::vector<int> codes;
  for (const SimulateReport& r : reports) {
    fmt::print("{}: exit={} steps={} simulated={:.3f}s wall={:.1f}s out={}\n", r.name, r.exit_code, r.summary.steps,
               r.summary.duration, r.wall_seconds, r.out_dir.string());
    if (!r.error.empty()) fmt::print(stderr, "{}: {}\n", r.name, r.error);
    if (r.exit_code == kOk) {
      fmt::print("{}: tracking_ok={} height_ok={} momentum_ratio_ok={} prediction_ok={}\n", r.name,
                 r.summary.tracking_ok(), r.summary.height_ok(), r.summary.ratio_ok(), r.summary.prediction_ok());
    }
    codes.push_back(r.exit_code);
  }
  return combine_exit_codes(codes);
}

int run_validate(const std::vector<std::string>& configs, const std::vector<std::string>& only,
                 const std::string& fault) {
  validation::ValidationOptions opt;
  std::filesystem::path model_path = ALIP_DEFAULT_MODEL;
  if (!configs.empty()) {
    const ScenarioConfig c = load_scenario_config(configs.front());
    model_path = c.robot_model;
    opt.seed = c.seed;
  }
  if (fault == "frontal_sign") {
    opt.inject_frontal_sign_error = true;
  } else if (!fault.empty()) {
    throw ConfigError("unknown fault '" + fault + "' (known: frontal_sign)");
  }
  const rbd::RobotModel model = rbd::load_robot_model(model_path);
  const ValidateReport r = cmd_validate(only, opt, model, std::cout);
  return r.passed() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ALIP walking controller: template planning, closed-loop simulation and validation"};
  app.require_subcommand(1);
  std::vector<std::string> configs;
  std::string out;
  int jobs = 1;
  std::vector<std::string> only;
  std::string fault;

  CLI::App* plan = app.add_subcommand("plan", "template rollouts and phase-portrait data");
  plan->add_option("--config", configs, "scenario file (repeatable)")->required()->check(CLI::ExistingFile);
  plan->add_option("--out", out, "output directory (overrides output_dir)");

  CLI::App* simulate = app.add_subcommand("simulate", "closed-loop run with CSV logs");
  simulate->add_option("--config", configs, "scenario file (repeatable)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out, "output directory (overrides output_dir)");
  simulate->add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);

  CLI::App* validate = app.add_subcommand("validate", "oracle suites");
  validate->add_option("--config", configs, "take the robot model and seed from this scenario")
      ->check(CLI::ExistingFile);
  validate->add_option("--only", only, "suite to run (repeatable): alip_core, planner, rbd, wbc");
  validate->add_option("--inject-fault", fault, "mutation smoke test: frontal_sign");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (plan->parsed()) return run_plan(configs, out);
    if (simulate->parsed()) return run_simulate(configs, out, jobs);
    return run_validate(configs, only, fault);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kFailure;
  }
}
