#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alip/cli/scenario_config.hpp"
#include "alip/sim/scenario.hpp"
#include "alip/validation/suites.hpp"

namespace alip::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kDiverged = 2, kConfigError = 3 };

/// Template-only checks for one commanded velocity.
struct PlanSeries {
  Eigen::Vector2d command = Eigen::Vector2d::Zero();
  /// Largest pre-impact mismatch between steps k and k+1 (sagittal) and k
  /// and k+2 (frontal) along the periodic orbit.
  double orbit_closure = 0.0;
  /// Same gap for the off-orbit seed after 10 steps.
  double seed_closure = 0.0;
  /// Largest difference between L_c right after a support transfer and the
  /// pre-impact momentum re-expressed about the new contact.
  double impact_mismatch = 0.0;
  /// First step from which the seeded rollout stays on the orbit; -1 if never.
  int convergence_step = -1;
};

struct PlanReport {
  std::vector<PlanSeries> series;
  double closure_tolerance = 1e-8;
  double impact_tolerance = 1e-8;
  int convergence_limit = 8;
  bool passed() const;
};

/// Rolls out the orbit and the off-orbit seed for every command and writes
/// phase_portrait.csv and plan_summary.txt into `out_dir`.
PlanReport cmd_plan(const ScenarioConfig& config, const std::filesystem::path& out_dir);

struct SimulateReport {
  std::string name;
  std::filesystem::path out_dir;
  sim::Summary summary;
  int exit_code = kOk;
  std::string error;  // config or runtime error message, if any
  double wall_seconds = 0.0;
};

/// Runs the closed loop and writes the CSV logs and summary.txt into
/// `out_dir`. kOk iff no failure flag is raised; kDiverged on divergence.
SimulateReport cmd_simulate(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Independent scenarios on up to `jobs` threads. Each run writes into
/// `out_root / <config stem>`. Results keep the input order.
std::vector<SimulateReport> simulate_many(const std::vector<ScenarioConfig>& configs,
                                          const std::filesystem::path& out_root, int jobs);

struct ValidateReport {
  std::vector<validation::SuiteResult> suites;
  bool passed() const;
};

/// Runs the named suites (all when `only` is empty) and prints one line per
/// check. Throws std::invalid_argument for an unknown suite.
ValidateReport cmd_validate(const std::vector<std::string>& only, const validation::ValidationOptions& options,
                            const rbd::RobotModel& model, std::ostream& out);

/// Most severe exit code: config error, then divergence, then failure.
int combine_exit_codes(const std::vector<int>& codes);

}  // namespace alip::cli
