#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alip/core/alip.hpp"
#include "alip/sim/simulation.hpp"

namespace alip::cli {

/// Multiplies mass and rotational inertia of every body whose name contains
/// `name_contains`.
struct ModelScaling {
  std::string name_contains;
  double mass_factor = 1.0;
};

/// Template-only rollout settings for the plan subcommand.
struct PlanConfig {
  int steps = 12;
  double sample_dt = 0.01;  // [s]
  std::vector<Eigen::Vector2d> commands;  // [m/s]; empty means the schedule's distinct commands
  SagittalState x_seed{0.12, 15.0};
  FrontalState y_seed{-0.02, -8.0};
};

/// Parsed scenario file. Keys carry their units; unknown keys are rejected.
struct ScenarioConfig {
  std::filesystem::path source;       // file the config came from, if any
  std::filesystem::path robot_model;  // resolved against the config's directory
  double com_height = 0.88;           // [m]
  double gravity = 9.81;              // [m/s^2]
  double step_duration = 0.4;         // [s]
  double step_width = 0.2;            // [m]
  std::vector<sim::ScheduleEntry> schedule;
  sim::ControllerGains gains;
  sim::SimOptions options;
  std::vector<std::pair<std::string, double>> posture;  // [rad]
  std::vector<ModelScaling> scaling;
  PlanConfig plan;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 20240607;
};

/// Throws alip::ConfigError on malformed JSON, missing or unknown keys and
/// wrongly typed values. Relative paths are resolved against `base_dir`.
ScenarioConfig parse_scenario_config(const std::string& json_text, const std::filesystem::path& base_dir);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

/// Loads and scales the robot model, fills in the foot geometry of the
/// wrench limits, and validates every part. Throws alip::ConfigError.
sim::Scenario build_scenario(const ScenarioConfig& config);

}  // namespace alip::cli
