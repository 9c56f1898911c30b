#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "alip/planner/rollout.hpp"
#include "alip/sim/scenario.hpp"

namespace alip::sim {

/// Fixed-header CSV file. Numbers are printed with 12 significant digits so
/// equal runs give byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::string& label, const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// Column layouts, in file order. Documented in the README.
std::vector<std::string> com_tracking_columns();
std::vector<std::string> momentum_tracking_columns();
std::vector<std::string> alip_state_columns();
std::vector<std::string> momentum_prediction_columns();
std::vector<std::string> wrench_columns(std::size_t levels);
std::vector<std::string> step_columns();
std::vector<std::string> phase_portrait_columns();

/// Writes com_tracking.csv, momentum_tracking.csv, alip_states.csv,
/// momentum_prediction.csv, wrench.csv, steps.csv and summary.txt into `dir`.
void write_scenario_outputs(const std::filesystem::path& dir, const ScenarioResult& result);

struct PortraitSeries {
  std::string label;
  Eigen::Vector2d command = Eigen::Vector2d::Zero();
  TemplateRollout rollout;
};

/// One row per template sample: label, commanded velocity, step, stance and state.
void write_phase_portrait(const std::filesystem::path& file, const std::vector<PortraitSeries>& series);

}  // namespace alip::sim
