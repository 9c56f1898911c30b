#pragma once

#include <functional>
#include <vector>

#include "alip/sim/metrics.hpp"
#include "alip/sim/simulation.hpp"

namespace alip::sim {

struct ScenarioResult {
  std::vector<LogRecord> records;
  std::vector<StepEvent> steps;
  Summary summary;
};

using RecordSink = std::function<void(const LogRecord&)>;

/// Runs the closed loop from the periodic stand for the schedule (or the
/// configured duration). Divergence and contact-solver failures end the run
/// and are reported in the summary instead of being thrown.
ScenarioResult run_scenario(const Scenario& scenario, const MetricOptions& metrics = {},
                            const RecordSink& sink = {});

}  // namespace alip::sim
