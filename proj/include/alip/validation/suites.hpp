#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alip/rbd/model.hpp"

namespace alip::validation {

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool passed() const;
};

struct ValidationOptions {
  std::uint64_t seed = 20240607;
  /// Mutation smoke test: the frontal closed form under test gets the
  /// sign of its coupling terms flipped.
  bool inject_frontal_sign_error = false;
};

/// Closed-form template flows against RK4 (dt = 1e-5) on 100 random states,
/// m = 150 kg, H = 0.9 m, t in (0, 1] s; relative error <= 1e-9.
SuiteResult alip_core_suite(const ValidationOptions& options);

/// Deadbeat planner rollouts for every command of the velocity-step schedule: end-of-step
/// momentum from step 2, per-step displacement on the orbit, and closure.
SuiteResult planner_suite(const ValidationOptions& options);

/// Centroidal momentum map against per-body summation on 1000 random
/// states, its drift against central differences, and free-fall conservation.
SuiteResult rbd_suite(const ValidationOptions& options, const rbd::RobotModel& model);

/// Task hierarchy on a 5-DoF toy system against the dense lexicographic
/// oracle, and wrench projection against active-set enumeration.
SuiteResult wbc_suite(const ValidationOptions& options);

std::vector<std::string> suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(const std::string& name, const ValidationOptions& options, const rbd::RobotModel& model);

}  // namespace alip::validation
