#include "alip/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "alip/core/errors.hpp"
#include "alip/planner/rollout.hpp"
#include "alip/sim/log_io.hpp"

namespace alip::cli {

namespace {

/// Pre-impact gap: sagittal states repeat every step, frontal ones every
/// stride because the lateral offset alternates with the stance.
double closure_gap(const TemplateRollout& r, std::size_t k) {
  return (r.steps[k].x_minus.vec() - r.steps[k + 1].x_minus.vec()).norm() +
         (r.steps[k].y_minus.vec() - r.steps[k + 2].y_minus.vec()).norm();
}

/// Re-derives the contact momentum about the next contact from the
/// pre-impact CoM state (template: L_com = 0, no vertical velocity).
double impact_mismatch(const TemplateRollout& r, std::size_t k, const AlipParams& P) {
  const TemplateStep& a = r.steps[k];
  const TemplateStep& b = r.steps[k + 1];
  const double mH = P.mass() * P.height();
  const Eigen::Vector3d com(a.contact_origin.x() + a.x_minus.p_x, a.contact_origin.y() + a.y_minus.p_y, P.height());
  const Eigen::Vector3d v(a.x_minus.L_cy / mH, -a.y_minus.L_cx / mH, 0.0);
  const Eigen::Vector3d r_new = com - Eigen::Vector3d(b.contact_origin.x(), b.contact_origin.y(), 0.0);
  const Eigen::Vector3d L_new = r_new.cross(P.mass() * v);
  return std::max({std::abs(L_new.x() - b.y_plus.L_cx), std::abs(L_new.y() - b.x_plus.L_cy),
                   std::abs(r_new.x() - b.x_plus.p_x), std::abs(r_new.y() - b.y_plus.p_y)});
}

bool on_orbit(const TemplateStep& s, const TemplateStep& orbit) {
  const double scale = 1.0 + orbit.x_minus.vec().norm() + orbit.y_minus.vec().norm();
  return (s.x_minus.vec() - orbit.x_minus.vec()).norm() + (s.y_minus.vec() - orbit.y_minus.vec()).norm() <=
         1e-6 * scale;
}

std::vector<Eigen::Vector2d> plan_commands(const ScenarioConfig& c) {
  if (!c.plan.commands.empty()) return c.plan.commands;
  std::vector<Eigen::Vector2d> out;
  for (const sim::ScheduleEntry& e : c.schedule) {
    const Eigen::Vector2d v(e.v_x, e.v_y);
    if (std::none_of(out.begin(), out.end(), [&](const Eigen::Vector2d& w) { return w == v; })) out.push_back(v);
  }
  return out;
}

}  // namespace

bool PlanReport::passed() const {
  return std::all_of(series.begin(), series.end(), [this](const PlanSeries& s) {
    return s.orbit_closure <= closure_tolerance && s.seed_closure <= closure_tolerance &&
           s.impact_mismatch <= impact_tolerance && s.convergence_step >= 0 && s.convergence_step <= convergence_limit;
  });
}

PlanReport cmd_plan(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  const sim::Scenario sc = build_scenario(config);
  const AlipParams& P = sc.params;
  const int n = config.plan.steps;
  PlanReport report;
  std::vector<sim::PortraitSeries> portrait;

  const std::vector<Eigen::Vector2d> commands = plan_commands(config);
  for (std::size_t i = 0; i < commands.size(); ++i) {
    GaitSpec spec = sc.gait;
    spec.v_x = commands[i].x();
    spec.v_y = commands[i].y();
    spec.validate();
    const auto spec_for = [&](int) { return spec; };
    const auto [x0, y0] = periodic_step_start(Stance::LeftSupport, spec, P);
    const TemplateRollout orbit = rollout_template(x0, y0, Stance::LeftSupport, spec_for, P, n, config.plan.sample_dt);
    const TemplateRollout seeded = rollout_template(config.plan.x_seed, config.plan.y_seed, Stance::LeftSupport,
                                                    spec_for, P, n, config.plan.sample_dt);

    PlanSeries s;
    s.command = commands[i];
    for (std::size_t k = 0; k + 2 < orbit.steps.size(); ++k) s.orbit_closure = std::max(s.orbit_closure, closure_gap(orbit, k));
    for (std::size_t k = 0; k + 1 < orbit.steps.size(); ++k) {
      s.impact_mismatch = std::max(s.impact_mismatch, impact_mismatch(orbit, k, P));
      s.impact_mismatch = std::max(s.impact_mismatch, impact_mismatch(seeded, k, P));
    }
    s.seed_closure = closure_gap(seeded, 8);
    for (int k = n - 1; k >= 0 && on_orbit(seeded.steps[static_cast<std::size_t>(k)], orbit.steps[static_cast<std::size_t>(k)]);
         --k)
      s.convergence_step = k;
    report.series.push_back(s);

    portrait.push_back({fmt::format("orbit_{}", i), commands[i], orbit});
    portrait.push_back({fmt::format("seed_{}", i), commands[i], seeded});
  }

  std::filesystem::create_directories(out_dir);
  sim::write_phase_portrait(out_dir / "phase_portrait.csv", portrait);
  std::ofstream summary(out_dir / "plan_summary.txt");
  if (!summary) throw std::runtime_error("cannot write plan_summary.txt in " + out_dir.string());
  fmt::print(summary, "passed={}\nclosure_tolerance={}\nimpact_tolerance={}\nconvergence_limit_steps={}\n",
             report.passed(), report.closure_tolerance, report.impact_tolerance, report.convergence_limit);
  for (std::size_t i = 0; i < report.series.size(); ++i) {
    const PlanSeries& s = report.series[i];
    fmt::print(summary,
               "series.{0}.command_x_mps={1}\nseries.{0}.command_y_mps={2}\nseries.{0}.orbit_closure={3}\n"
               "series.{0}.seed_closure={4}\nseries.{0}.impact_mismatch={5}\nseries.{0}.convergence_step={6}\n",
               i, s.command.x(), s.command.y(), s.orbit_closure, s.seed_closure, s.impact_mismatch,
               s.convergence_step);
  }
  return report;
}

SimulateReport cmd_simulate(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  SimulateReport report;
  report.name = config.source.empty() ? std::string("scenario") : config.source.stem().string();
  report.out_dir = out_dir;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const sim::Scenario sc = build_scenario(config);
    const sim::ScenarioResult result = sim::run_scenario(sc);
    sim::write_scenario_outputs(out_dir, result);
    report.summary = result.summary;
    if (result.summary.diverged) {
      report.exit_code = kDiverged;
      report.error = result.summary.divergence_message;
    } else if (result.summary.failed()) {
      report.exit_code = kFailure;
    }
  } catch (const ConfigError& e) {
    report.exit_code = kConfigError;
    report.error = e.what();
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::vector<SimulateReport> simulate_many(const std::vector<ScenarioConfig>& configs,
                                          const std::filesystem::path& out_root, int jobs) {
  std::vector<SimulateReport> reports(configs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      const std::string stem = configs[i].source.empty() ? fmt::format("scenario_{}", i) : configs[i].source.stem().string();
      reports[i] = cmd_simulate(configs[i], out_root / stem);
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(configs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return reports;
}

bool ValidateReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const validation::SuiteResult& s) { return s.passed(); });
}

ValidateReport cmd_validate(const std::vector<std::string>& only, const validation::ValidationOptions& options,
                            const rbd::RobotModel& model, std::ostream& out) {
  const std::vector<std::string> names = only.empty() ? validation::suite_names() : only;
  ValidateReport report;
  for (const std::string& name : names) {
    validation::SuiteResult r = validation::run_suite(name, options, model);
    for (const validation::CheckResult& c : r.checks) {
      fmt::print(out, "[{}] {}: {}  max_error={:.3e} tol={:.1e}{}\n", c.passed ? "PASS" : "FAIL", r.name, c.name,
                 c.max_error, c.tolerance, c.detail.empty() ? "" : "  (" + c.detail + ")");
    }
    fmt::print(out, "suite {} {} in {:.2f} s\n", r.name, r.passed() ? "passed" : "FAILED", r.seconds);
    report.suites.push_back(std::move(r));
  }
  return report;
}

int combine_exit_codes(const std::vector<int>& codes) {
  for (int c : {kConfigError, kDiverged, kFailure})
    if (std::find(codes.begin(), codes.end(), c) != codes.end()) return c;
  return kOk;
}

}  // namespace alip::cli
