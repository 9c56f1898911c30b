#include "alip/cli/scenario_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "alip/core/errors.hpp"
#include "alip/rbd/model_io.hpp"

namespace alip::cli {

namespace {

using nlohmann::json;

/// JSON object view that records which keys were read so leftovers can be
/// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(path_ + ": missing key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    return v.get<double>();
  }
  void number(const std::string& key, double& out) {
    if (has(key)) out = number(key);
  }

  int integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
    return v.get<int>();
  }
  void integer(const std::string& key, int& out) {
    if (has(key)) out = integer(key);
  }

  std::string text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
    return v.get<std::string>();
  }

  Eigen::VectorXd vector(const std::string& key, Eigen::Index n) {
    const json& v = at(key);
    if (!v.is_array() || v.size() != static_cast<std::size_t>(n))
      throw ConfigError(where(key) + " must be an array of " + std::to_string(n) + " numbers");
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!v[static_cast<std::size_t>(i)].is_number()) throw ConfigError(where(key) + " must contain numbers");
      out(i) = v[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
  }

  Section child(const std::string& key) { return Section(at(key), where(key)); }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key())) throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void servo(Section& parent, const std::string& key, wbc::ServoGains& g) {
  if (!parent.has(key)) return;
  Section s = parent.child(key);
  s.number("kp_per_s2", g.kp);
  s.number("kd_per_s", g.kd);
  s.finish();
}

void read_gains(Section s, sim::ControllerGains& g) {
  if (s.has("momentum_kp")) g.momentum.K_P = s.vector("momentum_kp", 6);
  if (s.has("momentum_kd")) g.momentum.K_D = s.vector("momentum_kd", 6);
  servo(s, "swing_linear", g.swing_linear);
  servo(s, "swing_angular", g.swing_angular);
  servo(s, "posture", g.posture);
  servo(s, "pelvis", g.pelvis);
  s.number("swing_apex_m", g.swing_apex);
  s.number("retarget_freeze_phase", g.retarget_freeze_phase);
  s.number("velocity_ramp_mps_per_step", g.velocity_ramp_per_step);
  s.number("reach_forward_m", g.reach.forward);
  s.number("reach_lateral_m", g.reach.lateral);
  s.finish();
}

void read_limits(Section s, wbc::WrenchLimits& l) {
  s.number("friction_coefficient", l.mu);
  s.number("torsional_friction_m", l.mu_z);
  s.number("normal_force_min_N", l.f_z_min);
  s.number("normal_force_max_N", l.f_z_max);
  s.number("projection_margin", l.margin);
  s.finish();
}

void read_simulation(Section s, sim::SimOptions& o) {
  s.number("dt_s", o.dt);
  s.integer("substeps", o.substeps);
  s.number("duration_s", o.duration);
  s.number("baumgarte_velocity_per_s", o.baumgarte_velocity);
  s.number("baumgarte_position_per_s", o.baumgarte_position);
  s.number("snap_tolerance_m", o.snap_tolerance);
  s.integer("projection_iterations", o.projection_iterations);
  s.integer("wrench_streak_limit_ticks", o.wrench_streak_limit);
  s.integer("reach_streak_limit_steps", o.reach_streak_limit);
  s.number("height_divergence_m", o.height_divergence);
  s.finish();
}

void read_plan(Section s, PlanConfig& p) {
  s.integer("steps", p.steps);
  s.number("sample_dt_s", p.sample_dt);
  if (s.has("commands_mps")) {
    const json& list = s.at("commands_mps");
    if (!list.is_array()) throw ConfigError(s.where("commands_mps") + " must be an array of [v_x, v_y] pairs");
    p.commands.clear();
    for (const json& c : list) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
        throw ConfigError(s.where("commands_mps") + " must be an array of [v_x, v_y] pairs");
      p.commands.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
  }
  if (s.has("off_orbit_seed")) {
    Section seed = s.child("off_orbit_seed");
    p.x_seed = {seed.number("p_x_m"), seed.number("L_cy_Nms")};
    p.y_seed = {seed.number("p_y_m"), seed.number("L_cx_Nms")};
    seed.finish();
  }
  if (p.steps < 11) throw ConfigError(s.where("steps") + " must be at least 11 to check closure after 10 steps");
  if (!(p.sample_dt >= 0.0)) throw ConfigError(s.where("sample_dt_s") + " must be non-negative");
  s.finish();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ScenarioConfig c;
  Section root(doc, "config");
  c.robot_model = resolve(base_dir, root.text("robot_model"));

  Section alip = root.child("alip");
  c.com_height = alip.number("com_height_m");
  alip.number("gravity_mps2", c.gravity);
  alip.finish();

  Section gait = root.child("gait");
  c.step_duration = gait.number("step_duration_s");
  c.step_width = gait.number("step_width_m");
  gait.finish();

  const json& schedule = root.at("schedule");
  if (!schedule.is_array()) throw ConfigError("config.schedule must be an array");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    Section e(schedule[i], "config.schedule[" + std::to_string(i) + "]");
    c.schedule.push_back({e.number("t_start_s"), e.number("t_end_s"), e.number("v_x_mps"), e.number("v_y_mps")});
    e.finish();
  }

  if (root.has("gains")) read_gains(root.child("gains"), c.gains);
  if (root.has("limits")) read_limits(root.child("limits"), c.gains.limits);
  if (root.has("simulation")) read_simulation(root.child("simulation"), c.options);
  if (root.has("plan")) read_plan(root.child("plan"), c.plan);

  if (root.has("posture_rad")) {
    const json& posture = root.at("posture_rad");
    if (!posture.is_object()) throw ConfigError("config.posture_rad must map joint names to angles");
    for (const auto& item : posture.items()) {
      if (!item.value().is_number()) throw ConfigError("config.posture_rad." + item.key() + " must be a number");
      c.posture.emplace_back(item.key(), item.value().get<double>());
    }
  }

  if (root.has("model_scaling")) {
    const json& list = root.at("model_scaling");
    if (!list.is_array()) throw ConfigError("config.model_scaling must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Section e(list[i], "config.model_scaling[" + std::to_string(i) + "]");
      ModelScaling s{e.text("name_contains"), e.number("mass_factor")};
      if (s.name_contains.empty() || !(s.mass_factor > 0.0))
        throw ConfigError(e.where("mass_factor") + " must be positive with a non-empty name_contains");
      c.scaling.push_back(s);
      e.finish();
    }
  }

  if (root.has("output_dir")) c.output_dir = root.text("output_dir");
  if (root.has("seed")) {
    const json& seed = root.at("seed");
    if (!seed.is_number_unsigned()) throw ConfigError("config.seed must be a non-negative integer");
    c.seed = seed.get<std::uint64_t>();
  }
  root.finish();
  return c;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ScenarioConfig c = parse_scenario_config(buffer.str(), path.parent_path());
  c.source = path;
  return c;
}

sim::Scenario build_scenario(const ScenarioConfig& config) {
  try {
    rbd::RobotModel model = rbd::load_robot_model(config.robot_model);
    for (const ModelScaling& s : config.scaling) {
      bool matched = false;
      model = model.with_scaled_bodies(
          [&](const rbd::Body& b) {
            const bool hit = b.name.find(s.name_contains) != std::string::npos;
            matched = matched || hit;
            return hit;
          },
          s.mass_factor);
      if (!matched) throw ConfigError("model_scaling: no body name contains '" + s.name_contains + "'");
    }
    if (!(config.com_height > 0.0) || !(config.gravity > 0.0))
      throw ConfigError("alip: CoM height and gravity must be positive");

    sim::Scenario sc(std::move(model), config.com_height, config.gravity);
    sc.gait.step_duration = config.step_duration;
    sc.gait.step_width = config.step_width;
    sc.gait.validate();
    sc.schedule = sim::GaitSchedule(config.schedule);
    sc.gains = config.gains;
    // The sole polygon always comes from the robot model.
    const rbd::FootGeometry& foot = sc.model.foot(rbd::FootSide::Left);
    sc.gains.limits.toe = foot.toe;
    sc.gains.limits.heel = foot.heel;
    sc.gains.limits.half_width = foot.half_width;
    sc.gains.validate();
    sc.options = config.options;
    sc.options.validate();
    sc.posture = config.posture;
    return sc;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace alip::cli
