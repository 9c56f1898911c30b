#include "alip/sim/log_io.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace alip::sim {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out_ << fmt::format("{}\n", fmt::join(header, ","));
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("CSV row width does not match its header");
  out_ << fmt::format("{:.12g}\n", fmt::join(values, ","));
}

void CsvWriter::row(const std::string& label, const std::vector<double>& values) {
  if (values.size() + 1 != columns_) throw std::logic_error("CSV row width does not match its header");
  out_ << label << ',' << fmt::format("{:.12g}\n", fmt::join(values, ","));
}

std::vector<std::string> com_tracking_columns() {
  return {"t_s",        "com_x_m",     "com_y_m",     "com_z_m",     "com_des_x_m", "com_des_y_m",
          "com_des_z_m", "vcom_x_mps", "vcom_y_mps",  "vcom_z_mps",  "vdes_x_mps",  "vdes_y_mps",
          "vcmd_x_mps", "vcmd_y_mps",  "vplan_x_mps", "vplan_y_mps"};
}

std::vector<std::string> momentum_tracking_columns() {
  return {"t_s",     "k_x",     "k_y",     "k_z",     "l_x",     "l_y",     "l_z",
          "k_des_x", "k_des_y", "k_des_z", "l_des_x", "l_des_y", "l_des_z"};
}

std::vector<std::string> alip_state_columns() {
  return {"t_s",   "step",  "stance_right", "t_step_s", "p_x_m",   "L_cy", "p_y_m",     "L_cx",     "L_com_x",
          "L_com_y", "L_com_z", "u_x_m",    "u_y_m",    "clamped", "landing_x_m", "landing_y_m"};
}

std::vector<std::string> momentum_prediction_columns() {
  return {"t_s", "step", "t_step_s", "L_cx", "L_cy", "L_hat_cx", "L_hat_cy"};
}

std::vector<std::string> wrench_columns(std::size_t levels) {
  std::vector<std::string> c{"t_s",  "stance_right", "tau_x_Nm", "tau_y_Nm",  "tau_z_Nm",  "f_x_N",
                             "f_y_N", "f_z_N",       "violation", "modified", "saturated", "constraint_residual"};
  for (std::size_t i = 1; i <= levels; ++i) c.push_back(fmt::format("level{}_residual", i));
  return c;
}

std::vector<std::string> step_columns() {
  return {"step",        "stance_right", "t_s",         "p_x_minus_m",  "L_cy_minus",     "p_y_minus_m",
          "L_cx_minus",  "p_x_plus_m",   "L_cy_plus",   "p_y_plus_m",   "L_cx_plus",      "L_hat_cx_mid",
          "L_hat_cy_mid", "peak_L_c",     "touchdown_height_m", "snapped", "stance_drift_m", "vz_jump_mps",
          "contact_x_m", "contact_y_m"};
}

std::vector<std::string> phase_portrait_columns() {
  return {"series", "vcmd_x_mps", "vcmd_y_mps", "step",    "stance_right", "t_s",
          "p_x_m",  "L_cy",       "p_y_m",      "L_cx",    "com_x_m",      "com_y_m"};
}

namespace {

double right(Stance s) { return s == Stance::RightSupport ? 1.0 : 0.0; }
double flag(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

void write_scenario_outputs(const std::filesystem::path& dir, const ScenarioResult& result) {
  std::filesystem::create_directories(dir);
  const std::size_t levels = result.records.empty() ? 0 : result.records.front().level_residuals.size();
  CsvWriter com(dir / "com_tracking.csv", com_tracking_columns());
  CsvWriter mom(dir / "momentum_tracking.csv", momentum_tracking_columns());
  CsvWriter alip(dir / "alip_states.csv", alip_state_columns());
  CsvWriter pred(dir / "momentum_prediction.csv", momentum_prediction_columns());
  CsvWriter wr(dir / "wrench.csv", wrench_columns(levels));

  for (const LogRecord& r : result.records) {
    com.row({r.t, r.com.x(), r.com.y(), r.com.z(), r.com_desired.x(), r.com_desired.y(), r.com_desired.z(),
             r.com_velocity.x(), r.com_velocity.y(), r.com_velocity.z(), r.com_velocity_desired.x(),
             r.com_velocity_desired.y(), r.v_command.x(), r.v_command.y(), r.v_planner.x(), r.v_planner.y()});
    mom.row({r.t, r.h(0), r.h(1), r.h(2), r.h(3), r.h(4), r.h(5), r.h_desired(0), r.h_desired(1), r.h_desired(2),
             r.h_desired(3), r.h_desired(4), r.h_desired(5)});
    alip.row({r.t, static_cast<double>(r.step), right(r.stance), r.t_step, r.x.p_x, r.x.L_cy, r.y.p_y, r.y.L_cx,
              r.L_com.x(), r.L_com.y(), r.L_com.z(), r.u.u_x, r.u.u_y, flag(r.placement_clamped), r.landing.x(),
              r.landing.y()});
    pred.row({r.t, static_cast<double>(r.step), r.t_step, r.y.L_cx, r.x.L_cy, r.L_hat_cx, r.L_hat_cy});
    std::vector<double> w{r.t,
                          right(r.stance),
                          r.lambda.moment.x(),
                          r.lambda.moment.y(),
                          r.lambda.moment.z(),
                          r.lambda.force.x(),
                          r.lambda.force.y(),
                          r.lambda.force.z(),
                          r.wrench_violation,
                          flag(r.wrench_modified),
                          flag(r.wrench_saturated),
                          r.constraint_residual};
    w.insert(w.end(), r.level_residuals.begin(), r.level_residuals.end());
    wr.row(w);
  }

  CsvWriter st(dir / "steps.csv", step_columns());
  for (const StepEvent& s : result.steps) {
    st.row({static_cast<double>(s.step), right(s.stance), s.t, s.x_minus.p_x, s.x_minus.L_cy, s.y_minus.p_y,
            s.y_minus.L_cx, s.x_plus.p_x, s.x_plus.L_cy, s.y_plus.p_y, s.y_plus.L_cx, s.L_hat_cx_mid,
            s.L_hat_cy_mid, s.peak_L_c, s.touchdown_height, flag(s.snapped), s.stance_drift,
            s.vertical_velocity_jump, s.contact_origin.x(), s.contact_origin.y()});
  }

  std::ofstream summary(dir / "summary.txt");
  if (!summary) throw std::runtime_error("cannot write summary.txt in " + dir.string());
  summary << format_summary(result.summary);
}

void write_phase_portrait(const std::filesystem::path& file, const std::vector<PortraitSeries>& series) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  CsvWriter out(file, phase_portrait_columns());
  for (const PortraitSeries& s : series) {
    for (const TemplateSample& p : s.rollout.samples) {
      out.row(s.label, {s.command.x(), s.command.y(), static_cast<double>(p.step), right(p.stance), p.t, p.x.p_x,
                        p.x.L_cy, p.y.p_y, p.y.L_cx, p.com_world.x(), p.com_world.y()});
    }
  }
}

}  // namespace alip::sim
