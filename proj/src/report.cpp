// SPDX-License-Identifier: Apache-2.0

#include "hems/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "hems/charts.hpp"

namespace hems {
namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : "NA"; }

const char* color_of(ControllerKind k) {
  switch (k) {
    case ControllerKind::kBaseline: return "#1f77b4";
    case ControllerKind::kRuleBased: return "#2ca02c";
    case ControllerKind::kMpc: return "#d62728";
  }
  return "black";
}

std::string write_chart(const std::string& path, const charts::Chart& c) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  charts::write_svg(f, c);
  return path;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const SimulationResult& r,
                          const ScenarioConfig& cfg, const TimeBase& tb,
                          const std::vector<std::string>& timestamps, bool with_timing) {
  const DerivedParams dp = derive(cfg, tb);
  const double span = dp.e_bat_cap_kwh - dp.e_bat_floor_kwh;
  os << "step,timestamp,hours,t_ambient_c,ghi_kw_m2,t_house_c,e_bat_kwh,soc,ac_prev,"
        "cmd_charge,cmd_discharge,cmd_ac,cmd_circuits,demand_kwh,critical_demand_kwh,"
        "served_kwh,critical_served_kwh,ac_served,ac_energy_kwh,pv_avail_kwh,pv_used_kwh,"
        "pv_curtailed_kwh,battery_bus_kwh,tripped,mpc_status,mpc_objective,mpc_gap,"
        "mpc_nodes,mpc_fallback,solve_ms\n";
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    const TrajectoryStep& s = r.trajectory[k];
    std::string bits;
    for (bool b : s.cmd.circuits_on) bits += b ? '1' : '0';
    const double soc = span > 0.0 ? (s.state.e_bat_kwh - dp.e_bat_floor_kwh) / span : 0.0;
    os << k << ',' << (k < timestamps.size() ? timestamps[k] : "") << ','
       << fmt(static_cast<double>(k) * tb.step_hours) << ',' << fmt(s.rec.t_ambient_c) << ','
       << fmt(s.rec.ghi_kw_m2) << ',' << fmt(s.state.t_house_c) << ','
       << fmt(s.state.e_bat_kwh) << ',' << fmt(soc) << ',' << s.state.ac_was_on << ','
       << s.cmd.charge << ',' << s.cmd.discharge << ',' << s.cmd.ac_on << ",b" << bits << ','
       << fmt(s.rec.total_demand_kwh()) << ',' << fmt(s.rec.critical_demand_kwh()) << ','
       << fmt(s.outcome.served_total_kwh()) << ','
       << fmt(s.outcome.served_circuit_kwh.empty() ? 0.0
                                                   : s.outcome.served_circuit_kwh.front())
       << ',' << s.outcome.ac_served << ',' << fmt(s.outcome.ac_energy_kwh) << ','
       << fmt(s.outcome.e_pv_avail_kwh) << ',' << fmt(s.outcome.e_pv_used_kwh) << ','
       << fmt(s.outcome.e_pv_curtailed_kwh) << ',' << fmt(s.outcome.battery_bus_kwh) << ','
       << s.outcome.tripped << ',';
    if (k < r.mpc.size()) {
      const MpcDiagnostics& d = r.mpc[k];
      os << milp::to_string(d.status) << ','
         << (d.fallback ? std::string() : fmt(d.objective)) << ','
         << (d.fallback ? std::string() : fmt(d.gap)) << ',' << d.nodes << ','
         << d.fallback;
    } else {
      os << ",,,,";
    }
    os << ',' << (with_timing && k < r.mpc.size() ? fmt(s.solve_ms) : "") << '\n';
  }
}

void write_metrics_header(std::ostream& os) { os << kMetricsHeader << '\n'; }

void write_metrics_row(std::ostream& os, const MetricsRow& row, bool with_timing) {
  os << to_string(row.controller) << ',' << fmt(row.alpha_i) << ',' << fmt(row.alpha_pv)
     << ',' << fmt(row.alpha_bat) << ',' << opt(row.lrm_cri) << ',' << opt(row.lrm_o) << ','
     << fmt(row.trm_h) << ',' << row.trip_steps << ','
     << (with_timing ? fmt(row.mean_solve_ms) : "NA") << '\n';
}

std::vector<std::string> write_run_charts(const std::string& dir, const std::string& prefix,
                                          const SimulationResult& r,
                                          const ScenarioConfig& cfg, const TimeBase& tb) {
  const DerivedParams dp = derive(cfg, tb);
  const double span = dp.e_bat_cap_kwh - dp.e_bat_floor_kwh;
  std::vector<double> h, t_in, t_am, t_hi, t_lo, soc, dem, served, cri, cri_served, pv_av,
      pv_used;
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    const TrajectoryStep& s = r.trajectory[k];
    h.push_back(static_cast<double>(k) * tb.step_hours);
    t_in.push_back(s.outcome.new_state.t_house_c);
    t_am.push_back(s.rec.t_ambient_c);
    t_hi.push_back(cfg.t_upper_c);
    t_lo.push_back(cfg.t_lower_c);
    soc.push_back(span > 0.0 ? (s.outcome.new_state.e_bat_kwh - dp.e_bat_floor_kwh) / span
                             : 0.0);
    dem.push_back(s.rec.total_demand_kwh());
    served.push_back(s.outcome.served_total_kwh());
    cri.push_back(s.rec.critical_demand_kwh());
    cri_served.push_back(
        s.outcome.served_circuit_kwh.empty() ? 0.0 : s.outcome.served_circuit_kwh.front());
    pv_av.push_back(s.outcome.e_pv_avail_kwh);
    pv_used.push_back(s.outcome.e_pv_used_kwh);
  }
  const std::string base = dir + "/" + prefix;
  std::vector<std::string> out;
  out.push_back(write_chart(
      base + "_temperature.svg",
      {prefix + ": house temperature", "hours", "degC",
       {{"house", "#d62728", h, t_in}, {"ambient", "#7f7f7f", h, t_am},
        {"upper bound", "#000000", h, t_hi, true}, {"lower bound", "#1f77b4", h, t_lo, true}}}));
  out.push_back(write_chart(base + "_soc.svg",
                            {prefix + ": battery state of charge", "hours", "SoC",
                             {{"SoC", "#2ca02c", h, soc}}}));
  out.push_back(write_chart(
      base + "_load.svg",
      {prefix + ": load demanded and served", "hours", "kWh per step",
       {{"demanded", "#7f7f7f", h, dem}, {"served", "#1f77b4", h, served},
        {"critical demanded", "#ff7f0e", h, cri, true},
        {"critical served", "#d62728", h, cri_served}}}));
  out.push_back(write_chart(base + "_pv.svg",
                            {prefix + ": PV energy", "hours", "kWh per step",
                             {{"available", "#ff7f0e", h, pv_av}, {"used", "#9467bd", h, pv_used}}}));
  return out;
}

std::vector<std::string> write_sweep_charts(const std::string& dir,
                                            const std::vector<MetricsRow>& rows) {
  std::map<std::tuple<double, double, double>, int> case_index;
  for (const MetricsRow& r : rows) case_index[{r.alpha_i, r.alpha_pv, r.alpha_bat}] = 0;
  int next = 1;
  for (auto& [key, idx] : case_index) idx = next++;

  struct Metric {
    const char* name;
    const char* label;
    std::optional<double> (*get)(const MetricsRow&);
  };
  const Metric metrics[] = {
      {"lrm_cri", "critical load resiliency", [](const MetricsRow& r) { return r.lrm_cri; }},
      {"lrm_o", "other load resiliency", [](const MetricsRow& r) { return r.lrm_o; }},
      {"trm_h", "thermal resiliency",
       [](const MetricsRow& r) { return std::optional<double>(r.trm_h); }},
  };
  std::vector<std::string> out;
  for (const Metric& m : metrics) {
    charts::Chart c{std::string(m.label) + " by case", "case (alpha_i, alpha_pv, alpha_bat)",
                    m.name, {}};
    for (ControllerKind kind :
         {ControllerKind::kBaseline, ControllerKind::kRuleBased, ControllerKind::kMpc}) {
      charts::Series s{to_string(kind), color_of(kind), {}, {}, false, true};
      for (const MetricsRow& r : rows) {
        if (r.controller != kind) continue;
        const auto v = m.get(r);
        if (!v) continue;
        s.x.push_back(case_index[{r.alpha_i, r.alpha_pv, r.alpha_bat}]);
        s.y.push_back(*v);
      }
      if (!s.x.empty()) c.series.push_back(std::move(s));
    }
    out.push_back(write_chart(dir + "/sweep_" + m.name + ".svg", c));
  }
  return out;
}

}  // namespace hems
