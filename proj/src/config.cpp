// SPDX-License-Identifier: Apache-2.0

#include "hems/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace hems {
namespace {

struct Field {
  std::string key;
  std::function<double&(RunConfig&)> ref;
  bool integer = false;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"step_hours", [](RunConfig& c) -> double& { return c.time.step_hours; }},
      {"steps_total", nullptr, true},
      {"horizon_steps", nullptr, true},
      {"alpha_pv", [](RunConfig& c) -> double& { return c.scenario.alpha_pv; }},
      {"alpha_bat", [](RunConfig& c) -> double& { return c.scenario.alpha_bat; }},
      {"alpha_i", [](RunConfig& c) -> double& { return c.scenario.alpha_i; }},
      {"alpha_v", [](RunConfig& c) -> double& { return c.scenario.alpha_v; }},
      {"pv_base_kw", [](RunConfig& c) -> double& { return c.scenario.pv_base_kw; }},
      {"bat_capacity_base_kwh",
       [](RunConfig& c) -> double& { return c.scenario.bat_capacity_base_kwh; }},
      {"bat_rate_base_kw", [](RunConfig& c) -> double& { return c.scenario.bat_rate_base_kw; }},
      {"bat_surge_base_kw",
       [](RunConfig& c) -> double& { return c.scenario.bat_surge_base_kw; }},
      {"bat_floor_kwh", [](RunConfig& c) -> double& { return c.scenario.bat_floor_kwh; }},
      {"ac_rated_kw", [](RunConfig& c) -> double& { return c.scenario.ac_rated_kw; }},
      {"t_upper_c", [](RunConfig& c) -> double& { return c.scenario.t_upper_c; }},
      {"t_lower_c", [](RunConfig& c) -> double& { return c.scenario.t_lower_c; }},
      {"lambda_temperature_slack",
       [](RunConfig& c) -> double& { return c.scenario.lambdas.temperature_slack; }},
      {"lambda_critical_slack",
       [](RunConfig& c) -> double& { return c.scenario.lambdas.critical_slack; }},
      {"lambda_load_served",
       [](RunConfig& c) -> double& { return c.scenario.lambdas.load_served; }},
      {"lambda_battery_level",
       [](RunConfig& c) -> double& { return c.scenario.lambdas.battery_level; }},
      {"lambda_discharge_flag",
       [](RunConfig& c) -> double& { return c.scenario.lambdas.discharge_flag; }},
      {"gamma_lower", [](RunConfig& c) -> double& { return c.scenario.gamma_lower; }},
      {"gamma_upper", [](RunConfig& c) -> double& { return c.scenario.gamma_upper; }},
      {"mip_gap", [](RunConfig& c) -> double& { return c.scenario.mip_gap; }},
      {"time_limit_s", [](RunConfig& c) -> double& { return c.scenario.time_limit_s; }},
      {"mip_node_limit", [](RunConfig& c) -> double& { return c.scenario.mip_node_limit; }},
      {"charge_eff", [](RunConfig& c) -> double& { return c.scenario.charge_eff; }},
      {"discharge_eff", [](RunConfig& c) -> double& { return c.scenario.discharge_eff; }},
      {"thermal_tau_hours", nullptr},
      {"thermal_a", [](RunConfig& c) -> double& { return c.scenario.thermal.a_coef; }},
      {"thermal_b", [](RunConfig& c) -> double& { return c.scenario.thermal.b_coef; }},
      {"thermal_d", [](RunConfig& c) -> double& { return c.scenario.thermal.d_coef; }},
      {"thermal_q_ac", [](RunConfig& c) -> double& { return c.scenario.thermal.q_ac; }},
      {"pv_u0", [](RunConfig& c) -> double& { return c.scenario.pv.u0; }},
      {"pv_u1", [](RunConfig& c) -> double& { return c.scenario.pv.u1; }},
      {"pv_gamma", [](RunConfig& c) -> double& { return c.scenario.pv.gamma_p; }},
      {"pv_t_ref_c", [](RunConfig& c) -> double& { return c.scenario.pv.t_ref_c; }},
      {"n_circuits", nullptr, true},
      {"initial_t_house_c",
       [](RunConfig& c) -> double& { return c.scenario.initial_t_house_c; }},
      {"initial_soc", [](RunConfig& c) -> double& { return c.scenario.initial_soc; }},
  };
  return f;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

// Parsed keys are applied in table order so that thermal defaults can be
// derived from step_hours before explicit coefficients override them.
RunConfig build(const std::map<std::string, std::string>& kv, RunConfig rc) {
  for (const Field& f : fields()) {
    const auto it = kv.find(f.key);
    if (it == kv.end()) continue;
    if (f.key == "steps_total") {
      rc.time.steps_total = to_int(f.key, it->second);
    } else if (f.key == "horizon_steps") {
      rc.time.horizon_steps = to_int(f.key, it->second);
    } else if (f.key == "n_circuits") {
      rc.scenario.n_circuits = to_int(f.key, it->second);
    } else if (f.key == "thermal_tau_hours") {
      // Handled below.
    } else {
      f.ref(rc) = to_double(f.key, it->second);
    }
  }
  if (kv.count("step_hours") || kv.count("thermal_tau_hours")) {
    const double tau = kv.count("thermal_tau_hours")
                           ? to_double("thermal_tau_hours", kv.at("thermal_tau_hours"))
                           : 2.0;
    if (!(tau > 0.0)) throw ConfigError("thermal_tau_hours must be > 0");
    if (!(rc.time.step_hours > 0.0)) throw ConfigError("step_hours must be > 0");
    const ThermalParams def = default_thermal_params(rc.time.step_hours, tau);
    ThermalParams& th = rc.scenario.thermal;
    if (!kv.count("thermal_a")) th.a_coef = def.a_coef;
    if (!kv.count("thermal_b")) th.b_coef = def.b_coef;
    if (!kv.count("thermal_d")) th.d_coef = def.d_coef;
    if (!kv.count("thermal_q_ac")) th.q_ac = def.q_ac;
  }
  rc.time.validate();
  rc.scenario.validate();
  return rc;
}

bool known(const std::string& key) {
  for (const Field& f : fields()) {
    if (f.key == key) return true;
  }
  return false;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

RunConfig parse_config(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                        "'");
    }
    if (value.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty value for '" +
                        key + "'");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(lineno) + ": repeated key '" + key +
                        "'");
    }
  }
  return build(kv, RunConfig{});
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(f);
}

void apply_override(RunConfig& rc, const std::string& key, const std::string& value) {
  if (!known(key)) throw ConfigError("unknown key '" + key + "'");
  if (key == "step_hours" || key == "thermal_tau_hours") {
    throw ConfigError("'" + key + "' cannot be overridden; set it in the config file");
  }
  std::map<std::string, std::string> kv{{key, value}};
  rc = build(kv, rc);
}

void write_config(std::ostream& os, const RunConfig& rc) {
  RunConfig copy = rc;
  for (const Field& f : fields()) {
    if (f.key == "thermal_tau_hours") continue;
    os << f.key << " = ";
    if (f.key == "steps_total") {
      os << rc.time.steps_total;
    } else if (f.key == "horizon_steps") {
      os << rc.time.horizon_steps;
    } else if (f.key == "n_circuits") {
      os << rc.scenario.n_circuits;
    } else {
      os << fmt(f.ref(copy));
    }
    os << '\n';
  }
}

}  // namespace hems
