// SPDX-License-Identifier: Apache-2.0

#include "hems/domain.hpp"

#include <cmath>
#include <numeric>

namespace hems {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void TimeBase::validate() const {
  require(finite_positive(step_hours), "step_hours must be > 0");
  require(steps_total >= 1, "steps_total must be >= 1");
  require(horizon_steps >= 1, "horizon_steps must be >= 1");
}

ThermalParams default_thermal_params(double step_hours, double tau_hours,
                                     double hold_c, double hold_ambient_c) {
  ThermalParams p;
  p.a_coef = std::exp(-step_hours / tau_hours);
  p.d_coef = 1.0 - p.a_coef;
  p.b_coef = 1.0 - p.a_coef;
  // Steady AC-on state: T = T_am + b*q/(1-a), so q is the pull-down in K.
  p.q_ac = -(hold_ambient_c - hold_c);
  return p;
}

void ThermalParams::validate() const {
  require(a_coef > 0.0 && a_coef < 1.0, "thermal a must lie in (0,1)");
  require(std::abs(a_coef + d_coef - 1.0) <= 1e-9, "thermal a + d must be 1");
  require(std::isfinite(b_coef) && std::isfinite(q_ac),
          "thermal b and q_ac must be finite");
}

void PvParams::validate() const {
  require(finite_positive(u0), "pv u0 must be > 0");
  require(std::isfinite(u1) && u1 >= 0.0, "pv u1 must be >= 0");
  require(std::isfinite(gamma_p) && gamma_p < 0.0, "pv gamma_p must be < 0");
  require(std::isfinite(t_ref_c), "pv t_ref_c must be finite");
}

void ScenarioConfig::validate() const {
  for (double v : {alpha_pv, alpha_bat, alpha_i, pv_base_kw,
                   bat_capacity_base_kwh, bat_rate_base_kw, bat_surge_base_kw,
                   ac_rated_kw}) {
    require(finite_positive(v), "size factors and ratings must be > 0");
  }
  require(std::isfinite(alpha_v) && alpha_v >= 0.0 && alpha_v < 1.0,
          "alpha_v must lie in [0,1)");
  require(std::isfinite(t_lower_c) && std::isfinite(t_upper_c) &&
              t_lower_c < t_upper_c,
          "t_lower_c must be below t_upper_c");
  require(charge_eff > 0.0 && charge_eff <= 1.0, "charge_eff must lie in (0,1]");
  require(discharge_eff > 0.0 && discharge_eff <= 1.0,
          "discharge_eff must lie in (0,1]");
  require(bat_floor_kwh >= 0.0 &&
              bat_floor_kwh < alpha_bat * bat_capacity_base_kwh,
          "bat_floor_kwh must lie below capacity");
  require(gamma_lower < gamma_upper, "gamma bounds reversed");
  for (double l : {lambdas.temperature_slack, lambdas.critical_slack,
                   lambdas.load_served, lambdas.battery_level,
                   lambdas.discharge_flag}) {
    require(std::isfinite(l) && l >= 0.0, "lambda weights must be >= 0");
  }
  require(std::isfinite(mip_gap) && mip_gap >= 0.0, "mip_gap must be >= 0");
  require(finite_positive(time_limit_s), "time_limit_s must be > 0");
  require(mip_node_limit >= 0.0 && mip_node_limit <= 1e15 &&
              mip_node_limit == std::floor(mip_node_limit),
          "mip_node_limit must be a whole number >= 0");
  require(n_circuits >= 1, "n_circuits must be >= 1");
  require(initial_soc >= 0.0 && initial_soc <= 1.0,
          "initial_soc must lie in [0,1]");
  require(std::isfinite(initial_t_house_c), "initial_t_house_c must be finite");
  thermal.validate();
  pv.validate();
}

DerivedParams derive(const ScenarioConfig& cfg, const TimeBase& tb) {
  cfg.validate();
  tb.validate();
  DerivedParams dp;
  dp.pv_rated_kw = cfg.alpha_pv * cfg.pv_base_kw;
  dp.e_pv_rated_kwh = dp.pv_rated_kw * tb.step_hours;
  dp.e_ac_kwh = cfg.ac_rated_kw * tb.step_hours;
  dp.p_ac_startup_kw = (1.0 - cfg.alpha_v) * cfg.alpha_i * cfg.ac_rated_kw;
  dp.e_bat_cap_kwh = cfg.alpha_bat * cfg.bat_capacity_base_kwh;
  dp.e_bat_floor_kwh = cfg.bat_floor_kwh;
  dp.p_bat_rate_kw = cfg.alpha_bat * cfg.bat_rate_base_kw;
  dp.e_bat_rate_kwh = dp.p_bat_rate_kw * tb.step_hours;
  dp.p_bat_surge_kw = cfg.alpha_bat * cfg.bat_surge_base_kw;
  return dp;
}

double ExogenousRecord::total_demand_kwh() const {
  return std::accumulate(circuit_demand_kwh.begin(), circuit_demand_kwh.end(),
                         0.0);
}

void ExogenousRecord::validate(int n_circuits) const {
  if (static_cast<int>(circuit_demand_kwh.size()) != n_circuits) {
    throw std::invalid_argument("exogenous record has " +
                                std::to_string(circuit_demand_kwh.size()) +
                                " circuits, expected " +
                                std::to_string(n_circuits));
  }
  if (!(ghi_kw_m2 >= 0.0) || !(wind_m_s >= 0.0) ||
      !std::isfinite(t_ambient_c)) {
    throw std::invalid_argument("exogenous record out of range");
  }
  for (double e : circuit_demand_kwh) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw std::invalid_argument("negative or non-finite circuit demand");
    }
  }
}

void ControlCommand::validate(int n_circuits) const {
  if (charge && discharge) {
    throw std::invalid_argument("charge and discharge both asserted");
  }
  if (static_cast<int>(circuits_on.size()) != n_circuits) {
    throw std::invalid_argument("command circuit count mismatch");
  }
}

}  // namespace hems
