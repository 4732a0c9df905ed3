// SPDX-License-Identifier: Apache-2.0
//
// Shared value types for the off-grid house: time base, scenario
// configuration, derived ratings, exogenous records, commands and state.

#ifndef HEMS_DOMAIN_HPP_
#define HEMS_DOMAIN_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace hems {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Step length, simulated length, and MPC look-ahead, all in steps of
// `step_hours`.
struct TimeBase {
  double step_hours = 1.0 / 6.0;
  int steps_total = 1008;
  int horizon_steps = 144;

  void validate() const;
};

// First-order house model T' = a*T + b*u*q_ac + d*T_am.
struct ThermalParams {
  double a_coef = 0.0;
  double b_coef = 0.0;
  double d_coef = 0.0;
  double q_ac = 0.0;

  void validate() const;
};

// Equivalent-thermal-parameter defaults for a given step: time constant
// `tau_hours`, and an AC that holds `hold_c` at `hold_ambient_c` when run
// continuously.
ThermalParams default_thermal_params(double step_hours, double tau_hours = 2.0,
                                     double hold_c = 25.0,
                                     double hold_ambient_c = 35.0);

// Faiman module temperature plus linear power temperature coefficient.
struct PvParams {
  double u0 = 25.0;        // W/(m^2 K)
  double u1 = 6.84;        // W s/(m^3 K)
  double gamma_p = -0.0035;  // 1/K
  double t_ref_c = 25.0;

  void validate() const;
};

struct LambdaWeights {
  double temperature_slack = 1.0;  // lambda 1
  double critical_slack = 1.0;     // lambda 2
  double load_served = 1.0;        // lambda 3
  double battery_level = 1.0;      // lambda 4
  double discharge_flag = 1.0;     // lambda 5
};

struct ScenarioConfig {
  double alpha_pv = 0.5;
  double alpha_bat = 0.5;
  double alpha_i = 4.0;
  double alpha_v = 0.3;

  double pv_base_kw = 10.075;
  double bat_capacity_base_kwh = 13.5;
  double bat_rate_base_kw = 5.0;
  double bat_surge_base_kw = 7.0;
  double bat_floor_kwh = 0.0;
  double ac_rated_kw = 3.0;

  double t_upper_c = 25.0;
  double t_lower_c = 23.0;

  LambdaWeights lambdas;
  double gamma_lower = -1.0;
  double gamma_upper = 1.0;

  double mip_gap = 0.01;
  double time_limit_s = 500.0;
  double mip_node_limit = 0.0;  // whole number; 0 = unlimited

  double charge_eff = 0.95;
  double discharge_eff = 0.95;

  ThermalParams thermal = default_thermal_params(1.0 / 6.0);
  PvParams pv;
  int n_circuits = 8;

  // Closed-loop initial conditions.
  double initial_t_house_c = 24.0;
  double initial_soc = 1.0;

  void validate() const;
};

// Ratings computed from a ScenarioConfig and TimeBase; never edited by hand.
struct DerivedParams {
  double pv_rated_kw = 0.0;
  double e_pv_rated_kwh = 0.0;
  double e_ac_kwh = 0.0;         // AC energy per step while running
  double p_ac_startup_kw = 0.0;  // inrush power at turn-on
  double e_bat_cap_kwh = 0.0;
  double e_bat_floor_kwh = 0.0;
  double p_bat_rate_kw = 0.0;
  double e_bat_rate_kwh = 0.0;   // per-step charge/discharge energy
  double p_bat_surge_kw = 0.0;   // short-time discharge rating
};

DerivedParams derive(const ScenarioConfig& cfg, const TimeBase& tb);

struct ExogenousRecord {
  double ghi_kw_m2 = 0.0;
  double t_ambient_c = 0.0;
  double wind_m_s = 0.0;
  // kWh per step, index 0 is the critical (highest priority) circuit.
  std::vector<double> circuit_demand_kwh;

  double total_demand_kwh() const;
  double critical_demand_kwh() const {
    return circuit_demand_kwh.empty() ? 0.0 : circuit_demand_kwh.front();
  }
  void validate(int n_circuits) const;
};

struct ControlCommand {
  bool charge = false;
  bool discharge = false;
  bool ac_on = false;
  std::vector<bool> circuits_on;

  void validate(int n_circuits) const;
};

struct PlantState {
  double t_house_c = 24.0;
  double e_bat_kwh = 0.0;
  bool ac_was_on = false;
};

// What a controller sees each step.
struct Feedback {
  double t_house_c = 0.0;
  double e_bat_kwh = 0.0;
  bool ac_prev = false;
};

// The three grids swept by the study.
inline constexpr std::array<double, 6> kAlphaIGrid = {3, 4, 5, 6, 7, 8};
inline constexpr std::array<double, 4> kAlphaPvGrid = {0.25, 0.5, 0.75, 1.0};
inline constexpr std::array<double, 4> kAlphaBatGrid = {0.25, 0.5, 0.75, 1.0};

}  // namespace hems

#endif  // HEMS_DOMAIN_HPP_
