// SPDX-License-Identifier: Apache-2.0
//
// Reactive controllers: the Baseline (independent battery logic, thermostat,
// loads-on-demand) and the Rule-Based controller that repairs the Baseline
// command using energy and power mismatches.

#ifndef HEMS_CONTROLLERS_HPP_
#define HEMS_CONTROLLERS_HPP_

#include <span>
#include <vector>

#include "hems/domain.hpp"

namespace hems {

struct BatteryBits {
  bool charge = false;
  bool discharge = false;
  bool operator==(const BatteryBits&) const = default;
};

// Charges whenever PV covers demand (ties charge), otherwise discharges.
inline BatteryBits baseline_battery(double e_pv_avail_kwh, double e_demand_kwh) {
  const bool charge = e_pv_avail_kwh >= e_demand_kwh;
  return {charge, !charge};
}

// Hysteresis thermostat on [t_lower, t_upper].
inline bool thermostat(double t_house_c, bool ac_prev, double t_upper_c,
                       double t_lower_c) {
  if (t_house_c >= t_upper_c) return true;
  if (t_house_c <= t_lower_c) return false;
  return ac_prev;
}

std::vector<bool> baseline_loads(std::span<const double> circuit_demand_kwh);

// Circuit m (0-based) is on iff the cumulative demand of circuits 0..m fits
// the budget.
std::vector<bool> priority_stack(double e_l_budget_kwh,
                                 std::span<const double> circuit_demand_kwh);

struct ControllerContext {
  const ScenarioConfig& cfg;
  const DerivedParams& dp;
  const TimeBase& tb;
};

ControlCommand baseline_step(const Feedback& fb, const ExogenousRecord& rec,
                             const ControllerContext& ctx);

struct MismatchReport {
  double e_pv_avail_kwh = 0.0;
  double e_bat_dispatch_kwh = 0.0;  // dischargeable energy under Baseline
  double e_bat_charge_kwh = 0.0;    // charge headroom under Baseline
  bool s_ac_on = false;             // Baseline is starting the AC
  double e_available_kwh = 0.0;
  double e_demand_kwh = 0.0;
  double e_mis_kwh = 0.0;
  double p_available_kw = 0.0;
  double p_demand_kw = 0.0;
  double p_mis_kw = 0.0;
};

MismatchReport rulebased_mismatch(const Feedback& fb, const ExogenousRecord& rec,
                                  const ControlCommand& baseline,
                                  const ControllerContext& ctx);

ControlCommand rulebased_step(const Feedback& fb, const ExogenousRecord& rec,
                              const ControllerContext& ctx,
                              MismatchReport* report = nullptr);

}  // namespace hems

#endif  // HEMS_CONTROLLERS_HPP_
