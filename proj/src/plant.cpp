// SPDX-License-Identifier: Apache-2.0

#include "hems/plant.hpp"

#include <algorithm>
#include <numeric>

#include "hems/models.hpp"

namespace hems {

double StepOutcome::served_total_kwh() const {
  return std::accumulate(served_circuit_kwh.begin(), served_circuit_kwh.end(),
                         0.0);
}

double available_startup_power_kw(double e_pv_avail_kwh, const PlantState& s,
                                  const ControlCommand& cmd,
                                  const PlantContext& ctx) {
  const bool engaged = cmd.charge || cmd.discharge;
  const bool holds_energy = s.e_bat_kwh > ctx.dp.e_bat_floor_kwh;
  return e_pv_avail_kwh / ctx.tb.step_hours +
         (engaged && holds_energy ? ctx.dp.p_bat_surge_kw : 0.0);
}

StepOutcome plant_step(const PlantState& state, const ControlCommand& cmd,
                       const ExogenousRecord& rec, const PlantContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& dp = ctx.dp;
  const int n = cfg.n_circuits;
  cmd.validate(n);
  rec.validate(n);

  StepOutcome out;
  out.served_circuit_kwh.assign(n, 0.0);
  out.e_pv_avail_kwh = pv_available_energy(rec, cfg.alpha_pv, cfg.pv_base_kw,
                                           cfg.pv, ctx.tb);
  out.new_state = state;

  const bool startup = cmd.ac_on && !state.ac_was_on;
  if (startup && dp.p_ac_startup_kw >
                     available_startup_power_kw(out.e_pv_avail_kwh, state,
                                                cmd, ctx)) {
    out.tripped = true;
    out.e_pv_curtailed_kwh = out.e_pv_avail_kwh;
    out.new_state.t_house_c =
        thermal_step(state.t_house_c, false, rec.t_ambient_c, cfg.thermal);
    out.new_state.ac_was_on = false;
    return out;
  }

  const double deliverable =
      cmd.discharge
          ? battery_deliverable_kwh(state.e_bat_kwh, cfg.discharge_eff, dp)
          : 0.0;
  const double supply = out.e_pv_avail_kwh + deliverable;

  bool ac = cmd.ac_on;
  std::vector<bool> on = cmd.circuits_on;
  double demand = ac ? dp.e_ac_kwh : 0.0;
  for (int i = 0; i < n; ++i) {
    if (on[i]) demand += rec.circuit_demand_kwh[i];
  }
  // Shed AC first, then circuits from lowest priority upward.
  int next_shed = n - 1;
  while (demand > supply) {
    if (ac) {
      ac = false;
      demand -= dp.e_ac_kwh;
    } else {
      while (next_shed >= 0 && !on[next_shed]) --next_shed;
      if (next_shed < 0) break;
      on[next_shed] = false;
      demand -= rec.circuit_demand_kwh[next_shed];
    }
    // Re-sum to keep the balance exact after subtraction round-off.
    demand = ac ? dp.e_ac_kwh : 0.0;
    for (int i = 0; i < n; ++i) {
      if (on[i]) demand += rec.circuit_demand_kwh[i];
    }
  }

  out.ac_served = ac;
  out.ac_energy_kwh = ac ? dp.e_ac_kwh : 0.0;
  for (int i = 0; i < n; ++i) {
    if (on[i]) out.served_circuit_kwh[i] = rec.circuit_demand_kwh[i];
  }

  const double pv_to_load = std::min(out.e_pv_avail_kwh, demand);
  const double remainder = demand - pv_to_load;
  BatteryTransfer bt{state.e_bat_kwh, 0.0};
  if (remainder > 0.0) {
    const BatteryEfficiency eff{cfg.charge_eff, cfg.discharge_eff};
    bt = battery_step_plant(state.e_bat_kwh, false, true, remainder, eff, dp);
    out.battery_bus_kwh = bt.bus_kwh;
  } else if (cmd.charge) {
    const BatteryEfficiency eff{cfg.charge_eff, cfg.discharge_eff};
    const double surplus = out.e_pv_avail_kwh - pv_to_load;
    bt = battery_step_plant(state.e_bat_kwh, true, false, surplus, eff, dp);
    out.battery_bus_kwh = -bt.bus_kwh;
  }
  out.e_pv_used_kwh = pv_to_load + std::max(0.0, -out.battery_bus_kwh);
  out.e_pv_curtailed_kwh = out.e_pv_avail_kwh - out.e_pv_used_kwh;
  out.bat_delta_kwh = bt.e_bat_kwh - state.e_bat_kwh;

  out.new_state.e_bat_kwh = bt.e_bat_kwh;
  out.new_state.t_house_c =
      thermal_step(state.t_house_c, ac, rec.t_ambient_c, cfg.thermal);
  out.new_state.ac_was_on = ac;
  return out;
}

}  // namespace hems
