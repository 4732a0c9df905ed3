// SPDX-License-Identifier: Apache-2.0

#include "hems/controllers.hpp"

#include <algorithm>
#include <cmath>

#include "hems/models.hpp"

namespace hems {

std::vector<bool> baseline_loads(std::span<const double> circuit_demand_kwh) {
  std::vector<bool> on(circuit_demand_kwh.size());
  for (std::size_t i = 0; i < on.size(); ++i) on[i] = circuit_demand_kwh[i] > 0.0;
  return on;
}

std::vector<bool> priority_stack(double e_l_budget_kwh,
                                 std::span<const double> circuit_demand_kwh) {
  std::vector<bool> on(circuit_demand_kwh.size(), false);
  double cumulative = 0.0;
  for (std::size_t m = 0; m < on.size(); ++m) {
    cumulative += circuit_demand_kwh[m];
    on[m] = cumulative <= e_l_budget_kwh;
  }
  return on;
}

ControlCommand baseline_step(const Feedback& fb, const ExogenousRecord& rec,
                             const ControllerContext& ctx) {
  const auto& cfg = ctx.cfg;
  ControlCommand cmd;
  // Thermostat first: the battery logic needs the AC decision.
  cmd.ac_on = thermostat(fb.t_house_c, fb.ac_prev, cfg.t_upper_c, cfg.t_lower_c);
  cmd.circuits_on = baseline_loads(rec.circuit_demand_kwh);
  double e_demand = cmd.ac_on ? ctx.dp.e_ac_kwh : 0.0;
  for (std::size_t i = 0; i < cmd.circuits_on.size(); ++i) {
    if (cmd.circuits_on[i]) e_demand += rec.circuit_demand_kwh[i];
  }
  const double e_pv = pv_available_energy(rec, cfg.alpha_pv, cfg.pv_base_kw,
                                          cfg.pv, ctx.tb);
  const BatteryBits bits = baseline_battery(e_pv, e_demand);
  cmd.charge = bits.charge;
  cmd.discharge = bits.discharge;
  return cmd;
}

MismatchReport rulebased_mismatch(const Feedback& fb, const ExogenousRecord& rec,
                                  const ControlCommand& baseline,
                                  const ControllerContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& dp = ctx.dp;
  MismatchReport r;
  r.e_pv_avail_kwh = pv_available_energy(rec, cfg.alpha_pv, cfg.pv_base_kw,
                                         cfg.pv, ctx.tb);
  const double stored = std::max(0.0, fb.e_bat_kwh - dp.e_bat_floor_kwh);
  const double headroom = std::max(0.0, dp.e_bat_cap_kwh - fb.e_bat_kwh);
  r.e_bat_dispatch_kwh =
      baseline.discharge ? std::min(dp.e_bat_rate_kwh, stored) : 0.0;
  r.e_bat_charge_kwh =
      baseline.charge ? std::min(dp.e_bat_rate_kwh, headroom) : 0.0;
  r.s_ac_on = baseline.ac_on && !fb.ac_prev;

  r.e_demand_kwh = (baseline.ac_on ? dp.e_ac_kwh : 0.0) + rec.total_demand_kwh();
  r.e_available_kwh = r.e_pv_avail_kwh + r.e_bat_dispatch_kwh;
  r.e_mis_kwh = r.e_available_kwh - r.e_demand_kwh;

  // Battery surge only counts while the battery holds energy.
  r.p_demand_kw = r.s_ac_on ? dp.p_ac_startup_kw : 0.0;
  r.p_available_kw = r.e_pv_avail_kwh / ctx.tb.step_hours +
                     (stored > 0.0 ? dp.p_bat_surge_kw : 0.0);
  r.p_mis_kw = r.p_available_kw - r.p_demand_kw;
  return r;
}

ControlCommand rulebased_step(const Feedback& fb, const ExogenousRecord& rec,
                              const ControllerContext& ctx,
                              MismatchReport* report) {
  const ControlCommand base = baseline_step(fb, rec, ctx);
  const MismatchReport r = rulebased_mismatch(fb, rec, base, ctx);
  if (report != nullptr) *report = r;

  ControlCommand cmd = base;
  const double ac_energy = base.ac_on ? ctx.dp.e_ac_kwh : 0.0;
  if (r.e_mis_kwh >= 0.0) {
    if (r.p_mis_kw < 0.0) cmd.ac_on = false;
    return cmd;
  }
  const double shortfall = -r.e_mis_kwh;
  cmd.ac_on = false;
  if (shortfall <= ac_energy) return cmd;
  // Shedding the AC is not enough: hand the whole available energy to the
  // priority stack. Budget never negative.
  cmd.circuits_on =
      priority_stack(std::max(r.e_available_kwh, 0.0), rec.circuit_demand_kwh);
  return cmd;
}

}  // namespace hems
