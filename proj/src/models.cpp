// SPDX-License-Identifier: Apache-2.0

#include "hems/models.hpp"

#include <algorithm>
#include <cassert>

namespace hems {

double pv_module_temperature(double ghi_kw_m2, double t_ambient_c,
                             double wind_m_s, const PvParams& pv) {
  return t_ambient_c + ghi_kw_m2 * 1000.0 / (pv.u0 + pv.u1 * wind_m_s);
}

double pv_available_energy(const ExogenousRecord& rec, double alpha_pv,
                           double pv_base_kw, const PvParams& pv,
                           const TimeBase& tb) {
  if (rec.ghi_kw_m2 <= 0.0) return 0.0;
  const double t_mod =
      pv_module_temperature(rec.ghi_kw_m2, rec.t_ambient_c, rec.wind_m_s, pv);
  const double rated_kw = alpha_pv * pv_base_kw;
  // Rated at 1 kW/m^2 and t_ref.
  const double p_kw =
      rated_kw * rec.ghi_kw_m2 * (1.0 + pv.gamma_p * (t_mod - pv.t_ref_c));
  return std::clamp(p_kw * tb.step_hours, 0.0, rated_kw * tb.step_hours);
}

double battery_deliverable_kwh(double e_bat_kwh, double discharge_eff,
                               const DerivedParams& dp) {
  const double stored = std::max(0.0, e_bat_kwh - dp.e_bat_floor_kwh);
  return std::min(dp.e_bat_rate_kwh, stored * discharge_eff);
}

double battery_absorbable_kwh(double e_bat_kwh, double charge_eff,
                              const DerivedParams& dp) {
  const double headroom = std::max(0.0, dp.e_bat_cap_kwh - e_bat_kwh);
  return std::min(dp.e_bat_rate_kwh, headroom / charge_eff);
}

BatteryTransfer battery_step_plant(double e_bat_kwh, bool charge,
                                   bool discharge, double energy_through_kwh,
                                   BatteryEfficiency eff,
                                   const DerivedParams& dp) {
  assert(!(charge && discharge));
  const double request = std::clamp(energy_through_kwh, 0.0, dp.e_bat_rate_kwh);
  BatteryTransfer out{e_bat_kwh, 0.0};
  if (charge) {
    const double bus = std::min(request, battery_absorbable_kwh(
                                             e_bat_kwh, eff.charge, dp));
    out.bus_kwh = bus;
    out.e_bat_kwh = std::min(dp.e_bat_cap_kwh, e_bat_kwh + eff.charge * bus);
  } else if (discharge) {
    const double bus = std::min(request, battery_deliverable_kwh(
                                             e_bat_kwh, eff.discharge, dp));
    out.bus_kwh = bus;
    out.e_bat_kwh =
        std::max(dp.e_bat_floor_kwh, e_bat_kwh - bus / eff.discharge);
  }
  return out;
}

}  // namespace hems
