// SPDX-License-Identifier: Apache-2.0
//
// PV availability, house thermal step, and the two battery steps (the
// loss-free one the optimizer plans with and the lossy one the plant runs).

#ifndef HEMS_MODELS_HPP_
#define HEMS_MODELS_HPP_

#include "hems/domain.hpp"

namespace hems {

// Module temperature from the Faiman heat-loss model, degC.
double pv_module_temperature(double ghi_kw_m2, double t_ambient_c,
                             double wind_m_s, const PvParams& pv);

// Maximum PV energy for one step, kWh, clamped to [0, nameplate * step].
double pv_available_energy(const ExogenousRecord& rec, double alpha_pv,
                           double pv_base_kw, const PvParams& pv,
                           const TimeBase& tb);

inline double thermal_step(double t_house_c, bool ac_on, double t_ambient_c,
                           const ThermalParams& p) {
  return p.a_coef * t_house_c + p.b_coef * (ac_on ? 1.0 : 0.0) * p.q_ac +
         p.d_coef * t_ambient_c;
}

// Loss-free planning model; gamma > 0 discharges.
inline double battery_step_model(double e_bat_kwh, double gamma,
                                 const DerivedParams& dp) {
  return e_bat_kwh - gamma * dp.e_bat_rate_kwh;
}

struct BatteryEfficiency {
  double charge = 0.95;
  double discharge = 0.95;
};

struct BatteryTransfer {
  double e_bat_kwh = 0.0;
  // Energy exchanged with the bus: absorbed when charging, delivered when
  // discharging. Always >= 0.
  double bus_kwh = 0.0;
};

// Moves up to `energy_through_kwh` between bus and storage with losses,
// clamped to the storage bounds in `dp`.
BatteryTransfer battery_step_plant(double e_bat_kwh, bool charge,
                                   bool discharge, double energy_through_kwh,
                                   BatteryEfficiency eff,
                                   const DerivedParams& dp);

// Bus energy the battery can deliver this step given its charge and rate.
double battery_deliverable_kwh(double e_bat_kwh, double discharge_eff,
                               const DerivedParams& dp);

// Bus energy the battery can absorb this step given headroom and rate.
double battery_absorbable_kwh(double e_bat_kwh, double charge_eff,
                              const DerivedParams& dp);

}  // namespace hems

#endif  // HEMS_MODELS_HPP_
