// SPDX-License-Identifier: Apache-2.0
//
// Closed-loop plant: applies one command and one exogenous record to the
// house, arbitrating startup power and energy shortfalls.

#ifndef HEMS_PLANT_HPP_
#define HEMS_PLANT_HPP_

#include <vector>

#include "hems/domain.hpp"

namespace hems {

struct StepOutcome {
  std::vector<double> served_circuit_kwh;  // each entry 0 or full demand
  bool ac_served = false;
  double ac_energy_kwh = 0.0;
  double e_pv_avail_kwh = 0.0;
  double e_pv_used_kwh = 0.0;
  double e_pv_curtailed_kwh = 0.0;
  // Signed bus exchange: > 0 delivered by the battery, < 0 absorbed.
  double battery_bus_kwh = 0.0;
  double bat_delta_kwh = 0.0;  // change of stored energy
  bool tripped = false;
  PlantState new_state;

  double served_total_kwh() const;
};

struct PlantContext {
  const ScenarioConfig& cfg;
  const DerivedParams& dp;
  const TimeBase& tb;
};

// Startup power the house can source this step, kW: PV plus the battery's
// surge rating when the battery is engaged (charge or discharge command) and
// holds energy above its floor.
double available_startup_power_kw(double e_pv_avail_kwh, const PlantState& s,
                                  const ControlCommand& cmd,
                                  const PlantContext& ctx);

StepOutcome plant_step(const PlantState& state, const ControlCommand& cmd,
                       const ExogenousRecord& rec, const PlantContext& ctx);

struct SensorReading {
  double t_house_c = 0.0;
  double e_bat_kwh = 0.0;
};

inline SensorReading sensors(const PlantState& s) {
  return {s.t_house_c, s.e_bat_kwh};
}

}  // namespace hems

#endif  // HEMS_PLANT_HPP_
