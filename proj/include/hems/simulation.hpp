// SPDX-License-Identifier: Apache-2.0
//
// Closed-loop runner: controller, plant and sensors stepped over a series.

#ifndef HEMS_SIMULATION_HPP_
#define HEMS_SIMULATION_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "hems/metrics.hpp"
#include "hems/mpc.hpp"

namespace hems {

enum class ControllerKind { kBaseline, kRuleBased, kMpc };

std::string to_string(ControllerKind k);
// Accepts "baseline", "rulebased" and "mpc".
std::optional<ControllerKind> parse_controller(const std::string& name);

struct SimulationResult {
  Trajectory trajectory;
  std::vector<MpcDiagnostics> mpc;  // one per step for the MPC, else empty
};

PlantState initial_state(const ScenarioConfig& cfg, const DerivedParams& dp);

// Runs tb.steps_total steps. The series must cover them; MPC windows that
// reach past the end of the series are padded.
SimulationResult simulate(ControllerKind kind, const ScenarioConfig& cfg,
                          const TimeBase& tb, std::span<const ExogenousRecord> series,
                          const std::function<void(int)>& on_step = {});

struct MetricsRow {
  ControllerKind controller = ControllerKind::kBaseline;
  double alpha_i = 0.0;
  double alpha_pv = 0.0;
  double alpha_bat = 0.0;
  std::optional<double> lrm_cri;
  std::optional<double> lrm_o;
  double trm_h = 0.0;
  int trip_steps = 0;
  double mean_solve_ms = 0.0;
};

MetricsRow summarize(ControllerKind kind, const ScenarioConfig& cfg,
                     const Trajectory& traj);

}  // namespace hems

#endif  // HEMS_SIMULATION_HPP_
