// SPDX-License-Identifier: Apache-2.0
//
// Resiliency metrics over a completed closed-loop trajectory.

#ifndef HEMS_METRICS_HPP_
#define HEMS_METRICS_HPP_

#include <optional>
#include <vector>

#include "hems/domain.hpp"
#include "hems/plant.hpp"

namespace hems {

struct TrajectoryStep {
  ExogenousRecord rec;
  ControlCommand cmd;
  StepOutcome outcome;
  PlantState state;  // state at the start of the step
  double solve_ms = 0.0;
};

using Trajectory = std::vector<TrajectoryStep>;

// Served over demanded critical (first-circuit) energy. Absent when nothing
// was demanded.
std::optional<double> lrm_cri(const Trajectory& traj);

// Served over demanded energy summed over all circuits.
std::optional<double> lrm_o(const Trajectory& traj);

// Mean over steps of max(0, t_upper - T_house). Empty trajectories give 0.
double trm_h(const Trajectory& traj, double t_upper_c);

int trip_steps(const Trajectory& traj);
double mean_solve_ms(const Trajectory& traj);

}  // namespace hems

#endif  // HEMS_METRICS_HPP_
