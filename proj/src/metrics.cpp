// SPDX-License-Identifier: Apache-2.0

#include "hems/metrics.hpp"

#include <algorithm>

namespace hems {
namespace {

std::optional<double> ratio(double served, double demanded) {
  if (demanded <= 0.0) return std::nullopt;
  return std::clamp(served / demanded, 0.0, 1.0);
}

}  // namespace

std::optional<double> lrm_cri(const Trajectory& traj) {
  double served = 0.0, demanded = 0.0;
  for (const auto& s : traj) {
    demanded += s.rec.critical_demand_kwh();
    if (!s.outcome.served_circuit_kwh.empty()) {
      served += s.outcome.served_circuit_kwh.front();
    }
  }
  return ratio(served, demanded);
}

std::optional<double> lrm_o(const Trajectory& traj) {
  double served = 0.0, demanded = 0.0;
  for (const auto& s : traj) {
    demanded += s.rec.total_demand_kwh();
    served += s.outcome.served_total_kwh();
  }
  return ratio(served, demanded);
}

double trm_h(const Trajectory& traj, double t_upper_c) {
  if (traj.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : traj) sum += std::max(0.0, t_upper_c - s.state.t_house_c);
  return sum / static_cast<double>(traj.size());
}

int trip_steps(const Trajectory& traj) {
  return static_cast<int>(
      std::count_if(traj.begin(), traj.end(), [](const auto& s) { return s.outcome.tripped; }));
}

double mean_solve_ms(const Trajectory& traj) {
  if (traj.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : traj) sum += s.solve_ms;
  return sum / static_cast<double>(traj.size());
}

}  // namespace hems
