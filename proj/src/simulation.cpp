// SPDX-License-Identifier: Apache-2.0

#include "hems/simulation.hpp"

#include <stdexcept>

#include "hems/controllers.hpp"
#include "hems/data_io.hpp"
#include "hems/plant.hpp"

namespace hems {

std::string to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::kBaseline: return "baseline";
    case ControllerKind::kRuleBased: return "rulebased";
    case ControllerKind::kMpc: return "mpc";
  }
  return "unknown";
}

std::optional<ControllerKind> parse_controller(const std::string& name) {
  if (name == "baseline") return ControllerKind::kBaseline;
  if (name == "rulebased") return ControllerKind::kRuleBased;
  if (name == "mpc") return ControllerKind::kMpc;
  return std::nullopt;
}

PlantState initial_state(const ScenarioConfig& cfg, const DerivedParams& dp) {
  PlantState s;
  s.t_house_c = cfg.initial_t_house_c;
  s.e_bat_kwh = dp.e_bat_floor_kwh + cfg.initial_soc * (dp.e_bat_cap_kwh - dp.e_bat_floor_kwh);
  s.ac_was_on = false;
  return s;
}

SimulationResult simulate(ControllerKind kind, const ScenarioConfig& cfg,
                          const TimeBase& tb, std::span<const ExogenousRecord> series,
                          const std::function<void(int)>& on_step) {
  const DerivedParams dp = derive(cfg, tb);
  if (static_cast<int>(series.size()) < tb.steps_total) {
    throw std::invalid_argument("series has " + std::to_string(series.size()) +
                                " records, simulation needs " +
                                std::to_string(tb.steps_total));
  }
  const ControllerContext cctx{cfg, dp, tb};
  const PlantContext pctx{cfg, dp, tb};

  SimulationResult out;
  out.trajectory.reserve(static_cast<std::size_t>(tb.steps_total));
  PlantState state = initial_state(cfg, dp);
  for (int k = 0; k < tb.steps_total; ++k) {
    const ExogenousRecord& rec = series[static_cast<std::size_t>(k)];
    rec.validate(cfg.n_circuits);
    const SensorReading y = sensors(state);
    const Feedback fb{y.t_house_c, y.e_bat_kwh, state.ac_was_on};

    TrajectoryStep step;
    switch (kind) {
      case ControllerKind::kBaseline:
        step.cmd = baseline_step(fb, rec, cctx);
        break;
      case ControllerKind::kRuleBased:
        step.cmd = rulebased_step(fb, rec, cctx);
        break;
      case ControllerKind::kMpc: {
        const auto fw = forecast_window(series, static_cast<std::size_t>(k), tb.horizon_steps);
        MpcResult r = mpc_step(fb, fw, cctx);
        step.cmd = std::move(r.command);
        step.solve_ms = r.diagnostics.solve_ms;
        out.mpc.push_back(r.diagnostics);
        break;
      }
    }
    step.rec = rec;
    step.state = state;
    step.outcome = plant_step(state, step.cmd, rec, pctx);
    state = step.outcome.new_state;
    out.trajectory.push_back(std::move(step));
    if (on_step) on_step(k);
  }
  return out;
}

MetricsRow summarize(ControllerKind kind, const ScenarioConfig& cfg,
                     const Trajectory& traj) {
  MetricsRow r;
  r.controller = kind;
  r.alpha_i = cfg.alpha_i;
  r.alpha_pv = cfg.alpha_pv;
  r.alpha_bat = cfg.alpha_bat;
  r.lrm_cri = lrm_cri(traj);
  r.lrm_o = lrm_o(traj);
  r.trm_h = trm_h(traj, cfg.t_upper_c);
  r.trip_steps = trip_steps(traj);
  r.mean_solve_ms = mean_solve_ms(traj);
  return r;
}

}  // namespace hems
