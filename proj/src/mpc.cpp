// SPDX-License-Identifier: Apache-2.0

#include "hems/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hems/models.hpp"

namespace hems {

using milp::Sense;
using milp::Term;

milp::MilpProblem build_milp(const Feedback& fb, std::span<const ExogenousRecord> fw,
                             const ControllerContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& dp = ctx.dp;
  const auto& th = cfg.thermal;
  const int n = ctx.tb.horizon_steps;
  if (static_cast<int>(fw.size()) != n) {
    throw std::invalid_argument("forecast window has " + std::to_string(fw.size()) +
                                " records, horizon is " + std::to_string(n));
  }
  const MpcLayout lay(n);
  const auto& lam = cfg.lambdas;
  const double thermal_gain = th.b_coef * th.q_ac;

  milp::MilpProblem p;
  p.objective.assign(lay.num_cols(), 0.0);
  p.lower.assign(lay.num_cols(), 0.0);
  p.upper.assign(lay.num_cols(), 0.0);
  p.is_binary.assign(lay.num_cols(), false);

  // Warmest reachable trajectory (AC off throughout). The lower comfort bound
  // is relaxed to it wherever the house cannot stay above t_lower.
  double t_warmest = fb.t_house_c;

  for (int k = 0; k < n; ++k) {
    const ExogenousRecord& rec = fw[k];
    const double e_pv = pv_available_energy(rec, cfg.alpha_pv, cfg.pv_base_kw,
                                            cfg.pv, ctx.tb);
    const double e_l = rec.total_demand_kwh();
    const double e_cri = rec.critical_demand_kwh();
    const double weight = static_cast<double>(n - k);
    t_warmest = th.a_coef * t_warmest + th.d_coef * rec.t_ambient_c;

    auto set = [&](MpcLayout::Field f, double cost, double lo, double hi) {
      const int c = lay.col(k, f);
      p.objective[c] = cost;
      p.lower[c] = lo;
      p.upper[c] = hi;
      p.is_binary[c] = MpcLayout::is_binary(f);
    };
    set(MpcLayout::kTHouse, 0.0, std::min(cfg.t_lower_c, t_warmest), milp::kInf);
    set(MpcLayout::kEBat, -lam.battery_level, dp.e_bat_floor_kwh, dp.e_bat_cap_kwh);
    set(MpcLayout::kGamma, 0.0, cfg.gamma_lower, cfg.gamma_upper);
    set(MpcLayout::kAcOn, 0.0, 0.0, 1.0);
    set(MpcLayout::kLoad, -lam.load_served * weight, 0.0, e_l);
    set(MpcLayout::kPv, 0.0, 0.0, e_pv);
    set(MpcLayout::kTempSlack, lam.temperature_slack * weight, 0.0, milp::kInf);
    set(MpcLayout::kCritSlack, lam.critical_slack * weight, 0.0, e_cri);
    set(MpcLayout::kFlipOn, 0.0, 0.0, 1.0);
    set(MpcLayout::kFlipOff, 0.0, 0.0, 1.0);
    set(MpcLayout::kDischargeFlag, lam.discharge_flag, 0.0, 1.0);

    const int t = lay.col(k, MpcLayout::kTHouse);
    const int e = lay.col(k, MpcLayout::kEBat);
    const int g = lay.col(k, MpcLayout::kGamma);
    const int u = lay.col(k, MpcLayout::kAcOn);
    const int l = lay.col(k, MpcLayout::kLoad);
    const int pv = lay.col(k, MpcLayout::kPv);
    const int zh = lay.col(k, MpcLayout::kTempSlack);
    const int zl = lay.col(k, MpcLayout::kCritSlack);
    const int fon = lay.col(k, MpcLayout::kFlipOn);
    const int foff = lay.col(k, MpcLayout::kFlipOff);
    const int theta = lay.col(k, MpcLayout::kDischargeFlag);

    // House thermal dynamics.
    if (k == 0) {
      p.add_row({{t, 1.0}, {u, -thermal_gain}}, Sense::kEqual,
                th.a_coef * fb.t_house_c + th.d_coef * rec.t_ambient_c);
    } else {
      p.add_row({{t, 1.0}, {lay.col(k - 1, MpcLayout::kTHouse), -th.a_coef},
                 {u, -thermal_gain}},
                Sense::kEqual, th.d_coef * rec.t_ambient_c);
    }
    // Loss-free battery dynamics, gamma > 0 discharging.
    if (k == 0) {
      p.add_row({{e, 1.0}, {g, dp.e_bat_rate_kwh}}, Sense::kEqual, fb.e_bat_kwh);
    } else {
      p.add_row({{e, 1.0}, {lay.col(k - 1, MpcLayout::kEBat), -1.0},
                 {g, dp.e_bat_rate_kwh}},
                Sense::kEqual, 0.0);
    }
    // Energy balance.
    p.add_row({{u, dp.e_ac_kwh}, {g, -dp.e_bat_rate_kwh}, {l, 1.0}, {pv, -1.0}},
              Sense::kEqual, 0.0);
    // AC on/off telescoping, anchored at the AC state before the window:
    // u(k) = ac_prev + sum(f_on) - sum(f_off), written step to step.
    if (k == 0) {
      p.add_row({{u, 1.0}, {fon, -1.0}, {foff, 1.0}}, Sense::kEqual,
                fb.ac_prev ? 1.0 : 0.0);
    } else {
      p.add_row({{u, 1.0}, {lay.col(k - 1, MpcLayout::kAcOn), -1.0}, {fon, -1.0},
                 {foff, 1.0}},
                Sense::kEqual, 0.0);
    }
    // Startup power. With binary f_on the row is equivalent to
    // (P_start - P_pv) f_on <= P_surge theta, whose relaxation is tighter; a
    // startup the surge cannot cover fixes f_on to 0.
    const double p_pv_kw = e_pv / ctx.tb.step_hours;
    const double excess_kw = dp.p_ac_startup_kw - p_pv_kw;
    if (excess_kw <= 0.0) {
      p.add_row({{fon, dp.p_ac_startup_kw}, {theta, -dp.p_bat_surge_kw}},
                Sense::kLessEqual, p_pv_kw);
    } else {
      if (excess_kw > dp.p_bat_surge_kw) p.upper[fon] = 0.0;
      p.add_row({{fon, excess_kw}, {theta, -dp.p_bat_surge_kw}}, Sense::kLessEqual,
                0.0);
    }
    // Upper comfort bound with slack.
    p.add_row({{t, 1.0}, {zh, -1.0}}, Sense::kLessEqual, cfg.t_upper_c);
    // Critical load floor with slack.
    p.add_row({{l, 1.0}, {zl, 1.0}}, Sense::kGreaterEqual, e_cri);
    // Turn-on and turn-off are exclusive.
    p.add_row({{fon, 1.0}, {foff, 1.0}}, Sense::kLessEqual, 1.0);
    // Discharge flag dominates gamma.
    p.add_row({{theta, 1.0}, {g, -1.0}}, Sense::kGreaterEqual, 0.0);

    // Valid inequalities. With theta = 0 the house runs on PV alone, so the
    // critical shortfall is at least E_cri - E_pv and the load plus AC energy
    // is at most E_pv. The big-M implied by the rows above is the battery
    // rate; these use the smaller exact coefficient.
    const double rate = dp.e_bat_rate_kwh * cfg.gamma_upper;
    const double cri_gap = e_cri - e_pv;
    if (cri_gap > 0.0 && cri_gap < rate) {
      p.add_row({{zl, 1.0}, {theta, cri_gap}}, Sense::kGreaterEqual, cri_gap);
    }
    // The AC alone outruns PV plus the full battery rate: it cannot run.
    if (dp.e_ac_kwh > e_pv + rate) {
      p.upper[u] = 0.0;
    } else if (dp.e_ac_kwh > e_pv) {
      // Running the AC needs the battery.
      p.add_row({{theta, 1.0}, {u, -1.0}}, Sense::kGreaterEqual, 0.0);
    }
    const double use_gap = e_l + dp.e_ac_kwh - e_pv;
    if (use_gap > 0.0 && use_gap < rate) {
      p.add_row({{l, 1.0}, {u, dp.e_ac_kwh}, {theta, -use_gap}}, Sense::kLessEqual,
                e_pv);
    }
  }
  return p;
}

MpcPlanStep extract_first_step(const MpcLayout& layout,
                               const std::vector<double>& x) {
  MpcPlanStep s;
  s.gamma = x[layout.col(0, MpcLayout::kGamma)];
  s.ac_on = x[layout.col(0, MpcLayout::kAcOn)] > 0.5;
  s.load_kwh = std::max(0.0, x[layout.col(0, MpcLayout::kLoad)]);
  s.flip_on = x[layout.col(0, MpcLayout::kFlipOn)] > 0.5;
  s.discharge_flag = x[layout.col(0, MpcLayout::kDischargeFlag)] > 0.5;
  return s;
}

ControlCommand command_from_plan(const MpcPlanStep& plan, const Feedback& fb,
                                 const ExogenousRecord& now) {
  constexpr double kGammaDeadband = 1e-7;
  constexpr double kBudgetSlack = 1e-9;
  ControlCommand cmd;
  cmd.discharge = plan.gamma > kGammaDeadband;
  cmd.charge = plan.gamma < -kGammaDeadband;
  cmd.ac_on = plan.ac_on;
  if (plan.ac_on && !fb.ac_prev && plan.discharge_flag && !cmd.charge &&
      !cmd.discharge) {
    cmd.discharge = true;
  }
  cmd.circuits_on = priority_stack(plan.load_kwh + kBudgetSlack, now.circuit_demand_kwh);
  return cmd;
}

MpcResult mpc_step(const Feedback& fb, std::span<const ExogenousRecord> fw,
                   const ControllerContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const milp::MilpProblem p = build_milp(fb, fw, ctx);
  milp::MilpOptions opts;
  opts.mip_gap = ctx.cfg.mip_gap;
  opts.time_limit_s = ctx.cfg.time_limit_s;
  opts.node_limit = static_cast<long>(ctx.cfg.mip_node_limit);
  const milp::MilpSolution sol = milp::solve_milp(p, opts);
  MpcResult out;
  auto& diag = out.diagnostics;
  diag.status = sol.status;
  diag.nodes = sol.nodes;
  if (sol.has_solution()) {
    const MpcLayout lay(ctx.tb.horizon_steps);
    diag.objective = sol.objective;
    diag.gap = sol.gap;
    diag.plan = extract_first_step(lay, sol.columns);
    out.command = command_from_plan(diag.plan, fb, fw.front());
  } else {
    diag.fallback = true;
    out.command = rulebased_step(fb, fw.front(), ctx);
  }
  diag.solve_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace hems
