// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "hems/models.hpp"
#include "hems/plant.hpp"

using namespace hems;

namespace {

struct Fixture {
  ScenarioConfig cfg;
  TimeBase tb;
  DerivedParams dp;
  explicit Fixture(double alpha_bat = 1.0) {
    cfg.alpha_bat = alpha_bat;
    dp = derive(cfg, tb);
  }
  PlantContext ctx() const { return {cfg, dp, tb}; }
};

// Irradiance that yields `kwh` of PV this step at 25 C and 1 m/s.
double ghi_for(const Fixture& f, double kwh) {
  // Solve E(ghi) = kwh by bisection on the monotone PV model.
  double lo = 0.0;
  double hi = 1.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ExogenousRecord r{mid, 25.0, 1.0, {}};
    if (pv_available_energy(r, f.cfg.alpha_pv, f.cfg.pv_base_kw, f.cfg.pv, f.tb) < kwh) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ExogenousRecord record(double ghi, std::vector<double> demand) {
  return ExogenousRecord{ghi, 25.0, 1.0, std::move(demand)};
}

ControlCommand command(bool charge, bool discharge, bool ac, std::vector<bool> on) {
  ControlCommand c;
  c.charge = charge;
  c.discharge = discharge;
  c.ac_on = ac;
  c.circuits_on = std::move(on);
  return c;
}

}  // namespace

TEST_CASE("surplus PV charges at the rate and the rest is curtailed") {
  Fixture f;
  f.cfg.alpha_pv = 1.0;
  f.dp = derive(f.cfg, f.tb);
  const auto rec = record(ghi_for(f, 1.0), std::vector<double>(8, 0.0));
  const PlantState s{24.0, 5.0, false};
  const auto out = plant_step(s, command(true, false, false, std::vector<bool>(8, false)),
                              rec, f.ctx());
  CHECK(out.e_pv_avail_kwh == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out.bat_delta_kwh == doctest::Approx(0.95 * 5.0 / 6.0).epsilon(1e-9));
  CHECK(out.e_pv_curtailed_kwh == doctest::Approx(1.0 - 5.0 / 6.0).epsilon(1e-8));
  CHECK(out.new_state.e_bat_kwh > s.e_bat_kwh);
  CHECK_FALSE(out.tripped);
}

TEST_CASE("AC startup with no power source trips") {
  Fixture f;
  const std::vector<double> dem{0.1, 0.05, 0, 0, 0, 0, 0, 0.2};
  const PlantState s{27.0, 5.0, false};
  const auto out = plant_step(
      s, command(false, false, true, std::vector<bool>(8, true)), record(0.0, dem),
      f.ctx());
  CHECK(out.tripped);
  CHECK(out.served_total_kwh() == 0.0);
  CHECK_FALSE(out.ac_served);
  CHECK(out.new_state.e_bat_kwh == s.e_bat_kwh);
  CHECK_FALSE(out.new_state.ac_was_on);
  CHECK(out.new_state.t_house_c ==
        doctest::Approx(thermal_step(27.0, false, 25.0, f.cfg.thermal)));
}

TEST_CASE("battery surge covers a startup while discharging") {
  Fixture f;  // surge 7 kW; startup 8.4 kW needs 1.4 kW of PV
  const std::vector<double> dem(8, 0.0);
  const PlantState s{27.0, 10.0, false};
  const auto cmd = command(false, true, true, std::vector<bool>(8, false));
  CHECK(plant_step(s, cmd, record(0.0, dem), f.ctx()).tripped);
  const auto out = plant_step(s, cmd, record(ghi_for(f, 0.3), dem), f.ctx());
  CHECK_FALSE(out.tripped);
  CHECK(out.ac_served);
  CHECK(out.new_state.ac_was_on);
  // An empty battery offers no surge.
  const PlantState empty{27.0, 0.0, false};
  CHECK(plant_step(empty, cmd, record(ghi_for(f, 0.3), dem), f.ctx()).tripped);
}

TEST_CASE("a running AC skips the startup check") {
  Fixture f;
  const std::vector<double> dem(8, 0.0);
  const PlantState s{27.0, 10.0, true};
  const auto out = plant_step(
      s, command(false, true, true, std::vector<bool>(8, false)), record(0.0, dem),
      f.ctx());
  CHECK_FALSE(out.tripped);
  CHECK(out.ac_served);
  CHECK(out.ac_energy_kwh == doctest::Approx(f.dp.e_ac_kwh));
  CHECK(out.battery_bus_kwh == doctest::Approx(f.dp.e_ac_kwh));
}

TEST_CASE("shedding drops the AC first, then the lowest priorities") {
  Fixture f;
  // 0.6 kWh of PV; AC 0.5 + circuits 0.3 + 0.2 + 0.2 requested, no battery.
  const std::vector<double> dem{0.3, 0.2, 0.2, 0, 0, 0, 0, 0};
  const PlantState s{27.0, 0.0, true};
  const auto out = plant_step(
      s, command(false, false, true, std::vector<bool>(8, true)),
      record(ghi_for(f, 0.6), dem), f.ctx());
  CHECK_FALSE(out.ac_served);
  CHECK(out.served_circuit_kwh[0] == 0.3);
  CHECK(out.served_circuit_kwh[1] == 0.2);
  CHECK(out.served_circuit_kwh[2] == 0.0);
  CHECK(out.e_pv_used_kwh == doctest::Approx(0.5));
}

TEST_CASE("idle plant evolves by thermal dynamics only") {
  Fixture f;
  const PlantState s{24.3, 7.0, false};
  const auto out = plant_step(
      s, command(false, false, false, std::vector<bool>(8, false)),
      record(0.0, std::vector<double>(8, 0.0)), f.ctx());
  CHECK(out.new_state.e_bat_kwh == 7.0);
  CHECK(out.new_state.t_house_c == thermal_step(24.3, false, 25.0, f.cfg.thermal));
  CHECK(sensors(out.new_state).t_house_c == out.new_state.t_house_c);
  CHECK(sensors(PlantState{25.0, 6.75, false}).e_bat_kwh == 6.75);
}

TEST_CASE("conservation and bounds under random commands") {
  Fixture f(0.5);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PlantState s{24.0, f.dp.e_bat_cap_kwh * 0.5, false};
  for (int k = 0; k < 20000; ++k) {
    std::vector<double> dem(8);
    for (double& d : dem) d = u(rng) < 0.4 ? 0.0 : 0.4 * u(rng);
    const auto rec = ExogenousRecord{1.2 * u(rng), 20.0 + 15.0 * u(rng),
                                     4.0 * u(rng), dem};
    std::vector<bool> on(8);
    for (std::size_t i = 0; i < on.size(); ++i) on[i] = u(rng) < 0.7;
    const int mode = static_cast<int>(u(rng) * 3.0);
    const auto out = plant_step(
        s, command(mode == 1, mode == 2, u(rng) < 0.5, on), rec, f.ctx());
    CHECK(out.new_state.e_bat_kwh >= f.dp.e_bat_floor_kwh);
    CHECK(out.new_state.e_bat_kwh <= f.dp.e_bat_cap_kwh);
    CHECK(out.e_pv_used_kwh <= out.e_pv_avail_kwh + 1e-12);
    if (out.tripped) {
      CHECK(out.served_total_kwh() == 0.0);
      CHECK(out.bat_delta_kwh == 0.0);
    } else {
      const double residual = out.e_pv_used_kwh + out.battery_bus_kwh -
                              out.ac_energy_kwh - out.served_total_kwh();
      CHECK(std::abs(residual) <= 1e-9);
    }
    for (std::size_t i = 0; i < dem.size(); ++i) {
      const double e = out.served_circuit_kwh[i];
      CHECK((e == 0.0 || e == dem[i]));
    }
    s = out.new_state;
  }
}
