// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "hems/models.hpp"

using namespace hems;

namespace {

DerivedParams full_size() {
  ScenarioConfig cfg;
  cfg.alpha_bat = 1.0;
  cfg.alpha_pv = 1.0;
  return derive(cfg, TimeBase{});
}

ExogenousRecord sunny(double ghi, double t_am, double wind) {
  return ExogenousRecord{ghi, t_am, wind, std::vector<double>(8, 0.0)};
}

}  // namespace

TEST_CASE("pv golden value at 1 kW/m2, 25 C, 1 m/s") {
  const PvParams pv;
  const TimeBase tb;
  // Module runs 1000/(25 + 6.84) K above ambient; derate 0.35 %/K.
  const double rise = 1000.0 / (25.0 + 6.84 * 1.0);
  const double expected = 10.075 * (1.0 - 0.0035 * rise) / 6.0;
  const double got = pv_available_energy(sunny(1.0, 25.0, 1.0), 1.0, 10.075, pv, tb);
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  CHECK(got == doctest::Approx(1.494584903685092).epsilon(1e-12));
  CHECK(pv_module_temperature(1.0, 25.0, 1.0, pv) ==
        doctest::Approx(25.0 + rise).epsilon(1e-12));
}

TEST_CASE("pv output is zero without irradiance") {
  const PvParams pv;
  const TimeBase tb;
  for (double t : {-10.0, 25.0, 45.0}) {
    CHECK(pv_available_energy(sunny(0.0, t, 3.0), 1.0, 10.075, pv, tb) == 0.0);
  }
}

TEST_CASE("pv output scales exactly with the array factor") {
  const PvParams pv;
  const TimeBase tb;
  const auto rec = sunny(0.7, 33.0, 2.5);
  const double one = pv_available_energy(rec, 0.5, 10.075, pv, tb);
  const double two = pv_available_energy(rec, 1.0, 10.075, pv, tb);
  CHECK(two == doctest::Approx(2.0 * one).epsilon(1e-14));
  CHECK(one > 0.0);
}

TEST_CASE("pv output is monotone in irradiance and bounded by nameplate") {
  const PvParams pv;
  const TimeBase tb;
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double e =
        pv_available_energy(sunny(i / 100.0, 30.0, 2.0), 1.0, 10.075, pv, tb);
    CHECK(e >= prev);
    CHECK(e <= 10.075 * tb.step_hours + 1e-12);
    prev = e;
  }
}

TEST_CASE("thermal step examples") {
  const ThermalParams p = default_thermal_params(1.0 / 6.0);
  CHECK(thermal_step(25.0, false, 25.0, p) == doctest::Approx(25.0).epsilon(1e-14));
  const double warm = thermal_step(23.0, false, 35.0, p);
  CHECK(warm > 23.0);
  CHECK(warm < 35.0);
  CHECK(thermal_step(25.0, true, 25.0, p) < 25.0);
}

TEST_CASE("thermal step superposes exactly") {
  const ThermalParams p = default_thermal_params(1.0 / 6.0);
  const double base = thermal_step(0.0, false, 0.0, p);
  CHECK(base == 0.0);
  const double t_only = thermal_step(24.0, false, 0.0, p);
  const double am_only = thermal_step(0.0, false, 33.0, p);
  const double ac_only = thermal_step(0.0, true, 0.0, p);
  CHECK(thermal_step(24.0, true, 33.0, p) ==
        doctest::Approx(t_only + am_only + ac_only).epsilon(1e-14));
}

TEST_CASE("loss-free battery step examples") {
  const DerivedParams dp = full_size();
  CHECK(battery_step_model(6.75, 0.0, dp) == 6.75);
  CHECK(battery_step_model(6.75, 1.0, dp) == doctest::Approx(5.9167).epsilon(1e-4));
  CHECK(battery_step_model(6.75, -1.0, dp) == doctest::Approx(7.5833).epsilon(1e-4));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> g(-1.0, 1.0), e(0.0, 13.5);
  for (int i = 0; i < 1000; ++i) {
    const double e0 = e(rng);
    const double gamma = g(rng);
    CHECK(battery_step_model(battery_step_model(e0, gamma, dp), -gamma, dp) ==
          doctest::Approx(e0).epsilon(1e-12));
  }
}

TEST_CASE("lossy battery step examples") {
  const DerivedParams dp = full_size();
  const BatteryEfficiency eff{0.95, 0.95};
  const auto c = battery_step_plant(5.0, true, false, 0.8, eff, dp);
  CHECK(c.e_bat_kwh == doctest::Approx(5.76).epsilon(1e-12));
  CHECK(c.bus_kwh == doctest::Approx(0.8));
  const auto d = battery_step_plant(5.0, false, true, 0.8, eff, dp);
  CHECK(d.e_bat_kwh == doctest::Approx(5.0 - 0.8 / 0.95).epsilon(1e-12));
  CHECK(d.e_bat_kwh == doctest::Approx(4.1579).epsilon(1e-4));
  const auto empty = battery_step_plant(dp.e_bat_floor_kwh, false, true, 0.5, eff, dp);
  CHECK(empty.e_bat_kwh == dp.e_bat_floor_kwh);
  CHECK(empty.bus_kwh == 0.0);
  const auto idle = battery_step_plant(5.0, false, false, 0.5, eff, dp);
  CHECK(idle.e_bat_kwh == 5.0);
  CHECK(idle.bus_kwh == 0.0);
}

TEST_CASE("lossy battery bookkeeping closes and respects bounds") {
  const DerivedParams dp = full_size();
  const BatteryEfficiency eff{0.9, 0.93};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> e(0.0, dp.e_bat_cap_kwh),
      q(0.0, dp.e_bat_rate_kwh);
  for (int i = 0; i < 20000; ++i) {
    const double e0 = e(rng);
    const double req = q(rng);
    const bool charge = i % 2 == 0;
    const auto t = battery_step_plant(e0, charge, !charge, req, eff, dp);
    CHECK(t.e_bat_kwh >= dp.e_bat_floor_kwh);
    CHECK(t.e_bat_kwh <= dp.e_bat_cap_kwh);
    CHECK(t.bus_kwh <= req + 1e-15);
    const double delta = t.e_bat_kwh - e0;
    const double expected = charge ? eff.charge * t.bus_kwh : -t.bus_kwh / eff.discharge;
    CHECK(std::abs(delta - expected) <= 1e-9);
  }
}
