// SPDX-License-Identifier: Apache-2.0
//
// Weather and circuit-demand ingestion, perfect-foresight forecast windows,
// and a seeded synthetic scenario generator.
//
// Weather CSV:  timestamp,ghi_kw_m2,t_ambient_c,wind_m_s
// Demand CSV:   timestamp,p1_kwh,...,pN_kwh   (p1 = critical, descending)
// Timestamps are ISO-8601 (YYYY-MM-DDTHH:MM[:SS]) and must advance by
// exactly one step.

#ifndef HEMS_DATA_IO_HPP_
#define HEMS_DATA_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hems/domain.hpp"

namespace hems {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WeatherPoint {
  double ghi_kw_m2 = 0.0;
  double t_ambient_c = 0.0;
  double wind_m_s = 0.0;
  bool operator==(const WeatherPoint&) const = default;
};

struct WeatherSeries {
  std::vector<std::string> timestamps;
  std::vector<WeatherPoint> points;
  bool operator==(const WeatherSeries&) const = default;
};

struct DemandSeries {
  std::vector<std::string> timestamps;
  std::vector<std::vector<double>> circuits_kwh;  // [step][circuit]
  bool operator==(const DemandSeries&) const = default;
};

inline constexpr double kMaxGhiKwM2 = 1.5;

WeatherSeries load_weather_csv(const std::string& path, double step_hours);
WeatherSeries read_weather_csv(std::istream& is, double step_hours);
DemandSeries load_demand_csv(const std::string& path, int n_circuits,
                             double step_hours);
DemandSeries read_demand_csv(std::istream& is, int n_circuits, double step_hours);

void write_weather_csv(std::ostream& os, const WeatherSeries& w);
void write_demand_csv(std::ostream& os, const DemandSeries& d);

// Seconds since 1970-01-01T00:00:00 for an ISO-8601 timestamp.
std::int64_t parse_timestamp(const std::string& ts);
std::string format_timestamp(std::int64_t seconds);

// Pairs weather and demand step by step; lengths and timestamps must agree.
std::vector<ExogenousRecord> merge_series(const WeatherSeries& w,
                                          const DemandSeries& d);

// Records [start, start+n); past the end, records carry zero irradiance,
// wind and demand, and hold the last real ambient temperature.
std::vector<ExogenousRecord> forecast_window(std::span<const ExogenousRecord> series,
                                             std::size_t start, int n);

struct SyntheticScenario {
  WeatherSeries weather;
  DemandSeries demand;
};

// Deterministic per seed. Weather: clear-sky half-sine irradiance between
// 06:00 and 18:00 scaled by a daily attenuation in [0.6, 1.0] and passing
// clouds, capped at 1.0 kW/m^2; ambient 30 degC +/- a daily amplitude in
// [4.5, 6] peaking at 15:00 (so within 24-36 degC); wind 1-4 m/s. Demand:
// eight circuit profiles, the first an always-on critical floor with
// compressor cycling, the others appliance pulses on diurnal schedules.
SyntheticScenario synth_scenario(std::uint64_t seed, int days,
                                 double step_hours = 1.0 / 6.0,
                                 int n_circuits = 8);

}  // namespace hems

#endif  // HEMS_DATA_IO_HPP_
