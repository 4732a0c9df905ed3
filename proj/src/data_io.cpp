// SPDX-License-Identifier: Apache-2.0

#include "hems/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hems {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t b = 0;
    while (b < cell.size() && cell[b] == ' ') ++b;
    out.push_back(cell.substr(b));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError(where + ": not a number: '" + s + "'");
  }
  return v;
}

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int* y, unsigned* m, unsigned* d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  *d = doy - (153 * mp + 2) / 5 + 1;
  *m = mp < 10 ? mp + 3 : mp - 9;
  *y = static_cast<int>(static_cast<std::int64_t>(yoe) + era * 400 + (*m <= 2));
}

// Ordering is checked over the whole file before spacing, so shuffled rows
// report as such rather than as a wrong step.
void check_cadence(const std::vector<std::string>& ts, double step_hours) {
  const std::int64_t step_s = std::llround(step_hours * 3600.0);
  std::vector<std::int64_t> t(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) t[i] = parse_timestamp(ts[i]);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] <= t[i - 1]) {
      throw DataError("non-monotone timestamps at row " + std::to_string(i + 1));
    }
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] - t[i - 1] != step_s) {
      throw DataError("timestamp step at row " + std::to_string(i + 1) +
                      " is not one time step");
    }
  }
}

std::vector<std::string> read_header(std::istream& is, std::string* line) {
  if (!std::getline(is, *line) || split_csv(*line).empty() ||
      split_csv(*line).front().empty()) {
    throw DataError("missing data: file is empty");
  }
  return split_csv(*line);
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

// SplitMix64: portable, so synthetic goldens do not depend on the standard
// library's distributions.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace

std::int64_t parse_timestamp(const std::string& ts) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char t = 0;
  int consumed = 0;
  const int got = std::sscanf(ts.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &t,
                              &h, &mi, &consumed);
  if (got < 6 || (t != 'T' && t != ' ')) {
    throw DataError("bad timestamp '" + ts + "'");
  }
  std::string rest = ts.substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest.back() == 'Z') rest.pop_back();
  if (!rest.empty()) {
    int c2 = 0;
    if (std::sscanf(rest.c_str(), ":%2d%n", &s, &c2) != 1 ||
        static_cast<std::size_t>(c2) != rest.size()) {
      throw DataError("bad timestamp '" + ts + "'");
    }
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 59) {
    throw DataError("bad timestamp '" + ts + "'");
  }
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) *
             86400 +
         h * 3600 + mi * 60 + s;
}

std::string format_timestamp(std::int64_t seconds) {
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, &y, &m, &d);
  char buf[32];
  const int hh = static_cast<int>(rem / 3600), mm = static_cast<int>(rem % 3600 / 60),
            ss = static_cast<int>(rem % 60);
  if (ss == 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d", y, m, d, hh, mm);
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d", y, m, d, hh, mm, ss);
  }
  return buf;
}

WeatherSeries read_weather_csv(std::istream& is, double step_hours) {
  std::string line;
  const auto header = read_header(is, &line);
  const std::size_t c_ts = column_of(header, "timestamp");
  const std::size_t c_ghi = column_of(header, "ghi_kw_m2");
  const std::size_t c_tam = column_of(header, "t_ambient_c");
  const std::size_t c_ws = column_of(header, "wind_m_s");
  WeatherSeries w;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " columns");
    }
    const std::string where = "row " + std::to_string(row);
    WeatherPoint p{parse_number(cells[c_ghi], where), parse_number(cells[c_tam], where),
                   parse_number(cells[c_ws], where)};
    if (p.ghi_kw_m2 < 0.0 || p.ghi_kw_m2 > kMaxGhiKwM2) {
      throw DataError(where + ": ghi_kw_m2 outside [0, 1.5] kW/m^2");
    }
    if (p.wind_m_s < 0.0) throw DataError(where + ": negative wind speed");
    if (p.t_ambient_c < -60.0 || p.t_ambient_c > 60.0) {
      throw DataError(where + ": ambient temperature out of range");
    }
    w.timestamps.push_back(cells[c_ts]);
    w.points.push_back(p);
  }
  if (w.points.empty()) throw DataError("missing data: no weather rows");
  check_cadence(w.timestamps, step_hours);
  return w;
}

DemandSeries read_demand_csv(std::istream& is, int n_circuits, double step_hours) {
  std::string line;
  const auto header = read_header(is, &line);
  const std::size_t c_ts = column_of(header, "timestamp");
  if (static_cast<int>(header.size()) - 1 != n_circuits) {
    throw DataError("demand file has " + std::to_string(header.size() - 1) +
                    " circuit columns, expected " + std::to_string(n_circuits));
  }
  std::vector<std::size_t> cols;
  for (int i = 1; i <= n_circuits; ++i) {
    cols.push_back(column_of(header, "p" + std::to_string(i) + "_kwh"));
  }
  DemandSeries d;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    const std::string where = "row " + std::to_string(row);
    if (cells.size() != header.size()) {
      throw DataError(where + ": expected " + std::to_string(header.size()) +
                      " columns");
    }
    std::vector<double> v;
    for (std::size_t c : cols) {
      const double e = parse_number(cells[c], where);
      if (e < 0.0) throw DataError(where + ": negative demand");
      v.push_back(e);
    }
    d.timestamps.push_back(cells[c_ts]);
    d.circuits_kwh.push_back(std::move(v));
  }
  if (d.circuits_kwh.empty()) throw DataError("missing data: no demand rows");
  check_cadence(d.timestamps, step_hours);
  return d;
}

WeatherSeries load_weather_csv(const std::string& path, double step_hours) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open weather file '" + path + "'");
  return read_weather_csv(f, step_hours);
}

DemandSeries load_demand_csv(const std::string& path, int n_circuits,
                             double step_hours) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open demand file '" + path + "'");
  return read_demand_csv(f, n_circuits, step_hours);
}

void write_weather_csv(std::ostream& os, const WeatherSeries& w) {
  os << "timestamp,ghi_kw_m2,t_ambient_c,wind_m_s\n";
  for (std::size_t i = 0; i < w.points.size(); ++i) {
    const auto& p = w.points[i];
    os << w.timestamps[i] << ',' << fmt(p.ghi_kw_m2) << ',' << fmt(p.t_ambient_c)
       << ',' << fmt(p.wind_m_s) << '\n';
  }
}

void write_demand_csv(std::ostream& os, const DemandSeries& d) {
  const std::size_t n = d.circuits_kwh.empty() ? 0 : d.circuits_kwh.front().size();
  os << "timestamp";
  for (std::size_t i = 1; i <= n; ++i) os << ",p" << i << "_kwh";
  os << '\n';
  for (std::size_t k = 0; k < d.circuits_kwh.size(); ++k) {
    os << d.timestamps[k];
    for (double e : d.circuits_kwh[k]) os << ',' << fmt(e);
    os << '\n';
  }
}

std::vector<ExogenousRecord> merge_series(const WeatherSeries& w,
                                          const DemandSeries& d) {
  if (w.points.size() != d.circuits_kwh.size()) {
    throw DataError("weather has " + std::to_string(w.points.size()) +
                    " rows but demand has " + std::to_string(d.circuits_kwh.size()));
  }
  std::vector<ExogenousRecord> out;
  out.reserve(w.points.size());
  for (std::size_t k = 0; k < w.points.size(); ++k) {
    if (parse_timestamp(w.timestamps[k]) != parse_timestamp(d.timestamps[k])) {
      throw DataError("weather and demand timestamps differ at row " +
                      std::to_string(k + 2));
    }
    const auto& p = w.points[k];
    out.push_back({p.ghi_kw_m2, p.t_ambient_c, p.wind_m_s, d.circuits_kwh[k]});
  }
  return out;
}

std::vector<ExogenousRecord> forecast_window(std::span<const ExogenousRecord> series,
                                             std::size_t start, int n) {
  std::vector<ExogenousRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const std::size_t i = start + static_cast<std::size_t>(k);
    if (i < series.size()) {
      out.push_back(series[i]);
      continue;
    }
    ExogenousRecord pad;
    if (!series.empty()) {
      pad.t_ambient_c = series.back().t_ambient_c;
      pad.circuit_demand_kwh.assign(series.back().circuit_demand_kwh.size(), 0.0);
    }
    out.push_back(std::move(pad));
  }
  return out;
}

SyntheticScenario synth_scenario(std::uint64_t seed, int days, double step_hours,
                                 int n_circuits) {
  if (days < 1) throw std::invalid_argument("days must be >= 1");
  if (n_circuits < 1) throw std::invalid_argument("n_circuits must be >= 1");
  const int steps_per_day = static_cast<int>(std::lround(24.0 / step_hours));
  const std::int64_t start = parse_timestamp("2017-09-11T00:00");
  const std::int64_t step_s = std::llround(step_hours * 3600.0);
  constexpr double kPi = std::numbers::pi;

  SplitMix rng(seed);
  SyntheticScenario out;
  for (int day = 0; day < days; ++day) {
    const double attenuation = 0.6 + 0.4 * rng.uniform();
    const double amplitude = 4.5 + 1.5 * rng.uniform();
    for (int s = 0; s < steps_per_day; ++s) {
      const std::int64_t k = static_cast<std::int64_t>(day) * steps_per_day + s;
      const double hour = s * step_hours;
      const std::string ts = format_timestamp(start + k * step_s);

      WeatherPoint p;
      const double sun = std::sin(kPi * (hour - 6.0) / 12.0);
      const double cloud = rng.chance(0.3) ? 1.0 - 0.5 * rng.uniform() : 1.0;
      p.ghi_kw_m2 = (hour > 6.0 && hour < 18.0)
                        ? std::min(1.0, attenuation * std::max(0.0, sun) * cloud)
                        : 0.0;
      p.t_ambient_c = 30.0 + amplitude * std::sin(2.0 * kPi * (hour - 9.0) / 24.0);
      p.wind_m_s = 1.0 + 3.0 * rng.uniform();
      out.weather.timestamps.push_back(ts);
      out.weather.points.push_back(p);

      const bool evening = hour >= 18.0 && hour < 23.0;
      const bool awake = hour >= 7.0 && hour < 23.0;
      const bool meal = (hour >= 7.0 && hour < 8.0) || (hour >= 12.0 && hour < 13.0) ||
                        (hour >= 18.0 && hour < 20.0);
      // Average power per circuit in kW over the step.
      const double profile[8] = {
          0.25 + (rng.chance(0.4) ? 0.15 : 0.0),               // critical
          0.05 + (evening ? 0.30 : 0.0),                       // lighting, comms
          meal && rng.chance(0.5) ? 2.0 : 0.0,                 // cooking
          rng.chance(0.05) ? 1.0 : 0.0,                        // water pump
          awake && rng.chance(0.03) ? 1.5 : 0.0,               // laundry
          awake && rng.chance(0.02) ? 1.2 : 0.0,               // dishwasher
          hour >= 10.0 && hour < 23.0 ? 0.1 + 0.1 * rng.uniform() : 0.0,  // media
          0.05 + (rng.chance(0.1) ? 0.5 : 0.0),                // plug loads
      };
      std::vector<double> e(static_cast<std::size_t>(n_circuits));
      for (int i = 0; i < n_circuits; ++i) e[i] = profile[i % 8] * step_hours;
      out.demand.timestamps.push_back(ts);
      out.demand.circuits_kwh.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace hems
