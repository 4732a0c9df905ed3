// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hems/data_io.hpp"

using namespace hems;

namespace {

constexpr double kStep = 1.0 / 6.0;

std::string weather_csv(int rows) {
  std::ostringstream os;
  os << "timestamp,ghi_kw_m2,t_ambient_c,wind_m_s\n";
  for (int k = 0; k < rows; ++k) {
    os << format_timestamp(1505088000 + 600 * k) << "," << (k % 7) * 0.1 << ","
       << 28 + k % 5 << ",2\n";
  }
  return os.str();
}

std::string demand_csv(int rows, int cols, double value = 0.1) {
  std::ostringstream os;
  os << "timestamp";
  for (int i = 1; i <= cols; ++i) os << ",p" << i << "_kwh";
  os << "\n";
  for (int k = 0; k < rows; ++k) {
    os << format_timestamp(1505088000 + 600 * k);
    for (int i = 0; i < cols; ++i) os << "," << value;
    os << "\n";
  }
  return os.str();
}

}  // namespace

TEST_CASE("timestamps parse and format") {
  CHECK(parse_timestamp("1970-01-01T00:00") == 0);
  CHECK(parse_timestamp("2017-09-11T00:00") == 1505088000);
  CHECK(parse_timestamp("2017-09-11T00:10:00") == 1505088600);
  CHECK(parse_timestamp("2017-09-11T00:10:00Z") == 1505088600);
  CHECK(parse_timestamp("2017-09-11 00:10") == 1505088600);
  CHECK(format_timestamp(1505088600) == "2017-09-11T00:10");
  CHECK(format_timestamp(1505088605) == "2017-09-11T00:10:05");
  CHECK_THROWS_AS(parse_timestamp("yesterday"), DataError);
  CHECK_THROWS_AS(parse_timestamp("2017-09-11T00:10junk"), DataError);
}

TEST_CASE("a 7-day file at 10-minute cadence yields 1008 records") {
  const auto dir = std::filesystem::temp_directory_path() / "hems_test_data_io";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "w.csv") << weather_csv(1008);
    std::ofstream(dir / "d.csv") << demand_csv(1008, 8);
  }
  const auto w = load_weather_csv((dir / "w.csv").string(), kStep);
  const auto d = load_demand_csv((dir / "d.csv").string(), 8, kStep);
  CHECK(w.points.size() == 1008);
  CHECK(d.circuits_kwh.size() == 1008);
  CHECK(merge_series(w, d).size() == 1008);
  CHECK_THROWS_AS(load_weather_csv((dir / "absent.csv").string(), kStep), DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("weather validation errors") {
  auto read = [](const std::string& text) {
    std::istringstream is(text);
    return read_weather_csv(is, kStep);
  };
  CHECK_THROWS_WITH_AS(read(""), doctest::Contains("missing data"), DataError);
  CHECK_THROWS_WITH_AS(read("timestamp,ghi_kw_m2,t_ambient_c,wind_m_s\n"),
                       doctest::Contains("missing data"), DataError);
  CHECK_THROWS_WITH_AS(read("timestamp,ghi_kw_m2,t_ambient_c\n2017-09-11T00:00,0,30\n"),
                       doctest::Contains("missing column"), DataError);
  // Swap two rows.
  std::string text = weather_csv(5);
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::swap(lines[2], lines[3]);
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";
  CHECK_THROWS_WITH_AS(read(shuffled), doctest::Contains("non-monotone"), DataError);
  // Gap of two steps.
  CHECK_THROWS_AS(read("timestamp,ghi_kw_m2,t_ambient_c,wind_m_s\n"
                       "2017-09-11T00:00,0,30,1\n2017-09-11T00:20,0,30,1\n"),
                  DataError);
  CHECK_THROWS_AS(read("timestamp,ghi_kw_m2,t_ambient_c,wind_m_s\n"
                       "2017-09-11T00:00,1.6,30,1\n"),
                  DataError);
  CHECK_THROWS_AS(read("timestamp,ghi_kw_m2,t_ambient_c,wind_m_s\n"
                       "2017-09-11T00:00,0.5,30,-1\n"),
                  DataError);
  CHECK_THROWS_AS(read("timestamp,ghi_kw_m2,t_ambient_c,wind_m_s\n"
                       "2017-09-11T00:00,abc,30,1\n"),
                  DataError);
  // Columns are located by name.
  const auto w = read("wind_m_s,timestamp,t_ambient_c,ghi_kw_m2\n3,2017-09-11T00:00,31,0.4\n");
  CHECK(w.points[0] == WeatherPoint{0.4, 31.0, 3.0});
}

TEST_CASE("demand validation") {
  auto read = [](const std::string& text, int n) {
    std::istringstream is(text);
    return read_demand_csv(is, n, kStep);
  };
  CHECK(read(demand_csv(3, 8), 8).circuits_kwh[2].size() == 8);
  CHECK_THROWS_AS(read(demand_csv(3, 7), 8), DataError);
  CHECK_THROWS_AS(read(demand_csv(3, 8, -0.1), 8), DataError);
  const auto zeros = read(demand_csv(4, 8, 0.0), 8);
  CHECK(zeros.circuits_kwh.size() == 4);
  CHECK(std::all_of(zeros.circuits_kwh.begin(), zeros.circuits_kwh.end(),
                    [](const auto& r) { return std::all_of(r.begin(), r.end(),
                                                           [](double v) { return v == 0.0; }); }));
  CHECK_THROWS_AS(read("timestamp,p1_kwh,p2_kwh\n2017-09-11T00:00,0.1\n", 2), DataError);
}

TEST_CASE("written series reload bit for bit") {
  const auto sc = synth_scenario(17, 2);
  std::stringstream ws, ds;
  write_weather_csv(ws, sc.weather);
  write_demand_csv(ds, sc.demand);
  CHECK(read_weather_csv(ws, kStep) == sc.weather);
  CHECK(read_demand_csv(ds, 8, kStep) == sc.demand);
}

TEST_CASE("merge rejects misaligned series") {
  auto sc = synth_scenario(1, 1);
  auto shorter = sc.demand;
  shorter.timestamps.pop_back();
  shorter.circuits_kwh.pop_back();
  CHECK_THROWS_AS(merge_series(sc.weather, shorter), DataError);
  auto shifted = sc.demand;
  shifted.timestamps[5] = "2001-01-01T00:00";
  CHECK_THROWS_AS(merge_series(sc.weather, shifted), DataError);
}

TEST_CASE("forecast windows slice, pad, and overlap") {
  const auto sc = synth_scenario(3, 1);
  const auto series = merge_series(sc.weather, sc.demand);
  const auto head = forecast_window(series, 0, 6);
  REQUIRE(head.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(head[k].ghi_kw_m2 == series[k].ghi_kw_m2);
    CHECK(head[k].circuit_demand_kwh == series[k].circuit_demand_kwh);
  }
  const std::size_t n = series.size();
  const auto tail = forecast_window(series, n - 2, 6);
  REQUIRE(tail.size() == 6);
  CHECK(tail[1].circuit_demand_kwh == series[n - 1].circuit_demand_kwh);
  for (int k = 2; k < 6; ++k) {
    CHECK(tail[k].ghi_kw_m2 == 0.0);
    CHECK(tail[k].wind_m_s == 0.0);
    CHECK(tail[k].total_demand_kwh() == 0.0);
    CHECK(tail[k].circuit_demand_kwh.size() == 8);
    CHECK(tail[k].t_ambient_c == series[n - 1].t_ambient_c);
  }
  for (std::size_t s = 0; s + 1 < 40; ++s) {
    const auto a = forecast_window(series, s, 12);
    const auto b = forecast_window(series, s + 1, 12);
    for (int k = 0; k + 1 < 12; ++k) {
      CHECK(a[k + 1].t_ambient_c == b[k].t_ambient_c);
      CHECK(a[k + 1].circuit_demand_kwh == b[k].circuit_demand_kwh);
    }
  }
}

TEST_CASE("synthetic scenarios are deterministic and plausible") {
  const auto a = synth_scenario(1, 7);
  const auto b = synth_scenario(1, 7);
  CHECK(a.weather == b.weather);
  CHECK(a.demand == b.demand);
  CHECK_FALSE(synth_scenario(2, 7).weather == a.weather);
  REQUIRE(a.weather.points.size() == 1008);
  CHECK(a.weather.timestamps.front() == "2017-09-11T00:00");
  for (int day = 0; day < 7; ++day) {
    CHECK(a.weather.points[day * 144].ghi_kw_m2 == 0.0);
    double peak = -100.0;
    for (int s = 0; s < 144; ++s) {
      const auto& p = a.weather.points[day * 144 + s];
      peak = std::max(peak, p.t_ambient_c);
      CHECK(p.ghi_kw_m2 >= 0.0);
      CHECK(p.ghi_kw_m2 <= 1.0);
      CHECK(p.t_ambient_c >= 24.0);
      CHECK(p.t_ambient_c <= 36.0);
    }
    CHECK(peak >= 30.0);
  }
  double critical = 0.0;
  for (const auto& row : a.demand.circuits_kwh) {
    CHECK(row.size() == 8);
    CHECK(row[0] > 0.0);
    critical += row[0];
  }
  CHECK(critical > 0.0);
  // The generator's text round-trips through its own reader.
  std::stringstream ws;
  write_weather_csv(ws, a.weather);
  CHECK(read_weather_csv(ws, kStep).points.size() == 1008);
}
