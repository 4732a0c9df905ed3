// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hems/config.hpp"
#include "hems/data_io.hpp"
#include "hems/report.hpp"
#include "hems/simulation.hpp"

namespace hems::cli {
namespace {

constexpr int kDeskHorizon = 36;
constexpr double kDeskNodeLimit = 1500.0;

struct Inputs {
  std::string config_path;
  std::string weather_path;
  std::string loads_path;
  std::optional<std::uint64_t> synth_seed;
  std::optional<int> days;
  std::string out_dir = "out";
  std::vector<std::string> sets;
  bool desk = false;
  bool timing = false;
};

struct Loaded {
  RunConfig rc;
  std::vector<ExogenousRecord> series;
  std::vector<std::string> timestamps;
};

std::pair<std::string, std::string> split_kv(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("expected KEY=VALUE, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

Loaded load_inputs(const Inputs& in) {
  Loaded l;
  if (!in.config_path.empty()) l.rc = load_config(in.config_path);
  // Desk runs cap each solve by nodes so sweeps stay short and reproducible.
  if (in.desk && l.rc.scenario.mip_node_limit == 0.0) {
    l.rc.scenario.mip_node_limit = kDeskNodeLimit;
  }
  for (const std::string& s : in.sets) {
    const auto [k, v] = split_kv(s);
    apply_override(l.rc, k, v);
  }
  TimeBase& tb = l.rc.time;
  const int steps_per_day = static_cast<int>(std::lround(24.0 / tb.step_hours));
  if (in.days) {
    if (*in.days < 1) throw ConfigError("--days must be >= 1");
    tb.steps_total = *in.days * steps_per_day;
  }
  if (in.synth_seed) {
    if (!in.weather_path.empty() || !in.loads_path.empty()) {
      throw ConfigError("--synth cannot be combined with --weather/--loads");
    }
    const int days = (tb.steps_total + steps_per_day - 1) / steps_per_day;
    const SyntheticScenario sc =
        synth_scenario(*in.synth_seed, days, tb.step_hours, l.rc.scenario.n_circuits);
    l.series = merge_series(sc.weather, sc.demand);
    l.timestamps = sc.weather.timestamps;
  } else {
    if (in.weather_path.empty() || in.loads_path.empty()) {
      throw ConfigError("give --weather and --loads, or --synth SEED");
    }
    const WeatherSeries w = load_weather_csv(in.weather_path, tb.step_hours);
    const DemandSeries d = load_demand_csv(in.loads_path, l.rc.scenario.n_circuits, tb.step_hours);
    l.series = merge_series(w, d);
    l.timestamps = w.timestamps;
    if (!in.days && static_cast<int>(l.series.size()) < tb.steps_total) {
      tb.steps_total = static_cast<int>(l.series.size());
    }
  }
  if (static_cast<int>(l.series.size()) < tb.steps_total) {
    throw DataError("data covers " + std::to_string(l.series.size()) + " steps, run needs " +
                    std::to_string(tb.steps_total));
  }
  if (in.desk) tb.horizon_steps = kDeskHorizon;
  tb.validate();
  return l;
}

void add_input_options(CLI::App* app, Inputs& in) {
  app->add_option("--config", in.config_path, "Configuration file (key = value)");
  app->add_option("--weather", in.weather_path, "Weather CSV");
  app->add_option("--loads", in.loads_path, "Circuit demand CSV");
  app->add_option("--synth", in.synth_seed, "Use the synthetic scenario with this seed");
  app->add_option("--days", in.days, "Simulated days");
  app->add_option("--out", in.out_dir, "Output directory");
  app->add_option("--set", in.sets, "Config override KEY=VALUE (repeatable)");
  app->add_flag("--desk", in.desk, "MPC horizon of 36 steps for desk-scale runs");
  app->add_flag("--timing", in.timing, "Record wall-clock solve times in the outputs");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

std::string fmt_metric(const std::optional<double>& v) {
  if (!v) return "NA";
  std::ostringstream s;
  s.precision(4);
  s << std::fixed << *v;
  return s.str();
}

int cmd_run(const Inputs& in, const std::string& controller, std::ostream& out,
            std::ostream& err) {
  const auto kind = parse_controller(controller);
  if (!kind) {
    err << "error: unknown controller '" << controller
        << "' (expected baseline, rulebased or mpc)\n";
    return 2;
  }
  const Loaded l = load_inputs(in);
  std::filesystem::create_directories(in.out_dir);
  const ScenarioConfig& cfg = l.rc.scenario;
  const TimeBase& tb = l.rc.time;
  const SimulationResult r = simulate(*kind, cfg, tb, l.series);
  const MetricsRow row = summarize(*kind, cfg, r.trajectory);

  {
    auto f = open_out(in.out_dir + "/trajectory.csv");
    write_trajectory_csv(f, r, cfg, tb, l.timestamps, in.timing);
  }
  {
    auto f = open_out(in.out_dir + "/metrics.csv");
    write_metrics_header(f);
    write_metrics_row(f, row, in.timing);
  }
  write_run_charts(in.out_dir, to_string(*kind), r, cfg, tb);

  out << to_string(*kind) << ": " << r.trajectory.size() << " steps, lrm_cri "
      << fmt_metric(row.lrm_cri) << ", lrm_o " << fmt_metric(row.lrm_o) << ", trm_h "
      << fmt_metric(row.trm_h) << ", trips " << row.trip_steps;
  if (*kind == ControllerKind::kMpc) {
    int fallbacks = 0, limited = 0;
    for (const auto& d : r.mpc) {
      fallbacks += d.fallback;
      limited += d.status == milp::SolveStatus::kIncumbentAtTimeLimit;
    }
    out << ", mean solve " << fmt_metric(row.mean_solve_ms) << " ms, time-limited "
        << limited << ", fallbacks " << fallbacks;
  }
  out << "\nwrote " << in.out_dir << "/trajectory.csv, metrics.csv and charts\n";
  return 0;
}

struct Job {
  ControllerKind kind;
  double alpha_i, alpha_pv, alpha_bat;
};

bool matches(const Job& j, const std::vector<std::pair<std::string, std::string>>& filters) {
  for (const auto& [k, v] : filters) {
    if (k == "controller") {
      if (to_string(j.kind) != v) return false;
      continue;
    }
    double want = 0.0;
    try {
      std::size_t used = 0;
      want = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError("--subset " + k + ": not a number: '" + v + "'");
    }
    const double have = k == "alpha_i"    ? j.alpha_i
                        : k == "alpha_pv"  ? j.alpha_pv
                        : k == "alpha_bat" ? j.alpha_bat
                                           : NAN;
    if (std::isnan(have)) {
      throw ConfigError("--subset key must be alpha_i, alpha_pv, alpha_bat or controller");
    }
    if (std::abs(have - want) > 1e-9) return false;
  }
  return true;
}

int cmd_sweep(const Inputs& in, const std::vector<std::string>& subsets, int parallel,
              std::ostream& out, std::ostream& err) {
  if (parallel < 1) throw ConfigError("--parallel must be >= 1");
  std::vector<std::pair<std::string, std::string>> filters;
  for (const std::string& s : subsets) filters.push_back(split_kv(s));
  const Loaded l = load_inputs(in);

  std::vector<Job> jobs;
  for (double ai : kAlphaIGrid) {
    for (double apv : kAlphaPvGrid) {
      for (double abat : kAlphaBatGrid) {
        for (ControllerKind k :
             {ControllerKind::kBaseline, ControllerKind::kRuleBased, ControllerKind::kMpc}) {
          Job j{k, ai, apv, abat};
          if (matches(j, filters)) jobs.push_back(j);
        }
      }
    }
  }
  if (jobs.empty()) {
    err << "error: --subset selects no cases\n";
    return 2;
  }
  std::filesystem::create_directories(in.out_dir);

  std::vector<std::optional<MetricsRow>> rows(jobs.size());
  std::vector<std::string> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      ScenarioConfig cfg = l.rc.scenario;
      cfg.alpha_i = j.alpha_i;
      cfg.alpha_pv = j.alpha_pv;
      cfg.alpha_bat = j.alpha_bat;
      try {
        const SimulationResult r = simulate(j.kind, cfg, l.rc.time, l.series);
        rows[i] = summarize(j.kind, cfg, r.trajectory);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
      const std::size_t n = ++done;
      std::lock_guard<std::mutex> lock(log_mu);
      err << "[" << n << "/" << jobs.size() << "] " << to_string(j.kind)
          << " alpha_i=" << j.alpha_i << " alpha_pv=" << j.alpha_pv
          << " alpha_bat=" << j.alpha_bat << (failures[i].empty() ? "" : " FAILED") << '\n';
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(parallel, static_cast<int>(jobs.size()));
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<MetricsRow> ok;
  {
    auto f = open_out(in.out_dir + "/metrics.csv");
    write_metrics_header(f);
    for (const auto& r : rows) {
      if (!r) continue;
      write_metrics_row(f, *r, in.timing);
      ok.push_back(*r);
    }
  }
  write_sweep_charts(in.out_dir, ok);

  int n_failed = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (failures[i].empty()) continue;
    if (n_failed++ == 0) err << "failed cases:\n";
    err << "  " << to_string(jobs[i].kind) << " alpha_i=" << jobs[i].alpha_i
        << " alpha_pv=" << jobs[i].alpha_pv << " alpha_bat=" << jobs[i].alpha_bat << ": "
        << failures[i] << '\n';
  }
  out << ok.size() << " metric rows written to " << in.out_dir << "/metrics.csv";
  if (n_failed) out << ", " << n_failed << " cases failed";
  out << '\n';
  return n_failed ? 1 : 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Off-grid home energy resiliency simulator"};
  app.require_subcommand(1);
  Inputs run_in, sweep_in;
  std::string controller;
  std::vector<std::string> subsets;
  int parallel = 1;

  CLI::App* run = app.add_subcommand("run", "Simulate one controller on one scenario");
  add_input_options(run, run_in);
  run->add_option("--controller", controller, "baseline, rulebased or mpc")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Simulate every grid case and controller");
  add_input_options(sweep, sweep_in);
  sweep->add_option("--parallel", parallel, "Concurrent simulations");
  sweep->add_option("--subset", subsets,
                    "Filter KEY=VALUE on alpha_i, alpha_pv, alpha_bat or controller");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_in, controller, out, err);
    return cmd_sweep(sweep_in, subsets, parallel, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace hems::cli
