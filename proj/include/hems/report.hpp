// SPDX-License-Identifier: Apache-2.0
//
// CSV and SVG artifacts for closed-loop runs and sweeps. Wall-clock fields
// are written only when `with_timing` is set, so default outputs are
// byte-reproducible.

#ifndef HEMS_REPORT_HPP_
#define HEMS_REPORT_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "hems/simulation.hpp"

namespace hems {

inline constexpr const char* kMetricsHeader =
    "controller,alpha_i,alpha_pv,alpha_bat,lrm_cri,lrm_o,trm_h,trip_steps,mean_solve_ms";

void write_trajectory_csv(std::ostream& os, const SimulationResult& r,
                          const ScenarioConfig& cfg, const TimeBase& tb,
                          const std::vector<std::string>& timestamps, bool with_timing);

void write_metrics_header(std::ostream& os);
void write_metrics_row(std::ostream& os, const MetricsRow& row, bool with_timing);

// Temperature, SoC, load and PV panels for one run, written as
// <dir>/<prefix>_{temperature,soc,load,pv}.svg. Returns the paths.
std::vector<std::string> write_run_charts(const std::string& dir, const std::string& prefix,
                                          const SimulationResult& r,
                                          const ScenarioConfig& cfg, const TimeBase& tb);

// One scatter per metric against case index, colored by controller. Cases
// are numbered in grid order (alpha_i, alpha_pv, alpha_bat).
std::vector<std::string> write_sweep_charts(const std::string& dir,
                                            const std::vector<MetricsRow>& rows);

}  // namespace hems

#endif  // HEMS_REPORT_HPP_
