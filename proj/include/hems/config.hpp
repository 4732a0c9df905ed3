// SPDX-License-Identifier: Apache-2.0
//
// Plain-text run configuration: one `key = value` per line, `#` starts a
// comment, unknown or repeated keys are errors. Thermal coefficients follow
// step_hours and thermal_tau_hours unless thermal_a/b/d/q_ac are given.

#ifndef HEMS_CONFIG_HPP_
#define HEMS_CONFIG_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "hems/domain.hpp"

namespace hems {

struct RunConfig {
  ScenarioConfig scenario;
  TimeBase time;
};

RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

// Writes a complete file that parse_config reads back to the same values.
void write_config(std::ostream& os, const RunConfig& rc);

// Applies one `key=value` override to an already parsed configuration.
void apply_override(RunConfig& rc, const std::string& key, const std::string& value);

}  // namespace hems

#endif  // HEMS_CONFIG_HPP_
