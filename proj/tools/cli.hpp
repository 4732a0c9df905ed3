// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end, callable in-process for tests.

#ifndef HEMS_TOOLS_CLI_HPP_
#define HEMS_TOOLS_CLI_HPP_

#include <iosfwd>

namespace hems::cli {

// Returns the process exit code. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hems::cli

#endif  // HEMS_TOOLS_CLI_HPP_
