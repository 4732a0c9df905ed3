// SPDX-License-Identifier: Apache-2.0
//
// Receding-horizon controller. Each step assembles a MILP over the forecast
// window from measured state, solves it, and sends only the first step's
// decisions to the plant: the battery throughput fraction becomes a
// charge/discharge bit pair, the AC bit passes through, and the aggregate
// load energy is mapped to circuit bits by the priority stack.

#ifndef HEMS_MPC_HPP_
#define HEMS_MPC_HPP_

#include <span>
#include <string>
#include <vector>

#include "hems/controllers.hpp"
#include "hems/domain.hpp"
#include "hems/milp.hpp"

namespace hems {

// Column map of the horizon MILP. Step k of the window owns a contiguous
// block of kColsPerStep columns; T_house and E_bat in block k are the states
// reached at the end of step k.
class MpcLayout {
 public:
  enum Field : int {
    kTHouse = 0,
    kEBat,
    kGamma,
    kAcOn,        // binary
    kLoad,
    kPv,
    kTempSlack,
    kCritSlack,
    kFlipOn,      // binary
    kFlipOff,     // binary
    kDischargeFlag,  // binary
    kColsPerStep
  };

  explicit MpcLayout(int horizon) : horizon_(horizon) {}

  int horizon() const { return horizon_; }
  int col(int k, Field f) const { return k * kColsPerStep + f; }
  int num_cols() const { return horizon_ * kColsPerStep; }
  int num_binaries() const { return 4 * horizon_; }
  int num_continuous() const { return num_cols() - num_binaries(); }
  static bool is_binary(Field f) {
    return f == kAcOn || f == kFlipOn || f == kFlipOff || f == kDischargeFlag;
  }

 private:
  int horizon_;
};

using ForecastWindow = std::vector<ExogenousRecord>;

// Builds the horizon MILP. `fw.size()` must equal tb.horizon_steps.
milp::MilpProblem build_milp(const Feedback& fb, std::span<const ExogenousRecord> fw,
                             const ControllerContext& ctx);

struct MpcPlanStep {
  double gamma = 0.0;
  bool ac_on = false;
  double load_kwh = 0.0;
  bool flip_on = false;
  bool discharge_flag = false;
};

MpcPlanStep extract_first_step(const MpcLayout& layout,
                               const std::vector<double>& columns);

struct MpcDiagnostics {
  milp::SolveStatus status = milp::SolveStatus::kInfeasible;
  double objective = 0.0;
  double gap = 0.0;
  double solve_ms = 0.0;
  long nodes = 0;
  bool fallback = false;
  MpcPlanStep plan;
};

struct MpcResult {
  ControlCommand command;
  MpcDiagnostics diagnostics;
};

// Maps a planned first step onto a realizable command. Gamma > 0 discharges,
// gamma < 0 charges; a planned startup that relies on the battery surge keeps
// the battery engaged even when gamma is zero.
ControlCommand command_from_plan(const MpcPlanStep& plan, const Feedback& fb,
                                 const ExogenousRecord& now);

// One MPC step. Falls back to the Rule-Based command when the solver returns
// no usable incumbent.
MpcResult mpc_step(const Feedback& fb, std::span<const ExogenousRecord> fw,
                   const ControllerContext& ctx);

}  // namespace hems

#endif  // HEMS_MPC_HPP_
