// SPDX-License-Identifier: Apache-2.0
//
// Internal LP engine shared by solve_lp and the branch-and-bound driver.

#ifndef HEMS_SRC_SIMPLEX_HPP_
#define HEMS_SRC_SIMPLEX_HPP_

#include <memory>
#include <span>
#include <vector>

#include "hems/milp.hpp"

namespace hems::milp::internal {

struct LpResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;  // structural columns only
  double objective = kInf;
  long iterations = 0;
};

// Solves min c.x over the rows of `p` with column bounds [lo, hi] (which
// override p.lower / p.upper; integrality is ignored).
LpResult solve_bounded_lp(const MilpProblem& p, std::span<const double> lo,
                          std::span<const double> hi, const Tolerances& tol);

// Branch-and-bound LP driver. The root relaxation is solved once; each
// later solve restarts from the root's optimal basis and repairs primal
// feasibility with the dual simplex, falling back to a cold solve on trouble.
class WarmLp {
 public:
  WarmLp(const MilpProblem& p, const Tolerances& tol);
  ~WarmLp();
  WarmLp(const WarmLp&) = delete;
  WarmLp& operator=(const WarmLp&) = delete;

  LpResult solve_root();
  // Bounds must lie within the problem's own bounds.
  LpResult solve(std::span<const double> lo, std::span<const double> hi);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hems::milp::internal

#endif  // HEMS_SRC_SIMPLEX_HPP_
