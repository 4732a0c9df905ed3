// SPDX-License-Identifier: Apache-2.0
//
// Self-contained mixed 0/1 linear solver. LP relaxations are solved with a
// dense bounded-variable primal simplex (two phases, artificial variables for
// rows the slack basis cannot satisfy); integrality is recovered by
// best-first branch-and-bound on the most fractional binary.

#ifndef HEMS_MILP_HPP_
#define HEMS_MILP_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace hems::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int col = 0;
  double coeff = 0.0;
  bool operator==(const Term&) const = default;
};

struct Row {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  bool operator==(const Row&) const = default;
};

// Minimize objective . x subject to rows and column bounds.
struct MilpProblem {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> is_binary;
  std::vector<Row> rows;

  int num_cols() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_binaries() const;

  int add_column(double cost, double lo, double hi, bool binary = false);
  int add_row(std::vector<Term> terms, Sense sense, double rhs);

  // Throws std::invalid_argument on inconsistent dimensions, non-finite
  // coefficients, or binaries with bounds outside [0,1].
  void validate() const;

  double evaluate(const std::vector<double>& x) const;
  // Largest bound or row violation of x.
  double max_violation(const std::vector<double>& x) const;

  bool operator==(const MilpProblem&) const = default;
};

enum class SolveStatus : std::uint8_t {
  kOptimal,               // within the requested gap
  kIncumbentAtTimeLimit,
  kNoIncumbentAtTimeLimit,
  kInfeasible,
  kUnbounded,
  kNumericError,
};

const char* to_string(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> columns;
  double objective = kInf;
  double best_bound = -kInf;
  double gap = kInf;
  long nodes = 0;
  long simplex_iterations = 0;
  double wall_time_s = 0.0;

  bool has_solution() const {
    return status == SolveStatus::kOptimal ||
           status == SolveStatus::kIncumbentAtTimeLimit;
  }
};

struct Tolerances {
  double feasibility = 1e-7;
  double integrality = 1e-7;
  double objective = 1e-9;
  double optimality = 1e-9;  // reduced-cost threshold
  double pivot = 1e-9;
};

// LP relaxation: binaries relaxed to their [lo, hi] bounds.
MilpSolution solve_lp(const MilpProblem& p, const Tolerances& tol = {});

struct MilpOptions {
  double mip_gap = 0.01;
  double time_limit_s = 500.0;
  // Explored-node budget; 0 means none. Unlike the time limit it is
  // machine-independent. Exhausting it reports the time-limit statuses.
  long node_limit = 0;
  Tolerances tol;
};

MilpSolution solve_milp(const MilpProblem& p, const MilpOptions& opts);

// Relative gap between an incumbent and a lower bound (minimization).
double relative_gap(double incumbent, double bound);

// Plain-text sparse dump. Numbers use shortest round-trip formatting, so
// read_problem(write_problem(p)) == p bit for bit.
void write_problem(std::ostream& os, const MilpProblem& p);
MilpProblem read_problem(std::istream& is);

}  // namespace hems::milp

#endif  // HEMS_MILP_HPP_
