// SPDX-License-Identifier: Apache-2.0

#include "hems/milp.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "simplex.hpp"

namespace hems::milp {

int MilpProblem::num_binaries() const {
  return static_cast<int>(std::count(is_binary.begin(), is_binary.end(), true));
}

int MilpProblem::add_column(double cost, double lo, double hi, bool binary) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  is_binary.push_back(binary);
  return num_cols() - 1;
}

int MilpProblem::add_row(std::vector<Term> terms, Sense sense, double rhs) {
  rows.push_back(Row{std::move(terms), sense, rhs});
  return num_rows() - 1;
}

void MilpProblem::validate() const {
  const auto n = objective.size();
  if (lower.size() != n || upper.size() != n || is_binary.size() != n) {
    throw std::invalid_argument("column arrays have inconsistent lengths");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) {
      throw std::invalid_argument("non-finite objective coefficient");
    }
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInf ||
        upper[j] == -kInf) {
      throw std::invalid_argument("invalid column bound");
    }
    if (is_binary[j] && (lower[j] < 0.0 || upper[j] > 1.0)) {
      throw std::invalid_argument("binary column bounds outside [0,1]");
    }
  }
  for (const Row& row : rows) {
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("non-finite right-hand side");
    }
    for (const Term& t : row.terms) {
      if (t.col < 0 || t.col >= num_cols()) {
        throw std::invalid_argument("row references a missing column");
      }
      if (!std::isfinite(t.coeff)) {
        throw std::invalid_argument("non-finite row coefficient");
      }
    }
  }
}

double MilpProblem::evaluate(const std::vector<double>& x) const {
  double v = 0.0;
  for (int j = 0; j < num_cols(); ++j) v += objective[j] * x[j];
  return v;
}

double MilpProblem::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    worst = std::max({worst, lower[j] - x[j], x[j] - upper[j]});
  }
  for (const Row& row : rows) {
    double act = 0.0;
    for (const Term& t : row.terms) act += t.coeff * x[t.col];
    const double over = act - row.rhs;
    switch (row.sense) {
      case Sense::kLessEqual: worst = std::max(worst, over); break;
      case Sense::kGreaterEqual: worst = std::max(worst, -over); break;
      case Sense::kEqual: worst = std::max(worst, std::abs(over)); break;
    }
  }
  return worst;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kIncumbentAtTimeLimit: return "incumbent-at-timelimit";
    case SolveStatus::kNoIncumbentAtTimeLimit: return "no-incumbent-at-timelimit";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericError: return "numeric-error";
  }
  return "unknown";
}

double relative_gap(double incumbent, double bound) {
  const double diff = incumbent - bound;
  if (diff <= 1e-9 * std::max(1.0, std::abs(incumbent))) return 0.0;
  return diff / std::max(std::abs(incumbent), 1e-10);
}

MilpSolution solve_lp(const MilpProblem& p, const Tolerances& tol) {
  p.validate();
  const auto start = std::chrono::steady_clock::now();
  internal::LpResult r =
      internal::solve_bounded_lp(p, p.lower, p.upper, tol);
  MilpSolution s;
  s.status = r.status;
  s.simplex_iterations = r.iterations;
  if (r.status == SolveStatus::kOptimal) {
    s.columns = std::move(r.x);
    s.objective = r.objective;
    s.best_bound = r.objective;
    s.gap = 0.0;
  }
  s.wall_time_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start).count();
  return s;
}

namespace {

struct Node {
  std::vector<std::pair<int, std::uint8_t>> fixes;
  double bound = -kInf;
  int depth = 0;
  long seq = 0;
};

struct NodeOrder {
  // Lowest bound first, then deeper, then older.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

}  // namespace

MilpSolution solve_milp(const MilpProblem& p, const MilpOptions& opts) {
  p.validate();
  if (opts.mip_gap < 0.0) throw std::invalid_argument("mip_gap must be >= 0");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  MilpSolution sol;
  std::vector<int> binaries;
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.is_binary[j]) binaries.push_back(j);
  }

  std::vector<double> lo(p.lower), hi(p.upper);
  internal::WarmLp engine(p, opts.tol);
  bool have_incumbent = false;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long seq = 0;
  // Depth-first stack used until the first incumbent; flushed into `open`.
  std::vector<Node> dive{Node{}};
  bool time_out = false;
  bool numeric_trouble = false;

  auto global_bound = [&]() {
    double b = kInf;
    if (!open.empty()) b = open.top().bound;
    for (const Node& n : dive) b = std::min(b, n.bound);
    return b;
  };

  while (!dive.empty() || !open.empty()) {
    if (have_incumbent) {
      const double gb = global_bound();
      if (relative_gap(sol.objective, gb) <= opts.mip_gap) break;
    }
    if (elapsed() >= opts.time_limit_s ||
        (opts.node_limit > 0 && sol.nodes >= opts.node_limit)) {
      time_out = true;
      break;
    }
    Node node;
    if (!dive.empty()) {
      node = std::move(dive.back());
      dive.pop_back();
    } else {
      node = open.top();
      open.pop();
    }
    if (have_incumbent &&
        relative_gap(sol.objective, node.bound) <= opts.mip_gap) {
      continue;
    }

    lo = p.lower;
    hi = p.upper;
    for (auto [col, v] : node.fixes) lo[col] = hi[col] = v;
    internal::LpResult lp = sol.nodes == 0 ? engine.solve_root() : engine.solve(lo, hi);
    ++sol.nodes;
    sol.simplex_iterations += lp.iterations;

    if (lp.status == SolveStatus::kUnbounded) {
      if (sol.nodes == 1) {
        sol.status = SolveStatus::kUnbounded;
        sol.wall_time_s = elapsed();
        return sol;
      }
      continue;
    }
    if (lp.status == SolveStatus::kNumericError) {
      numeric_trouble = true;
      continue;
    }
    if (lp.status != SolveStatus::kOptimal) continue;
    if (have_incumbent && relative_gap(sol.objective, lp.objective) <= opts.mip_gap) {
      continue;
    }

    // Most fractional binary, ties to the lowest column.
    int branch_col = -1;
    double best_frac = opts.tol.integrality;
    for (int j : binaries) {
      const double f = std::min(lp.x[j], 1.0 - lp.x[j]);
      if (f > best_frac) {
        best_frac = f;
        branch_col = j;
      }
    }
    if (branch_col < 0) {
      for (int j : binaries) lp.x[j] = std::round(lp.x[j]);
      const double obj = p.evaluate(lp.x);
      if (!have_incumbent || obj < sol.objective) {
        have_incumbent = true;
        sol.objective = obj;
        sol.columns = std::move(lp.x);
      }
      for (Node& n : dive) open.push(std::move(n));
      dive.clear();
      continue;
    }

    Node down{node.fixes, lp.objective, node.depth + 1, ++seq};
    down.fixes.emplace_back(branch_col, 0);
    Node up{std::move(node.fixes), lp.objective, node.depth + 1, ++seq};
    up.fixes.emplace_back(branch_col, 1);
    // Until an incumbent exists, dive depth-first toward the nearer integer.
    if (!have_incumbent) {
      if (lp.x[branch_col] >= 0.5) {
        dive.push_back(std::move(down));
        dive.push_back(std::move(up));
      } else {
        dive.push_back(std::move(up));
        dive.push_back(std::move(down));
      }
    } else {
      open.push(std::move(down));
      open.push(std::move(up));
    }
  }

  sol.wall_time_s = elapsed();
  if (!have_incumbent) {
    if (time_out) {
      sol.status = SolveStatus::kNoIncumbentAtTimeLimit;
    } else if (numeric_trouble) {
      sol.status = SolveStatus::kNumericError;
    } else {
      sol.status = SolveStatus::kInfeasible;
    }
    return sol;
  }
  const double gb = global_bound();
  sol.best_bound = std::isfinite(gb) ? std::min(gb, sol.objective) : sol.objective;
  sol.gap = relative_gap(sol.objective, sol.best_bound);
  sol.status = (time_out && sol.gap > opts.mip_gap)
                   ? SolveStatus::kIncumbentAtTimeLimit
                   : SolveStatus::kOptimal;
  return sol;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  // from_chars rejects a leading '+' but accepts "inf"/"-inf".
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("bad number in problem dump: " + tok);
  }
  return v;
}

char sense_char(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return 'L';
    case Sense::kEqual: return 'E';
    case Sense::kGreaterEqual: return 'G';
  }
  return '?';
}

}  // namespace

void write_problem(std::ostream& os, const MilpProblem& p) {
  os << "milp " << p.num_cols() << ' ' << p.num_rows() << '\n';
  for (int j = 0; j < p.num_cols(); ++j) {
    os << "col " << j << ' ' << fmt_double(p.objective[j]) << ' '
       << fmt_double(p.lower[j]) << ' ' << fmt_double(p.upper[j]) << ' '
       << (p.is_binary[j] ? 'B' : 'C') << '\n';
  }
  for (int i = 0; i < p.num_rows(); ++i) {
    const Row& r = p.rows[i];
    os << "row " << i << ' ' << sense_char(r.sense) << ' ' << fmt_double(r.rhs)
       << ' ' << r.terms.size() << '\n';
  }
  for (int i = 0; i < p.num_rows(); ++i) {
    for (const Term& t : p.rows[i].terms) {
      os << i << ' ' << t.col << ' ' << fmt_double(t.coeff) << '\n';
    }
  }
}

MilpProblem read_problem(std::istream& is) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("malformed problem dump: " + what);
  };
  std::string tag;
  int ncols = 0, nrows = 0;
  if (!(is >> tag >> ncols >> nrows) || tag != "milp" || ncols < 0 || nrows < 0) {
    fail("header");
  }
  MilpProblem p;
  std::string a, b, c;
  for (int j = 0; j < ncols; ++j) {
    int idx = 0;
    std::string kind;
    if (!(is >> tag >> idx >> a >> b >> c >> kind) || tag != "col" || idx != j ||
        (kind != "B" && kind != "C")) {
      fail("column " + std::to_string(j));
    }
    p.add_column(parse_double(a), parse_double(b), parse_double(c), kind == "B");
  }
  std::vector<std::size_t> counts(nrows);
  for (int i = 0; i < nrows; ++i) {
    int idx = 0;
    std::string sense;
    if (!(is >> tag >> idx >> sense >> a >> counts[i]) || tag != "row" ||
        idx != i || sense.size() != 1) {
      fail("row " + std::to_string(i));
    }
    Sense s{};
    switch (sense[0]) {
      case 'L': s = Sense::kLessEqual; break;
      case 'E': s = Sense::kEqual; break;
      case 'G': s = Sense::kGreaterEqual; break;
      default: fail("sense " + sense);
    }
    p.add_row({}, s, parse_double(a));
  }
  for (int i = 0; i < nrows; ++i) {
    for (std::size_t k = 0; k < counts[i]; ++k) {
      int r = 0, col = 0;
      if (!(is >> r >> col >> a) || r != i) fail("nonzero in row " + std::to_string(i));
      p.rows[i].terms.push_back(Term{col, parse_double(a)});
    }
  }
  p.validate();
  return p;
}

}  // namespace hems::milp
