// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference solvers. Deliberately share nothing with the library's
// LP engine: bounds become explicit rows, every variable is shifted to be
// nonnegative, and a plain two-phase tableau runs Bland's rule throughout.
// The MILP reference enumerates every binary pattern and solves one LP each.

#ifndef HEMS_TESTS_ORACLE_HPP_
#define HEMS_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hems/milp.hpp"

namespace oracle {

struct LpAnswer {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
};

// min c.y  s.t.  A y = b (b >= 0), y >= 0.  Returns nullopt when infeasible.
inline std::optional<double> standard_form_min(std::vector<std::vector<double>> a,
                                               std::vector<double> b,
                                               const std::vector<double>& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  const int cols = n + m;  // structurals + artificials
  const double eps = 1e-10;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][cols] = b[i];
    basis[i] = n + i;
  }
  auto run = [&](const std::vector<double>& cost, int allowed) -> bool {
    for (int guard = 0; guard < 100000; ++guard) {
      // Reduced costs.
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        bool basic = false;
        for (int i = 0; i < m; ++i) basic |= basis[i] == j;
        if (basic) continue;
        double d = cost[j];
        for (int i = 0; i < m; ++i) d -= cost[basis[i]] * t[i][j];
        if (d < -1e-11) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] > eps) {
          const double r = t[i][cols] / t[i][enter];
          if (leave < 0 || r < best - 1e-13 ||
              (std::abs(r - best) <= 1e-13 && basis[i] < basis[leave])) {
            best = r;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      const double piv = t[leave][enter];
      for (double& v : t[leave]) v /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave || t[i][enter] == 0.0) continue;
        const double f = t[i][enter];
        for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
      }
      basis[leave] = enter;
    }
    throw std::runtime_error("oracle simplex did not terminate");
  };
  std::vector<double> phase1(cols, 0.0);
  for (int j = n; j < cols; ++j) phase1[j] = 1.0;
  run(phase1, cols);
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) infeas += t[i][cols];
  }
  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  if (infeas > 1e-7 * scale) return std::nullopt;
  // Pivot zero-valued artificials out where possible.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t[i][j]) > 1e-9) {
        const double piv = t[i][j];
        for (double& v : t[i]) v /= piv;
        for (int r = 0; r < m; ++r) {
          if (r == i || t[r][j] == 0.0) continue;
          const double f = t[r][j];
          for (int k = 0; k <= cols; ++k) t[r][k] -= f * t[i][k];
        }
        basis[i] = j;
        break;
      }
    }
  }
  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = c[j];
  // Remaining basic artificials sit in redundant rows at zero; forbid
  // entering artificials by restricting pricing to structurals.
  if (!run(phase2, n)) return -std::numeric_limits<double>::infinity();
  double obj = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) obj += c[basis[i]] * t[i][cols];
  }
  return obj;
}

// LP over `p` with the given columns fixed to values; finite lower bounds
// required on every free column.
inline LpAnswer solve_lp_reference(const hems::milp::MilpProblem& p,
                                   const std::vector<std::optional<double>>& fixed) {
  using hems::milp::Sense;
  const int n = p.num_cols();
  std::vector<int> var_of(n, -1);
  std::vector<int> free_cols;
  double const_obj = 0.0;
  for (int j = 0; j < n; ++j) {
    if (fixed[j]) {
      const_obj += p.objective[j] * *fixed[j];
    } else {
      if (!std::isfinite(p.lower[j])) {
        throw std::invalid_argument("reference LP needs finite lower bounds");
      }
      var_of[j] = static_cast<int>(free_cols.size());
      free_cols.push_back(j);
    }
  }
  const int nf = static_cast<int>(free_cols.size());
  // Variables: shifted y (nf), then one slack per inequality / bound row.
  std::vector<std::vector<double>> rows_a;
  std::vector<double> rows_b;
  std::vector<int> slack_sign;  // 0 none, +1 for <=, -1 for >=
  for (const auto& row : p.rows) {
    std::vector<double> coef(nf, 0.0);
    double rhs = row.rhs;
    for (const auto& t : row.terms) {
      if (fixed[t.col]) {
        rhs -= t.coeff * *fixed[t.col];
      } else {
        coef[var_of[t.col]] += t.coeff;
        rhs -= t.coeff * p.lower[t.col];
      }
    }
    // A row with every column fixed either holds or rules the pattern out.
    const bool constant =
        std::all_of(coef.begin(), coef.end(), [](double v) { return v == 0.0; });
    if (constant) {
      const double tol = 1e-9;
      const bool holds = row.sense == Sense::kLessEqual      ? rhs >= -tol
                         : row.sense == Sense::kGreaterEqual ? rhs <= tol
                                                             : std::abs(rhs) <= tol;
      if (!holds) return LpAnswer{};
      continue;
    }
    rows_a.push_back(coef);
    rows_b.push_back(rhs);
    slack_sign.push_back(row.sense == Sense::kLessEqual      ? 1
                         : row.sense == Sense::kGreaterEqual ? -1
                                                             : 0);
  }
  for (int k = 0; k < nf; ++k) {
    const int j = free_cols[k];
    if (std::isfinite(p.upper[j])) {
      std::vector<double> coef(nf, 0.0);
      coef[k] = 1.0;
      rows_a.push_back(coef);
      rows_b.push_back(p.upper[j] - p.lower[j]);
      slack_sign.push_back(1);
    }
  }
  const int m = static_cast<int>(rows_a.size());
  int num_slacks = 0;
  for (int s : slack_sign) num_slacks += s != 0;
  const int total = nf + num_slacks;
  std::vector<std::vector<double>> a(m, std::vector<double>(total, 0.0));
  std::vector<double> b(m);
  int next_slack = nf;
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < nf; ++k) a[i][k] = rows_a[i][k];
    if (slack_sign[i] != 0) a[i][next_slack++] = slack_sign[i];
    b[i] = rows_b[i];
    if (b[i] < 0.0) {
      for (double& v : a[i]) v = -v;
      b[i] = -b[i];
    }
  }
  std::vector<double> c(total, 0.0);
  double shift_obj = 0.0;
  for (int k = 0; k < nf; ++k) {
    c[k] = p.objective[free_cols[k]];
    shift_obj += p.objective[free_cols[k]] * p.lower[free_cols[k]];
  }
  const auto obj = standard_form_min(a, b, c);
  LpAnswer ans;
  if (!obj) return ans;
  ans.feasible = true;
  ans.objective = *obj + shift_obj + const_obj;
  return ans;
}

// Exhaustive MILP reference: every binary pattern, one LP each.
inline LpAnswer solve_milp_reference(const hems::milp::MilpProblem& p) {
  std::vector<int> bins;
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.is_binary[j]) bins.push_back(j);
  }
  LpAnswer best;
  const unsigned long patterns = 1UL << bins.size();
  std::vector<std::optional<double>> fixed(p.num_cols());
  for (unsigned long mask = 0; mask < patterns; ++mask) {
    bool in_bounds = true;
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const double v = (mask >> k) & 1UL ? 1.0 : 0.0;
      if (v < p.lower[bins[k]] || v > p.upper[bins[k]]) in_bounds = false;
      fixed[bins[k]] = v;
    }
    if (!in_bounds) continue;
    const LpAnswer a = solve_lp_reference(p, fixed);
    if (a.feasible && a.objective < best.objective) best = a;
  }
  return best;
}

}  // namespace oracle

#endif  // HEMS_TESTS_ORACLE_HPP_
