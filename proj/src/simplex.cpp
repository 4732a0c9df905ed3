// SPDX-License-Identifier: Apache-2.0
//
// Dense-tableau bounded-variable primal simplex.
//
// Every row i becomes a_i.x + s_i = b_i with a slack s_i whose bounds encode
// the sense (<=: [0,inf), >=: (-inf,0], =: [0,0]). Structural columns start
// nonbasic at a finite bound; slacks start basic. Rows whose slack would be
// out of bounds get an artificial column, and phase 1 minimizes the sum of
// artificials. Phase 2 fixes artificials at zero and minimizes the real cost.
//
// Pricing is Dantzig (largest reduced cost) with a Harris-style two-pass
// ratio test. After a run of degenerate pivots the engine falls back to
// Bland's rule (lowest eligible index entering, lowest basic index leaving on
// ties) until the objective moves again, which rules out cycling.

#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace hems::milp::internal {
namespace {

enum class ColState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree, kFixed };

constexpr int kDegenerateStreakLimit = 50;

class DenseSimplex {
 public:
  DenseSimplex(const MilpProblem& p, std::span<const double> lo,
               std::span<const double> hi, const Tolerances& tol)
      : p_(&p), tol_(tol) {
    m_ = p.num_rows();
    n_ = p.num_cols();
    build(lo, hi);
  }

  LpResult run() {
    LpResult res;
    if (bounds_infeasible_) {
      res.status = SolveStatus::kInfeasible;
      return res;
    }
    // Phase 1.
    if (num_artificials_ > 0) {
      std::fill(cost_.begin(), cost_.end(), 0.0);
      for (int j = n_ + m_; j < nt_; ++j) cost_[j] = 1.0;
      recompute_reduced_costs();
      const SolveStatus s = iterate();
      if (s == SolveStatus::kNumericError) {
        res.status = s;
        res.iterations = iterations_;
        return res;
      }
      double infeas = 0.0;
      for (int j = n_ + m_; j < nt_; ++j) infeas += x_[j];
      if (infeas > tol_.feasibility * std::max(1.0, rhs_scale_)) {
        res.status = SolveStatus::kInfeasible;
        res.iterations = iterations_;
        return res;
      }
      for (int j = n_ + m_; j < nt_; ++j) {
        lo_[j] = hi_[j] = 0.0;
        if (state_[j] != ColState::kBasic) {
          state_[j] = ColState::kFixed;
          x_[j] = 0.0;
        }
      }
    }
    // Phase 2.
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = p_->objective[j];
    recompute_reduced_costs();
    const SolveStatus s = iterate();
    res.iterations = iterations_;
    if (s != SolveStatus::kOptimal) {
      res.status = s;
      return res;
    }
    finish(&res);
    return res;
  }

  // Re-optimizes from the current optimal basis under new structural bounds.
  // The basis must stay dual feasible: every nonbasic column keeps the side
  // its reduced cost prefers, which holds whenever bounds only tighten.
  // Returns kNumericError when that precondition fails or the dual simplex
  // stalls; callers then solve cold.
  LpResult reoptimize(std::span<const double> lo, std::span<const double> hi) {
    LpResult res;
    iterations_ = 0;
    for (int j = 0; j < n_; ++j) {
      if (lo[j] > hi[j]) {
        res.status = SolveStatus::kInfeasible;
        return res;
      }
      if (lo[j] == lo_[j] && hi[j] == hi_[j]) continue;
      lo_[j] = lo[j];
      hi_[j] = hi[j];
      if (state_[j] == ColState::kBasic) continue;
      double target = 0.0;
      if (lo_[j] == hi_[j]) {
        target = lo_[j];
        state_[j] = ColState::kFixed;
      } else if (state_[j] == ColState::kAtUpper && std::isfinite(hi_[j])) {
        target = hi_[j];
      } else if (state_[j] != ColState::kAtUpper && std::isfinite(lo_[j])) {
        target = lo_[j];
        state_[j] = ColState::kAtLower;
      } else {
        res.status = SolveStatus::kNumericError;
        return res;
      }
      const double delta = target - x_[j];
      x_[j] = target;
      if (delta == 0.0) continue;
      for (int i = 0; i < m_; ++i) {
        const double a = at_c(i, j);
        if (a != 0.0) x_[basis_[i]] -= a * delta;
      }
    }
    SolveStatus s = dual_iterate();
    if (s == SolveStatus::kOptimal) s = iterate();
    res.iterations = iterations_;
    if (s != SolveStatus::kOptimal) {
      res.status = s;
      return res;
    }
    finish(&res);
    return res;
  }

 private:
  void finish(LpResult* res) const {
    res->x.assign(x_.begin(), x_.begin() + n_);
    // Snap nonbasic-equivalent round-off onto bounds.
    for (int j = 0; j < n_; ++j) {
      if (res->x[j] < lo_[j]) res->x[j] = lo_[j];
      if (res->x[j] > hi_[j]) res->x[j] = hi_[j];
    }
    if (violation(res->x) >
        1e3 * tol_.feasibility * std::max(1.0, rhs_scale_)) {
      res->status = SolveStatus::kNumericError;
      return;
    }
    res->objective = 0.0;
    for (int j = 0; j < n_; ++j) res->objective += p_->objective[j] * res->x[j];
    res->status = SolveStatus::kOptimal;
  }

  // Bounded dual simplex: the most infeasible basic leaves toward its
  // violated bound; the entering column is chosen by a Harris two-pass ratio
  // test on reduced costs so dual feasibility is kept within tolerance.
  SolveStatus dual_iterate() {
    const long max_iter = 20L * (m_ + nt_) + 1000;
    while (true) {
      int r = -1;
      double worst = tol_.feasibility;
      for (int i = 0; i < m_; ++i) {
        const int b = basis_[i];
        const double v = std::max(lo_[b] - x_[b], x_[b] - hi_[b]);
        if (v > worst) {
          worst = v;
          r = i;
        }
      }
      if (r < 0) return SolveStatus::kOptimal;
      if (iterations_ > max_iter) return SolveStatus::kNumericError;
      ++iterations_;
      const int b = basis_[r];
      const bool to_lower = x_[b] < lo_[b];
      const double* row = &tab_[static_cast<std::size_t>(r) * nt_];

      // Direction in which column j must move to push x_b toward the bound.
      auto move_dir = [&](int j) {
        const double a = row[j];
        if (std::abs(a) <= tol_.pivot) return 0;
        const int dir = to_lower ? (a < 0.0 ? 1 : -1) : (a > 0.0 ? 1 : -1);
        const ColState st = state_[j];
        if (st == ColState::kFree) return dir;
        if (dir > 0 && st == ColState::kAtLower) return dir;
        if (dir < 0 && st == ColState::kAtUpper) return dir;
        return 0;
      };
      double relaxed = kInf;
      for (int j = 0; j < nt_; ++j) {
        const ColState st = state_[j];
        if (st == ColState::kBasic || st == ColState::kFixed) continue;
        if (move_dir(j) == 0) continue;
        relaxed = std::min(relaxed,
                           (std::abs(d_[j]) + tol_.optimality) / std::abs(row[j]));
      }
      if (!std::isfinite(relaxed)) return SolveStatus::kInfeasible;
      int q = -1;
      int q_dir = 0;
      double best_alpha = 0.0;
      for (int j = 0; j < nt_; ++j) {
        const ColState st = state_[j];
        if (st == ColState::kBasic || st == ColState::kFixed) continue;
        const int dir = move_dir(j);
        if (dir == 0) continue;
        const double a = std::abs(row[j]);
        if (std::abs(d_[j]) / a <= relaxed && a > best_alpha) {
          best_alpha = a;
          q = j;
          q_dir = dir;
        }
      }
      if (q < 0) return SolveStatus::kInfeasible;

      const double target = to_lower ? lo_[b] : hi_[b];
      const double step = (target - x_[b]) / (-q_dir * row[q]);
      x_[q] += q_dir * step;
      for (int i = 0; i < m_; ++i) {
        const double a = at_c(i, q);
        if (a != 0.0) x_[basis_[i]] -= q_dir * a * step;
      }
      x_[b] = target;
      state_[b] = lo_[b] == hi_[b]
                      ? ColState::kFixed
                      : (to_lower ? ColState::kAtLower : ColState::kAtUpper);
      pivot(r, q);
    }
  }

  double violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (int j = 0; j < n_; ++j) {
      worst = std::max({worst, lo_[j] - x[j], x[j] - hi_[j]});
    }
    for (const Row& row : p_->rows) {
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

  double& at(int i, int j) { return tab_[static_cast<std::size_t>(i) * nt_ + j]; }

  void build(std::span<const double> lo, std::span<const double> hi) {
    // Count artificials first so the tableau is allocated once.
    lo_.assign(lo.begin(), lo.end());
    hi_.assign(hi.begin(), hi.end());
    for (int j = 0; j < n_; ++j) {
      if (lo_[j] > hi_[j]) bounds_infeasible_ = true;
    }
    x_.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        x_[j] = hi_[j];
      }
    }

    std::vector<double> residual(m_);
    std::vector<double> slack_lo(m_), slack_hi(m_);
    std::vector<int> art_sign(m_, 0);
    for (int i = 0; i < m_; ++i) {
      const Row& row = p_->rows[i];
      double act = 0.0;
      for (const Term& t : row.terms) act += t.coeff * x_[t.col];
      residual[i] = row.rhs - act;
      rhs_scale_ = std::max(rhs_scale_, std::abs(row.rhs));
      switch (row.sense) {
        case Sense::kLessEqual: slack_lo[i] = 0.0; slack_hi[i] = kInf; break;
        case Sense::kGreaterEqual: slack_lo[i] = -kInf; slack_hi[i] = 0.0; break;
        case Sense::kEqual: slack_lo[i] = 0.0; slack_hi[i] = 0.0; break;
      }
      if (residual[i] < slack_lo[i] - tol_.feasibility) {
        art_sign[i] = -1;
      } else if (residual[i] > slack_hi[i] + tol_.feasibility) {
        art_sign[i] = 1;
      }
      if (art_sign[i] != 0) ++num_artificials_;
    }

    nt_ = n_ + m_ + num_artificials_;
    tab_.assign(static_cast<std::size_t>(m_) * nt_, 0.0);
    lo_.resize(nt_);
    hi_.resize(nt_);
    x_.resize(nt_, 0.0);
    state_.assign(nt_, ColState::kAtLower);
    basis_.assign(m_, -1);
    cost_.assign(nt_, 0.0);
    d_.assign(nt_, 0.0);

    for (int j = 0; j < n_; ++j) {
      if (lo_[j] == hi_[j]) {
        state_[j] = ColState::kFixed;
      } else if (std::isfinite(lo_[j])) {
        state_[j] = ColState::kAtLower;
      } else if (std::isfinite(hi_[j])) {
        state_[j] = ColState::kAtUpper;
      } else {
        state_[j] = ColState::kFree;
      }
    }

    int next_art = n_ + m_;
    for (int i = 0; i < m_; ++i) {
      for (const Term& t : p_->rows[i].terms) at(i, t.col) += t.coeff;
      const int s = n_ + i;
      at(i, s) = 1.0;
      lo_[s] = slack_lo[i];
      hi_[s] = slack_hi[i];
      if (art_sign[i] == 0) {
        x_[s] = std::clamp(residual[i], slack_lo[i], slack_hi[i]);
        state_[s] = ColState::kBasic;
        basis_[i] = s;
        continue;
      }
      // Slack parks at the violated bound; the artificial absorbs the rest.
      const double parked = art_sign[i] > 0 ? slack_hi[i] : slack_lo[i];
      x_[s] = parked;
      state_[s] = slack_lo[i] == slack_hi[i]
                      ? ColState::kFixed
                      : (art_sign[i] > 0 ? ColState::kAtUpper : ColState::kAtLower);
      const int a = next_art++;
      at(i, a) = art_sign[i];
      lo_[a] = 0.0;
      hi_[a] = kInf;
      x_[a] = std::abs(residual[i] - parked);
      state_[a] = ColState::kBasic;
      basis_[i] = a;
      if (art_sign[i] < 0) {
        double* r = &tab_[static_cast<std::size_t>(i) * nt_];
        for (int j = 0; j < nt_; ++j) r[j] = -r[j];
      }
    }
  }

  void recompute_reduced_costs() {
    d_ = cost_;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* r = &tab_[static_cast<std::size_t>(i) * nt_];
      for (int j = 0; j < nt_; ++j) d_[j] -= cb * r[j];
    }
    for (int i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
  }

  // Returns the entering column and its direction (+1 up, -1 down), or -1.
  int price(bool bland, int* dir) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < nt_; ++j) {
      const ColState st = state_[j];
      if (st == ColState::kBasic || st == ColState::kFixed) continue;
      const double dj = d_[j];
      int dj_dir = 0;
      if (dj < -tol_.optimality &&
          (st == ColState::kAtLower || st == ColState::kFree)) {
        dj_dir = 1;
      } else if (dj > tol_.optimality &&
                 (st == ColState::kAtUpper || st == ColState::kFree)) {
        dj_dir = -1;
      }
      if (dj_dir == 0) continue;
      if (bland) {
        *dir = dj_dir;
        return j;
      }
      const double score = std::abs(dj);
      if (score > best_score) {
        best_score = score;
        best = j;
        *dir = dj_dir;
      }
    }
    return best;
  }

  // Step limit imposed by basic row i when the entering column moves by
  // `dir`; kInf when the row does not block.
  double row_limit(int i, double alpha, int dir, double slack) const {
    const int b = basis_[i];
    const double rate = -dir * alpha;
    if (rate < 0.0) {
      if (!std::isfinite(lo_[b])) return kInf;
      return std::max(0.0, (x_[b] - lo_[b] + slack) / -rate);
    }
    if (!std::isfinite(hi_[b])) return kInf;
    return std::max(0.0, (hi_[b] - x_[b] + slack) / rate);
  }

  SolveStatus iterate() {
    int degenerate_streak = 0;
    const long max_iter = 200L * (m_ + nt_) + 10000;
    while (true) {
      if (iterations_ > max_iter) return SolveStatus::kNumericError;
      const bool bland = degenerate_streak >= kDegenerateStreakLimit;
      int dir = 0;
      const int q = price(bland, &dir);
      if (q < 0) return SolveStatus::kOptimal;
      ++iterations_;

      const double flip =
          (std::isfinite(lo_[q]) && std::isfinite(hi_[q])) ? hi_[q] - lo_[q] : kInf;
      int leave = -1;
      double step = flip;
      if (bland) {
        for (int i = 0; i < m_; ++i) {
          const double a = at_c(i, q);
          if (std::abs(a) <= tol_.pivot) continue;
          const double lim = row_limit(i, a, dir, 0.0);
          if (lim < step || (lim == step && leave >= 0 && basis_[i] < basis_[leave])) {
            step = lim;
            leave = i;
          }
        }
      } else {
        // Harris pass 1: loosest bound within tolerance.
        double relaxed = flip;
        for (int i = 0; i < m_; ++i) {
          const double a = at_c(i, q);
          if (std::abs(a) <= tol_.pivot) continue;
          relaxed = std::min(relaxed, row_limit(i, a, dir, tol_.feasibility));
        }
        // Pass 2: largest pivot among rows that block within `relaxed`.
        double best_alpha = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double a = at_c(i, q);
          if (std::abs(a) <= tol_.pivot) continue;
          const double lim = row_limit(i, a, dir, 0.0);
          if (lim <= relaxed && std::abs(a) > best_alpha) {
            best_alpha = std::abs(a);
            leave = i;
            step = lim;
          }
        }
        if (leave >= 0 && flip <= step) {
          leave = -1;
          step = flip;
        }
      }
      if (!std::isfinite(step)) return SolveStatus::kUnbounded;

      degenerate_streak = step > tol_.feasibility * 1e-3 ? 0 : degenerate_streak + 1;

      // Move along the edge.
      if (step > 0.0) {
        x_[q] += dir * step;
        for (int i = 0; i < m_; ++i) {
          const double a = at_c(i, q);
          if (a != 0.0) x_[basis_[i]] -= dir * a * step;
        }
      }
      if (leave < 0) {
        if (dir > 0) {
          x_[q] = hi_[q];
          state_[q] = ColState::kAtUpper;
        } else {
          x_[q] = lo_[q];
          state_[q] = ColState::kAtLower;
        }
        continue;
      }
      const int b = basis_[leave];
      const double rate = -dir * at_c(leave, q);
      if (rate < 0.0) {
        x_[b] = lo_[b];
        state_[b] = lo_[b] == hi_[b] ? ColState::kFixed : ColState::kAtLower;
      } else {
        x_[b] = hi_[b];
        state_[b] = lo_[b] == hi_[b] ? ColState::kFixed : ColState::kAtUpper;
      }
      pivot(leave, q);
    }
  }

  double at_c(int i, int j) const {
    return tab_[static_cast<std::size_t>(i) * nt_ + j];
  }

  void pivot(int r, int q) {
    double* prow = &tab_[static_cast<std::size_t>(r) * nt_];
    const double inv = 1.0 / prow[q];
    nz_.clear();
    for (int j = 0; j < nt_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        if (std::abs(prow[j]) < 1e-14) {
          prow[j] = 0.0;
        } else {
          nz_.push_back(j);
        }
      }
    }
    prow[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[static_cast<std::size_t>(i) * nt_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j : nz_) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double fd = d_[q];
    if (fd != 0.0) {
      for (int j : nz_) d_[j] -= fd * prow[j];
    }
    d_[q] = 0.0;
    state_[q] = ColState::kBasic;
    basis_[r] = q;
  }

  const MilpProblem* p_;
  Tolerances tol_;
  int m_ = 0;
  int n_ = 0;
  int nt_ = 0;
  int num_artificials_ = 0;
  bool bounds_infeasible_ = false;
  double rhs_scale_ = 0.0;
  long iterations_ = 0;
  std::vector<double> tab_;
  std::vector<double> lo_, hi_, x_, cost_, d_;
  std::vector<ColState> state_;
  std::vector<int> basis_;
  std::vector<int> nz_;
};

}  // namespace

LpResult solve_bounded_lp(const MilpProblem& p, std::span<const double> lo,
                          std::span<const double> hi, const Tolerances& tol) {
  DenseSimplex s(p, lo, hi, tol);
  return s.run();
}

struct WarmLp::Impl {
  Impl(const MilpProblem& p, const Tolerances& t)
      : problem(p), tol(t), root(p, p.lower, p.upper, t), work(root) {}

  // True when [lo, hi] lies inside the bounds of the last optimal work solve.
  bool tightens_work(std::span<const double> lo, std::span<const double> hi) const {
    if (!work_optimal) return false;
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (lo[j] < work_lo[j] || hi[j] > work_hi[j]) return false;
    }
    return true;
  }

  const MilpProblem& problem;
  Tolerances tol;
  DenseSimplex root;
  DenseSimplex work;
  bool warm = false;
  bool work_optimal = false;
  std::vector<double> work_lo, work_hi;
};

WarmLp::WarmLp(const MilpProblem& p, const Tolerances& tol)
    : impl_(std::make_unique<Impl>(p, tol)) {}

WarmLp::~WarmLp() = default;

LpResult WarmLp::solve_root() {
  LpResult r = impl_->root.run();
  impl_->warm = r.status == SolveStatus::kOptimal;
  impl_->work_optimal = false;
  return r;
}

LpResult WarmLp::solve(std::span<const double> lo, std::span<const double> hi) {
  Impl& im = *impl_;
  if (!im.warm) return solve_bounded_lp(im.problem, lo, hi, im.tol);
  // Plunge from the previous node when possible; otherwise restart at the root.
  if (!im.tightens_work(lo, hi)) im.work = im.root;
  LpResult r = im.work.reoptimize(lo, hi);
  im.work_optimal = r.status == SolveStatus::kOptimal;
  if (r.status == SolveStatus::kNumericError) {
    const long spent = r.iterations;
    r = solve_bounded_lp(im.problem, lo, hi, im.tol);
    r.iterations += spent;
  }
  if (im.work_optimal) {
    im.work_lo.assign(lo.begin(), lo.end());
    im.work_hi.assign(hi.begin(), hi.end());
  }
  return r;
}

}  // namespace hems::milp::internal
