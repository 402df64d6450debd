#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "anarchy/core.hpp"
#include "anarchy/errors.hpp"
#include "anarchy/grid.hpp"
#include "anarchy/matrix.hpp"

namespace anarchy {

/// Optimal solution of the fractional scheduling program:
///   minimize mu  s.t.  sum_i alpha[i][j] = 1 for every task j,
///                      sum_j alpha[i][j] t[i][j] <= mu for every machine i,
///                      alpha >= 0.
struct LpSolution {
  AllocationMatrix alloc;
  double mu;
};

namespace detail {

inline constexpr double kLpTol = 1e-9;      // feasibility tolerance
inline constexpr double kPivotTol = 1e-11;  // smallest acceptable pivot element

/// Dense tableau simplex, Bland's anti-cycling rule, fixed pivot order:
/// entering = lowest-index column with negative reduced cost, leaving =
/// lowest basic-variable index among minimum-ratio rows. Deterministic for
/// identical input bits.
class SimplexTableau {
 public:
  SimplexTableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), obj_(cols + 1, 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return a_[r * (cols_ + 1) + cols_]; }
  double rhs(std::size_t r) const { return a_[r * (cols_ + 1) + cols_]; }

  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  /// Loads the objective row for minimizing sum of cost[v]*x_v and prices out
  /// the current basis.
  void set_objective(const std::vector<double>& cost) {
    for (std::size_t c = 0; c <= cols_; ++c) obj_[c] = (c < cols_) ? cost[c] : 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) obj_[c] -= cb * a_[r * (cols_ + 1) + c];
    }
  }

  double objective_value() const { return -obj_[cols_]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    const double inv = 1.0 / p;
    for (std::size_t c = 0; c <= cols_; ++c) a_[row * (cols_ + 1) + c] *= inv;
    a_[row * (cols_ + 1) + col] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row) continue;
      const double f = at(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) a_[r * (cols_ + 1) + c] -= f * a_[row * (cols_ + 1) + c];
      a_[r * (cols_ + 1) + col] = 0.0;
    }
    const double f = obj_[col];
    if (f != 0.0) {
      for (std::size_t c = 0; c <= cols_; ++c) obj_[c] -= f * a_[row * (cols_ + 1) + c];
      obj_[col] = 0.0;
    }
    basis_[row] = col;
  }

  /// Runs phase iterations on columns [0, active_cols). Throws internal_error
  /// on iteration overrun.
  void optimize(std::size_t active_cols, const char* phase) {
    const std::size_t max_iter = 50000 + 200 * (rows_ + cols_);
    std::vector<std::string> trail;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      // Bland: first column with a negative reduced cost
      std::size_t enter = active_cols;
      for (std::size_t c = 0; c < active_cols; ++c) {
        if (obj_[c] < -kLpTol) {
          enter = c;
          break;
        }
      }
      if (enter == active_cols) return;  // optimal
      // ratio test
      std::size_t leave = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double col = at(r, enter);
        if (col > kPivotTol) {
          const double ratio = rhs(r) / col;
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol && (leave == rows_ || basis_[r] < basis_[leave]))) {
            best_ratio = ratio;
            leave = r;
          }
        }
      }
      if (leave == rows_)
        throw internal_error(std::string("simplex ") + phase + ": unbounded direction at column " +
                             std::to_string(enter));
      if (trail.size() >= 8) trail.erase(trail.begin());
      trail.push_back(std::to_string(iter) + ":in=" + std::to_string(enter) +
                      ",out=" + std::to_string(basis_[leave]));
      pivot(leave, enter);
    }
    std::ostringstream log;
    log << "simplex " << phase << " did not converge after " << max_iter << " iterations; last pivots:";
    for (const auto& t : trail) log << ' ' << t;
    throw internal_error(log.str());
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Solves the fractional scheduling LP with a self-contained two-phase primal
/// simplex. Variable layout: alpha[i][j] at i*m+j, mu at n*m, machine slacks
/// after that; phase-1 artificials cover the task equality rows.
inline LpSolution solve_scheduling_lp(const CostMatrix& times) {
  const std::size_t n = times.machines(), m = times.tasks();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!(times.at(i, j) > 0.0))
        throw input_error("solve_scheduling_lp requires strictly positive execution times");

  const std::size_t nm = n * m;
  const std::size_t mu_col = nm;
  const std::size_t slack0 = nm + 1;       // n machine slacks
  const std::size_t art0 = slack0 + n;     // m artificials (phase 1 only)
  const std::size_t cols = art0 + m;
  const std::size_t rows = m + n;

  detail::SimplexTableau t(rows, cols);
  // task rows: sum_i alpha[i][j] + a_j = 1
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) t.at(j, i * m + j) = 1.0;
    t.at(j, art0 + j) = 1.0;
    t.rhs(j) = 1.0;
    t.basis()[j] = art0 + j;
  }
  // machine rows: sum_j t[i][j] alpha[i][j] - mu + s_i = 0
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = m + i;
    for (std::size_t j = 0; j < m; ++j) t.at(r, i * m + j) = times.at(i, j);
    t.at(r, mu_col) = -1.0;
    t.at(r, slack0 + i) = 1.0;
    t.rhs(r) = 0.0;
    t.basis()[r] = slack0 + i;
  }

  // phase 1: minimize sum of artificials
  std::vector<double> cost1(cols, 0.0);
  for (std::size_t j = 0; j < m; ++j) cost1[art0 + j] = 1.0;
  t.set_objective(cost1);
  t.optimize(cols, "phase-1");
  if (t.objective_value() > detail::kLpTol)
    throw internal_error("simplex phase-1 ended with positive infeasibility " +
                         std::to_string(t.objective_value()));
  // drive zero-level artificials out of the basis
  for (std::size_t r = 0; r < rows; ++r) {
    if (t.basis()[r] < art0) continue;
    std::size_t enter = art0;
    for (std::size_t c = 0; c < art0; ++c) {
      if (std::abs(t.at(r, c)) > detail::kPivotTol) {
        enter = c;
        break;
      }
    }
    if (enter == art0)
      throw internal_error("simplex: artificial stuck in basis on a dependent row");
    t.pivot(r, enter);
  }

  // phase 2: minimize mu over the original columns
  std::vector<double> cost2(cols, 0.0);
  cost2[mu_col] = 1.0;
  t.set_objective(cost2);
  t.optimize(art0, "phase-2");

  std::vector<double> x(art0, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    if (t.basis()[r] < art0) x[t.basis()[r]] = t.rhs(r);

  const double mu = x[mu_col];
  std::vector<double> alpha(x.begin(), x.begin() + nm);
  for (double& v : alpha) {
    if (v < 0.0) {
      if (v < -detail::kLpTol) throw internal_error("simplex produced a negative allocation entry");
      v = 0.0;
    }
  }
  LpSolution sol{AllocationMatrix(n, m, std::move(alpha)), mu};
  // feasibility audit at the spec tolerance
  for (std::size_t i = 0; i < n; ++i) {
    double loadi = 0.0;
    for (std::size_t j = 0; j < m; ++j) loadi += sol.alloc.at(i, j) * times.at(i, j);
    if (loadi > mu + detail::kLpTol)
      throw internal_error("simplex solution violates the machine-load constraint");
  }
  return sol;
}

/// The LP mechanism: the optimal fractions, read either as allocation
/// probabilities (randomized mechanism) or fractions (fractional mechanism).
inline AllocationMatrix lp_mechanism(const CostMatrix& decl) {
  return solve_scheduling_lp(decl).alloc;
}

namespace detail {

inline double lp_machine_cost(const CostMatrix& decl, const CostMatrix& truth, std::size_t machine) {
  const AllocationMatrix a = lp_mechanism(decl);
  double c = 0.0;
  for (std::size_t j = 0; j < decl.tasks(); ++j)
    c += a.at(machine, j) * std::max(decl.at(machine, j), truth.at(machine, j));
  return c;
}

}  // namespace detail

/// Largest gain any grid deviation offers over truthful reporting, for one
/// machine against the other machines' declarations. A positive value
/// certifies a truthfulness violation.
inline double lp_truthfulness_regret(const CostMatrix& truth, const CostMatrix& decl,
                                     std::size_t machine, const BidGrid& grid) {
  if (machine >= truth.machines()) throw input_error("machine index out of range");
  detail::require_same_shape(truth.machines(), truth.tasks(), decl.machines(), decl.tasks(),
                             "lp_truthfulness_regret");
  const std::size_t m = truth.tasks();
  if (grid.row_count(machine, 10'000'000) > 10'000'000)
    throw capacity_error("lp_truthfulness_regret: deviation grid exceeds 10^7 rows");

  CostMatrix work = decl;
  work.set_row(machine, truth.row(machine));
  const double truthful_cost = detail::lp_machine_cost(work, truth, machine);

  double best = truthful_cost;
  std::vector<std::size_t> idx(m, 0);
  while (true) {
    for (std::size_t j = 0; j < m; ++j) work.set(machine, j, grid.at(machine, j)[idx[j]]);
    best = std::min(best, detail::lp_machine_cost(work, truth, machine));
    std::size_t j = 0;
    while (j < m && ++idx[j] == grid.at(machine, j).size()) idx[j++] = 0;
    if (j == m) break;
  }
  return truthful_cost - best;
}

}  // namespace anarchy
