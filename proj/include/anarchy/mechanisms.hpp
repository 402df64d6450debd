#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "anarchy/errors.hpp"
#include "anarchy/lp.hpp"
#include "anarchy/matrix.hpp"

namespace anarchy {

/// Parameters of the randomized single-task rules: L > 2(n-1) and c > 1.
struct AlgParams {
  double L = 4.0;
  double c = 1.25;
  std::size_t n = 2;

  void validate() const {
    if (n < 1) throw input_error("AlgParams: machine count must be at least 1");
    if (!(L > 2.0 * static_cast<double>(n - 1)))
      throw input_error("AlgParams: L must exceed 2(n-1)");
    if (!(c > 1.0)) throw input_error("AlgParams: c must exceed 1");
  }
};

/// Defaults when nothing is specified: L = 4(n-1) (at least 4), c = 1 + 1/L.
inline AlgParams default_alg_params(std::size_t n) {
  AlgParams p;
  p.n = n;
  p.L = std::max(4.0, 4.0 * static_cast<double>(n > 0 ? n - 1 : 0));
  p.c = 1.0 + 1.0 / p.L;
  return p;
}

/// Smallest and second-smallest distinct declarations with their index sets.
/// When all declarations are equal, t_sec = t_min and the second set is empty.
struct MinSecStats {
  double t_min = 0.0;
  double t_sec = 0.0;
  std::vector<std::size_t> min_set;
  std::vector<std::size_t> sec_set;
  std::size_t n_min = 0;
  std::size_t n_sec = 0;
};

inline MinSecStats min_sec_stats(const std::vector<double>& decl) {
  if (decl.empty()) throw input_error("min_sec_stats: empty declaration vector");
  for (double v : decl)
    if (!(v > 0.0) || !std::isfinite(v))
      throw input_error("min_sec_stats: declarations must be positive and finite");
  MinSecStats s;
  s.t_min = *std::min_element(decl.begin(), decl.end());
  double sec = std::numeric_limits<double>::infinity();
  for (double v : decl)
    if (v > s.t_min) sec = std::min(sec, v);
  s.t_sec = std::isfinite(sec) ? sec : s.t_min;
  for (std::size_t i = 0; i < decl.size(); ++i) {
    if (decl[i] == s.t_min) s.min_set.push_back(i);
    else if (decl[i] == s.t_sec) s.sec_set.push_back(i);
  }
  s.n_min = s.min_set.size();
  s.n_sec = s.sec_set.size();
  return s;
}

/// Two-machine single-task rule. With (lo, hi) the sorted declarations:
/// equal -> (1/2, 1/2); lo < hi < c*lo -> (1/L, 1-1/L);
/// hi >= c*lo -> (1 - (1/L)(lo/hi), (1/L)(lo/hi)). Returned in input order.
inline std::vector<double> alg2(const AlgParams& params, const std::vector<double>& decl) {
  if (decl.size() != 2) throw input_error("alg2 is defined for exactly two machines");
  AlgParams p = params;
  p.n = 2;
  p.validate();
  for (double v : decl)
    if (!(v > 0.0) || !std::isfinite(v))
      throw input_error("alg2: declarations must be positive and finite");

  if (decl[0] == decl[1]) return {0.5, 0.5};
  const std::size_t lo_i = decl[0] < decl[1] ? 0 : 1;
  const std::size_t hi_i = 1 - lo_i;
  const double lo = decl[lo_i], hi = decl[hi_i];
  std::vector<double> a(2);
  if (hi < p.c * lo) {
    a[lo_i] = 1.0 / p.L;
    a[hi_i] = 1.0 - 1.0 / p.L;
  } else {
    const double q = (lo / hi) / p.L;
    a[lo_i] = 1.0 - q;
    a[hi_i] = q;
  }
  return a;
}

/// General single-task rule for n >= 2 machines; the n = 2 rows coincide with
/// alg2. Case selection depends only on declaration ratios.
inline std::vector<double> algN(const AlgParams& params, const std::vector<double>& decl) {
  const std::size_t n = decl.size();
  if (n < 2) throw input_error("algN needs at least two machines");
  AlgParams p = params;
  p.n = n;
  p.validate();
  const MinSecStats s = min_sec_stats(decl);

  std::vector<double> a(n, 0.0);
  if (s.sec_set.empty()) {  // all declarations equal
    const double u = 1.0 / static_cast<double>(n);
    std::fill(a.begin(), a.end(), u);
    return a;
  }
  if (s.t_sec < p.c * s.t_min) {
    const double a_min = (1.0 / p.L) / static_cast<double>(s.n_min);
    const double a_sec = (1.0 - 1.0 / p.L) / static_cast<double>(s.n_sec);
    for (std::size_t i : s.min_set) a[i] = a_min;
    for (std::size_t i : s.sec_set) a[i] = a_sec;
    return a;
  }
  // t_sec >= c * t_min: every non-minimal machine gets t_min/(L * decl_i);
  // the remainder is split over the minimum declarers. The remainder is
  // positive because the removed mass is at most (n-1)/L < 1/2.
  double removed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (decl[i] == s.t_min) continue;
    a[i] = s.t_min / (p.L * decl[i]);
    removed += a[i];
  }
  const double a_min = (1.0 - removed) / static_cast<double>(s.n_min);
  for (std::size_t i : s.min_set) a[i] = a_min;
  return a;
}

/// Inverse-proportional shares: entry i = decl[i]^-1 / sum_k decl[k]^-1.
/// The same vector serves as fractions or as probabilities.
inline std::vector<double> proportional_single(const std::vector<double>& decl) {
  if (decl.empty()) throw input_error("proportional_single: empty declaration vector");
  double total = 0.0;
  for (double v : decl) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw input_error("proportional_single: declarations must be positive and finite");
    total += 1.0 / v;
  }
  std::vector<double> a(decl.size());
  for (std::size_t i = 0; i < decl.size(); ++i) a[i] = (1.0 / decl[i]) / total;
  return a;
}

/// Degenerate 0/1 rule: probability 1 on the minimum declaration, ties broken
/// by lowest machine index. Zero declarations are allowed.
inline std::vector<double> greedy_single(const std::vector<double>& decl) {
  if (decl.empty()) throw input_error("greedy_single: empty declaration vector");
  for (double v : decl)
    if (v < 0.0 || !std::isfinite(v))
      throw input_error("greedy_single: declarations must be nonnegative and finite");
  const std::size_t win =
      static_cast<std::size_t>(std::min_element(decl.begin(), decl.end()) - decl.begin());
  std::vector<double> a(decl.size(), 0.0);
  a[win] = 1.0;
  return a;
}

/// Uniform interface over the single-task rules, for per-task composition.
struct SingleTaskRule {
  enum class Kind { alg2, algN, proportional, greedy, lp_column };

  Kind kind = Kind::greedy;
  AlgParams params;  // used by alg2 / algN

  std::vector<double> apply(const std::vector<double>& decl) const {
    switch (kind) {
      case Kind::alg2:
        return alg2(params, decl);
      case Kind::algN:
        return algN(params, decl);
      case Kind::proportional:
        return proportional_single(decl);
      case Kind::greedy:
        return greedy_single(decl);
      case Kind::lp_column:
        return solve_scheduling_lp(CostMatrix::single_task(decl)).alloc.column(0);
    }
    throw input_error("SingleTaskRule: unknown kind");
  }

  std::string name() const {
    switch (kind) {
      case Kind::alg2: return "alg2";
      case Kind::algN: return "algN";
      case Kind::proportional: return "proportional";
      case Kind::greedy: return "greedy";
      case Kind::lp_column: return "lp-column";
    }
    return "?";
  }
};

/// Runs the single-task rule independently on every column; tasks are
/// statistically independent under the product allocation.
inline AllocationMatrix per_task_product(const SingleTaskRule& rule, const CostMatrix& decl) {
  std::vector<std::vector<double>> cols(decl.tasks());
  for (std::size_t j = 0; j < decl.tasks(); ++j) {
    try {
      cols[j] = rule.apply(decl.column(j));
    } catch (const input_error& e) {
      throw input_error("task " + std::to_string(j) + ": " + e.what());
    }
  }
  return AllocationMatrix::from_columns(decl.machines(), decl.tasks(), cols);
}

/// A mechanism as a whole-matrix allocation function. `single` is set for
/// task-independent rules and enables per-task regret decomposition.
struct AllocationRule {
  std::string name;
  std::optional<SingleTaskRule> single;
  std::function<AllocationMatrix(const CostMatrix&)> fn;

  AllocationMatrix operator()(const CostMatrix& decl) const { return fn(decl); }
  bool task_independent() const { return single.has_value(); }
};

inline AllocationRule make_rule(const SingleTaskRule& rule) {
  AllocationRule r;
  r.name = rule.name();
  r.single = rule;
  r.fn = [rule](const CostMatrix& decl) { return per_task_product(rule, decl); };
  return r;
}

inline AllocationRule make_lp_rule() {
  AllocationRule r;
  r.name = "lp";
  r.fn = [](const CostMatrix& decl) { return lp_mechanism(decl); };
  return r;
}

}  // namespace anarchy
