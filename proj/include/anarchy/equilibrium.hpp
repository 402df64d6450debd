#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "anarchy/core.hpp"
#include "anarchy/errors.hpp"
#include "anarchy/grid.hpp"
#include "anarchy/matrix.hpp"
#include "anarchy/mechanisms.hpp"
#include "anarchy/rng.hpp"

namespace anarchy {

inline constexpr std::uint64_t kProfileCap = 10'000'000;

/// Scale-aware default equilibrium tolerance.
inline double default_eps(const CostMatrix& truth) { return 1e-9 * truth.max_entry(); }

/// Pivot declarations that single-task equilibria of the parametrized rules
/// are pinned to: {t_min, c*t_min, L*c*t_min} for every task's minimum true
/// cost.
inline std::vector<double> equilibrium_pivots(const CostMatrix& truth, const AlgParams& params) {
  std::vector<double> p;
  for (std::size_t j = 0; j < truth.tasks(); ++j) {
    double tmin = truth.at(0, j);
    for (std::size_t i = 1; i < truth.machines(); ++i) tmin = std::min(tmin, truth.at(i, j));
    p.push_back(tmin);
    p.push_back(params.c * tmin);
    p.push_back(params.L * params.c * tmin);
  }
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

struct RegretReport {
  std::size_t machine = 0;
  double regret = 0.0;
  std::vector<double> best_deviation;
};

namespace detail {

inline double profile_cost(const AllocationRule& rule, const CostMatrix& truth,
                           const CostMatrix& decl, std::size_t machine) {
  const AllocationMatrix a = rule(decl);
  double c = 0.0;
  for (std::size_t j = 0; j < decl.tasks(); ++j)
    c += a.at(machine, j) * std::max(decl.at(machine, j), truth.at(machine, j));
  return c;
}

}  // namespace detail

/// Definition path: the machine's whole declaration row is replaced by every
/// combination of grid candidates; regret = current cost - best attainable.
inline RegretReport best_response_regret_rows(const AllocationRule& rule, const CostMatrix& truth,
                                              const CostMatrix& profile, std::size_t machine,
                                              const BidGrid& grid) {
  const std::size_t m = profile.tasks();
  if (grid.row_count(machine, kProfileCap) > kProfileCap)
    throw capacity_error("best_response_regret: deviation grid exceeds 10^7 rows");
  const double current = detail::profile_cost(rule, truth, profile, machine);

  CostMatrix work = profile;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_row;
  std::vector<std::size_t> idx(m, 0);
  while (true) {
    for (std::size_t j = 0; j < m; ++j) work.set(machine, j, grid.at(machine, j)[idx[j]]);
    const double c = detail::profile_cost(rule, truth, work, machine);
    if (c < best) {
      best = c;
      best_row = work.row(machine);
    }
    std::size_t j = 0;
    while (j < m && ++idx[j] == grid.at(machine, j).size()) idx[j++] = 0;
    if (j == m) break;
  }
  return RegretReport{machine, current - best, std::move(best_row)};
}

/// Best-response regret of one machine at a declaration profile. For
/// task-independent rules the row search separates into per-task minima,
/// which is equivalent to the row enumeration and much cheaper. A single
/// machine has no competitive deviation: its regret is defined as 0.
inline RegretReport best_response_regret(const AllocationRule& rule, const CostMatrix& truth,
                                         const CostMatrix& profile, std::size_t machine,
                                         const BidGrid& grid) {
  if (machine >= profile.machines()) throw input_error("machine index out of range");
  if (profile.machines() == 1) return RegretReport{machine, 0.0, profile.row(machine)};
  if (!rule.task_independent()) return best_response_regret_rows(rule, truth, profile, machine, grid);

  const std::size_t m = profile.tasks();
  const SingleTaskRule& single = *rule.single;
  double current = 0.0, best = 0.0;
  std::vector<double> best_row(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> col = profile.column(j);
    const double tij = truth.at(machine, j);
    current += single.apply(col)[machine] * std::max(profile.at(machine, j), tij);
    double best_j = std::numeric_limits<double>::infinity();
    double best_x = 0.0;
    for (double x : grid.at(machine, j)) {
      col[machine] = x;
      const double c = single.apply(col)[machine] * std::max(x, tij);
      if (c < best_j) {
        best_j = c;
        best_x = x;
      }
    }
    best += best_j;
    best_row[j] = best_x;
  }
  return RegretReport{machine, current - best, std::move(best_row)};
}

inline bool is_pure_equilibrium(const AllocationRule& rule, const CostMatrix& truth,
                                const CostMatrix& profile, const BidGrid& grid, double eps) {
  for (std::size_t i = 0; i < profile.machines(); ++i)
    if (best_response_regret(rule, truth, profile, i, grid).regret > eps) return false;
  return true;
}

struct EquilibriumSet {
  struct Entry {
    CostMatrix profile;
    double makespan;
  };
  std::vector<Entry> entries;
  CostMatrix truth;
  BidGrid grid;
  double eps = 0.0;
};

/// All grid profiles whose maximum regret is at most eps, each with its exact
/// expected makespan.
inline EquilibriumSet enumerate_pure_equilibria(const AllocationRule& rule, const CostMatrix& truth,
                                                const BidGrid& grid, double eps) {
  if (grid.profile_count(kProfileCap) > kProfileCap)
    throw capacity_error("enumerate_pure_equilibria: grid exceeds 10^7 profiles");
  const std::size_t n = truth.machines(), m = truth.tasks();
  EquilibriumSet out{{}, truth, grid, eps};

  std::vector<std::size_t> idx(n * m, 0);
  CostMatrix profile = truth;  // overwritten cell by cell
  while (true) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) profile.set(i, j, grid.at(i, j)[idx[i * m + j]]);
    if (is_pure_equilibrium(rule, truth, profile, grid, eps)) {
      const double mk = exact_expected_makespan(rule(profile), profile, truth).value;
      out.entries.push_back({profile, mk});
    }
    std::size_t c = 0;
    while (c < n * m && ++idx[c] == grid.candidates[c].size()) idx[c++] = 0;
    if (c == n * m) break;
  }
  return out;
}

/// Worst-equilibrium makespan over the centralized integral optimum.
inline double pure_poa(const AllocationRule& rule, const CostMatrix& truth, const BidGrid& grid,
                       double eps) {
  const EquilibriumSet set = enumerate_pure_equilibria(rule, truth, grid, eps);
  if (set.entries.empty())
    throw analysis_error(
        "pure_poa: no equilibrium found on the grid; refine it (smaller factor, larger span, or "
        "pivot values)");
  double worst = 0.0;
  for (const auto& e : set.entries) worst = std::max(worst, e.makespan);
  return worst / optimal_integral_makespan(truth).makespan;
}

/// The explicit single-task equilibrium: the (lowest-index) truly fastest
/// machine bids its true cost, every other machine k bids
/// max{L*c*t_min, t_k}.
inline CostMatrix analytic_equilibrium_single_task(const std::vector<double>& truth,
                                                   const AlgParams& params) {
  if (truth.empty()) throw input_error("analytic_equilibrium_single_task: empty instance");
  AlgParams p = params;
  p.n = truth.size();
  p.validate();
  const std::size_t star =
      static_cast<std::size_t>(std::min_element(truth.begin(), truth.end()) - truth.begin());
  const double t_min = truth[star];
  std::vector<double> decl(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k)
    decl[k] = (k == star) ? t_min : std::max(p.L * p.c * t_min, truth[k]);
  return CostMatrix::single_task(decl);
}

/// Structural predicates every exact single-task equilibrium of the
/// parametrized rules satisfies. `equality_tol` loosens only the min-bid
/// equality (one grid step at grid resolution); the rest are exact
/// comparisons. For n = 1 all predicates hold vacuously.
inline std::map<std::string, bool> claim_predicates(const CostMatrix& profile,
                                                    const CostMatrix& truth,
                                                    const AlgParams& params,
                                                    double equality_tol = 0.0) {
  if (profile.tasks() != 1 || truth.tasks() != 1)
    throw input_error("claim_predicates: single-task profiles only");
  detail::require_same_shape(profile.machines(), 1, truth.machines(), 1, "claim_predicates");
  const std::size_t n = profile.machines();
  std::map<std::string, bool> out;
  if (n == 1) {
    out["sec_geq_c_min"] = true;
    out["no_underbid_outside_min"] = true;
    out["unique_min"] = true;
    out["min_bid_formula"] = true;
    out["min_bidder_truly_fastest"] = true;
    return out;
  }
  const MinSecStats s = min_sec_stats(profile.column(0));
  const std::size_t star = s.min_set.front();

  out["sec_geq_c_min"] = !s.sec_set.empty() && s.t_sec >= params.c * s.t_min;
  bool no_underbid = true;
  for (std::size_t i = 0; i < n; ++i)
    if (profile.at(i, 0) != s.t_min && profile.at(i, 0) < truth.at(i, 0)) no_underbid = false;
  out["no_underbid_outside_min"] = no_underbid;
  out["unique_min"] = (s.n_min == 1);
  const double target = std::min(truth.at(star, 0), s.t_sec / params.c);
  out["min_bid_formula"] = std::abs(s.t_min - target) <= equality_tol;
  bool fastest = true;
  for (std::size_t k = 0; k < n; ++k)
    if (truth.at(star, 0) > truth.at(k, 0)) fastest = false;
  out["min_bidder_truly_fastest"] = fastest;
  return out;
}

/// Mixed profile supporting a fixed assignment under the greedy rule: the
/// designated machine of task j bids T_j = its true cost; every opponent
/// draws a bid above T_j from F_j(x) = 1 - (T_j/x)^(1/(n-1)).
struct MixedGreedyProfile {
  std::size_t n = 0, m = 0;
  std::vector<std::size_t> designated;   // task -> machine
  std::vector<double> deterministic_bid;  // T_j

  double cdf(std::size_t j, double x) const {
    if (n < 2) throw input_error("MixedGreedyProfile: no opponent distribution for n = 1");
    const double T = deterministic_bid[j];
    if (x <= T) return 0.0;
    return 1.0 - std::pow(T / x, 1.0 / static_cast<double>(n - 1));
  }

  /// Inverse transform: x = T * u^-(n-1), u uniform on the open (0,1);
  /// strictly above T, never equal.
  double sample_opponent(std::size_t j, double u) const {
    if (n < 2) throw input_error("MixedGreedyProfile: no opponent distribution for n = 1");
    return deterministic_bid[j] * std::pow(u, -static_cast<double>(n - 1));
  }
};

inline MixedGreedyProfile greedy_mixed_profile(const CostMatrix& truth,
                                               const std::vector<std::size_t>& assignment) {
  if (assignment.size() != truth.tasks())
    throw input_error("greedy_mixed_profile: assignment must map every task");
  MixedGreedyProfile p;
  p.n = truth.machines();
  p.m = truth.tasks();
  p.designated = assignment;
  p.deterministic_bid.resize(p.m);
  for (std::size_t j = 0; j < p.m; ++j) {
    if (assignment[j] >= p.n) throw input_error("greedy_mixed_profile: machine index out of range");
    const double T = truth.at(assignment[j], j);
    if (p.n >= 2 && !(T > 0.0))
      throw input_error("greedy_mixed_profile: designated true costs must be positive");
    p.deterministic_bid[j] = T;
  }
  return p;
}

struct GreedyDeviationValue {
  double min_probability;  // (1-F(x*))^(n-1) = T/x*
  double expected_cost;    // x* * min_probability = T, exactly
};

inline GreedyDeviationValue greedy_deviation_value(double T, double x_star, std::size_t n) {
  if (n < 2) throw input_error("greedy_deviation_value: needs at least two machines");
  if (!(T > 0.0) || !(x_star > T))
    throw input_error("greedy_deviation_value: requires x_star > T > 0");
  return GreedyDeviationValue{T / x_star, T};
}

/// Certificate that the mixed profile realizes the assignment and deters
/// deviations, produced by seeded sampling plus the analytic below-T check.
struct PosCertificate {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;

  bool realized_matches_assignment = false;  // greedy picked i*_j on every sample
  struct DeviationCheck {
    std::size_t task;
    std::size_t machine;  // the designated machine deviating upward
    double x_star;
    double estimate;   // MC min-probability
    double std_error;  // binomial, at the expected probability
    double expected;   // T_j / x*
    bool pass;
  };
  std::vector<DeviationCheck> deviations;
  bool underbid_never_gains = false;  // deviations below T_j, checked analytically

  double realized_makespan = 0.0;
  double optimal_makespan = 0.0;
  double ratio = 0.0;

  bool passed() const {
    if (!realized_matches_assignment || !underbid_never_gains) return false;
    for (const auto& d : deviations)
      if (!d.pass) return false;
    return true;
  }
};

/// Opponent draw streams are keyed by (seed, j*n + k, sample) so the
/// certificate is independent of evaluation order.
inline PosCertificate pos_certificate(const CostMatrix& truth,
                                      const std::vector<std::size_t>& assignment,
                                      std::uint64_t samples, std::uint64_t seed,
                                      const BidGrid& deviation_grid, double eps) {
  const std::size_t n = truth.machines(), m = truth.tasks();
  if (n < 2) throw input_error("pos_certificate: needs at least two machines");
  if (samples < 1) throw input_error("pos_certificate: needs at least one sample");
  if (samples > 50'000'000) throw capacity_error("pos_certificate: sample budget exceeds 5*10^7");
  const MixedGreedyProfile profile = greedy_mixed_profile(truth, assignment);

  PosCertificate cert;
  cert.samples = samples;
  cert.seed = seed;
  cert.eps = eps;

  bool all_match = true;
  std::vector<double> min_opponent_bid(samples);
  for (std::size_t j = 0; j < m; ++j) {
    const double T = profile.deterministic_bid[j];
    const std::size_t star = assignment[j];
    for (std::uint64_t s = 0; s < samples; ++s) {
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k) {
        if (k == star) continue;
        const double u = rng::uniform01(seed, j * n + k, s);
        mn = std::min(mn, profile.sample_opponent(j, u));
      }
      min_opponent_bid[s] = mn;
      if (!(mn > T)) all_match = false;  // tie or undercut: greedy would not pick i*_j
    }
    // upward deviations by the designated machine, from its grid row
    for (double x_star : deviation_grid.at(star, j)) {
      if (!(x_star > T)) continue;
      std::uint64_t wins = 0;
      for (std::uint64_t s = 0; s < samples; ++s)
        if (min_opponent_bid[s] > x_star) ++wins;
      const double estimate = static_cast<double>(wins) / static_cast<double>(samples);
      const double expected = greedy_deviation_value(T, x_star, n).min_probability;
      const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(samples));
      const bool pass = std::abs(estimate - expected) <= 4.0 * se + eps;
      cert.deviations.push_back({j, star, x_star, estimate, se, expected, pass});
    }
  }
  cert.realized_matches_assignment = all_match;

  // below-T deviations: the designated machine still pays max{x*, T_j} = T_j;
  // an opponent that undercuts wins at cost max{x*, t_kj} > 0, worse than its
  // current cost of 0 for positive times.
  bool underbid_ok = true;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != assignment[j] && !(truth.at(k, j) > 0.0)) underbid_ok = false;
  cert.underbid_never_gains = underbid_ok;

  std::vector<double> load(n, 0.0);
  for (std::size_t j = 0; j < m; ++j) load[assignment[j]] += profile.deterministic_bid[j];
  cert.realized_makespan = *std::max_element(load.begin(), load.end());
  cert.optimal_makespan = optimal_integral_makespan(truth).makespan;
  cert.ratio = cert.realized_makespan / cert.optimal_makespan;
  return cert;
}

}  // namespace anarchy
