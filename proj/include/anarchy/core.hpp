#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "anarchy/errors.hpp"
#include "anarchy/matrix.hpp"
#include "anarchy/rng.hpp"

namespace anarchy {

/// Exact makespan enumeration and optimal-assignment search refuse instances
/// with more than this many joint outcomes.
inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

namespace detail {

inline void require_same_shape(std::size_t n1, std::size_t m1, std::size_t n2, std::size_t m2,
                               const char* what) {
  if (n1 != n2 || m1 != m2) throw input_error(std::string("dimension mismatch in ") + what);
}

/// n^m clamped at cap+1 to avoid overflow.
inline std::uint64_t joint_outcomes(std::size_t n, std::size_t m, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < m; ++j) {
    total *= static_cast<std::uint64_t>(n);
    if (total > cap) return cap + 1;
  }
  return total;
}

}  // namespace detail

inline EffectiveTimes effective_times(const CostMatrix& decl, const CostMatrix& truth) {
  detail::require_same_shape(decl.machines(), decl.tasks(), truth.machines(), truth.tasks(),
                             "effective_times");
  EffectiveTimes e;
  e.n = decl.machines();
  e.m = decl.tasks();
  e.entries.resize(e.n * e.m);
  for (std::size_t i = 0; i < e.n; ++i)
    for (std::size_t j = 0; j < e.m; ++j)
      e.entries[i * e.m + j] = std::max(decl.at(i, j), truth.at(i, j));
  return e;
}

/// C_i = sum_j a[i][j] * max{decl[i][j], truth[i][j]}.
inline MachineCosts machine_costs(const AllocationMatrix& alloc, const CostMatrix& decl,
                                  const CostMatrix& truth) {
  detail::require_same_shape(alloc.machines(), alloc.tasks(), decl.machines(), decl.tasks(),
                             "machine_costs");
  const EffectiveTimes eff = effective_times(decl, truth);
  MachineCosts out;
  out.c.resize(alloc.machines());
  for (std::size_t i = 0; i < alloc.machines(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < alloc.tasks(); ++j) s += alloc.at(i, j) * eff.at(i, j);
    out.c[i] = s;
  }
  return out;
}

inline double social_welfare(const MachineCosts& costs) {
  double w = 0.0;
  for (double v : costs.c) w += v;
  return w;
}

/// Divisible-task makespan: max over machines of their (fractional) load.
inline double fractional_makespan(const AllocationMatrix& alloc, const CostMatrix& decl,
                                  const CostMatrix& truth) {
  const MachineCosts c = machine_costs(alloc, decl, truth);
  double mx = 0.0;
  for (double v : c.c) mx = std::max(mx, v);
  return mx;
}

namespace detail {

/// Depth-first walk over joint assignments (tasks allocated independently per
/// column), accumulating prob * max-load at each leaf. Zero-probability
/// branches are pruned; they contribute exactly 0.
inline void expected_makespan_walk(const AllocationMatrix& alloc, const EffectiveTimes& eff,
                                   std::size_t task, double prob, std::vector<double>& load,
                                   double& acc) {
  const std::size_t n = alloc.machines();
  if (task == alloc.tasks()) {
    double mx = 0.0;
    for (double v : load) mx = std::max(mx, v);
    acc += prob * mx;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double p = alloc.at(i, task);
    if (p == 0.0) continue;
    load[i] += eff.at(i, task);
    expected_makespan_walk(alloc, eff, task + 1, prob * p, load, acc);
    load[i] -= eff.at(i, task);
  }
}

}  // namespace detail

/// Expectation of the integral makespan over all n^m joint assignments.
inline MakespanEstimate exact_expected_makespan(const AllocationMatrix& alloc,
                                                const CostMatrix& decl, const CostMatrix& truth) {
  detail::require_same_shape(alloc.machines(), alloc.tasks(), decl.machines(), decl.tasks(),
                             "exact_expected_makespan");
  const std::uint64_t outcomes =
      detail::joint_outcomes(alloc.machines(), alloc.tasks(), kEnumerationCap);
  if (outcomes > kEnumerationCap)
    throw capacity_error(
        "exact_expected_makespan: n^m exceeds the enumeration cap of 10^6; "
        "use mc_expected_makespan instead");
  const EffectiveTimes eff = effective_times(decl, truth);
  std::vector<double> load(alloc.machines(), 0.0);
  double acc = 0.0;
  detail::expected_makespan_walk(alloc, eff, 0, 1.0, load, acc);
  return MakespanEstimate::exact(acc);
}

/// Unbiased sample-mean estimate of the expected makespan. Draw s for task j
/// uses the uniform keyed by (seed, j, s), so the estimate depends only on the
/// seed, never on evaluation order.
inline MakespanEstimate mc_expected_makespan(const AllocationMatrix& alloc, const CostMatrix& decl,
                                             const CostMatrix& truth, std::uint64_t samples,
                                             std::uint64_t seed) {
  detail::require_same_shape(alloc.machines(), alloc.tasks(), decl.machines(), decl.tasks(),
                             "mc_expected_makespan");
  if (samples < 1) throw input_error("mc_expected_makespan needs at least one sample");
  const EffectiveTimes eff = effective_times(decl, truth);
  const std::size_t n = alloc.machines(), m = alloc.tasks();
  std::vector<double> load(n);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::fill(load.begin(), load.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double u = rng::uniform01(seed, j, s);
      // inverse CDF over the column; the last positive entry absorbs rounding
      double cum = 0.0;
      std::size_t pick = 0;
      bool picked = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = alloc.at(i, j);
        if (p == 0.0) continue;
        cum += p;
        pick = i;
        if (u <= cum) {
          picked = true;
          break;
        }
      }
      (void)picked;  // u > cum only by rounding; keep the last candidate
      load[pick] += eff.at(pick, j);
    }
    double mx = 0.0;
    for (double v : load) mx = std::max(mx, v);
    sum += mx;
    sumsq += mx * mx;
  }
  const double mean = sum / static_cast<double>(samples);
  double std_error = 0.0;
  if (samples > 1) {
    const double var =
        std::max(0.0, (sumsq - sum * mean) / static_cast<double>(samples - 1));
    std_error = std::sqrt(var / static_cast<double>(samples));
  }
  return MakespanEstimate::monte_carlo(mean, samples, std_error, seed);
}

struct OptimalAssignment {
  double makespan = 0.0;
  std::vector<std::size_t> task_to_machine;  // lexicographically smallest among ties
};

namespace detail {

inline void optimal_assignment_walk(const CostMatrix& truth, std::size_t task,
                                    std::vector<double>& load, std::vector<std::size_t>& pick,
                                    OptimalAssignment& best) {
  if (task == truth.tasks()) {
    double mx = 0.0;
    for (double v : load) mx = std::max(mx, v);
    // strict improvement keeps the first (lexicographically smallest) optimum
    if (mx < best.makespan) {
      best.makespan = mx;
      best.task_to_machine = pick;
    }
    return;
  }
  for (std::size_t i = 0; i < truth.machines(); ++i) {
    load[i] += truth.at(i, task);
    pick[task] = i;
    optimal_assignment_walk(truth, task + 1, load, pick, best);
    load[i] -= truth.at(i, task);
  }
}

}  // namespace detail

/// Minimum over all n^m integral assignments of the maximum machine load.
inline OptimalAssignment optimal_integral_makespan(const CostMatrix& truth) {
  const std::uint64_t outcomes =
      detail::joint_outcomes(truth.machines(), truth.tasks(), kEnumerationCap);
  if (outcomes > kEnumerationCap)
    throw capacity_error("optimal_integral_makespan: n^m exceeds the enumeration cap of 10^6");
  OptimalAssignment best;
  best.makespan = std::numeric_limits<double>::infinity();
  std::vector<double> load(truth.machines(), 0.0);
  std::vector<std::size_t> pick(truth.tasks(), 0);
  detail::optimal_assignment_walk(truth, 0, load, pick, best);
  return best;
}

}  // namespace anarchy
