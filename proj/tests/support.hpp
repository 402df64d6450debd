#pragma once

// Test-only oracles, kept independent of the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "anarchy/matrix.hpp"
#include "anarchy/rng.hpp"

namespace oracle {

/// Expected integral makespan by plain odometer enumeration over all n^m
/// joint assignments (no pruning, no recursion).
inline double expected_makespan(const anarchy::AllocationMatrix& alloc,
                                const anarchy::CostMatrix& decl, const anarchy::CostMatrix& truth) {
  const std::size_t n = alloc.machines(), m = alloc.tasks();
  std::vector<std::size_t> pick(m, 0);
  double acc = 0.0;
  while (true) {
    double prob = 1.0;
    std::vector<double> load(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      prob *= alloc.at(pick[j], j);
      load[pick[j]] += std::max(decl.at(pick[j], j), truth.at(pick[j], j));
    }
    acc += prob * *std::max_element(load.begin(), load.end());
    std::size_t j = 0;
    while (j < m && ++pick[j] == n) pick[j++] = 0;
    if (j == m) break;
  }
  return acc;
}

/// Brute-force optimal integral makespan by the same odometer.
inline double optimal_makespan(const anarchy::CostMatrix& truth) {
  const std::size_t n = truth.machines(), m = truth.tasks();
  std::vector<std::size_t> pick(m, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> load(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) load[pick[j]] += truth.at(pick[j], j);
    best = std::min(best, *std::max_element(load.begin(), load.end()));
    std::size_t j = 0;
    while (j < m && ++pick[j] == n) pick[j++] = 0;
    if (j == m) break;
  }
  return best;
}

/// Dense grid search over fractional allocations for a 2 x m instance
/// (alpha of machine 0 per task on a step grid). Returns the best makespan
/// found; it overestimates the optimum by at most m * max_t * step.
inline double fractional_optimum_2xm(const anarchy::CostMatrix& t, std::size_t steps) {
  const std::size_t m = t.tasks();
  std::vector<std::size_t> idx(m, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double l0 = 0.0, l1 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double a = static_cast<double>(idx[j]) / static_cast<double>(steps);
      l0 += a * t.at(0, j);
      l1 += (1.0 - a) * t.at(1, j);
    }
    best = std::min(best, std::max(l0, l1));
    std::size_t j = 0;
    while (j < m && ++idx[j] == steps + 1) idx[j++] = 0;
    if (j == m) break;
  }
  return best;
}

/// Kolmogorov-Smirnov distance between a sample and an analytic CDF.
template <typename Cdf>
inline double ks_distance(std::vector<double> sample, const Cdf& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

/// Seeded random column-stochastic allocation.
inline anarchy::AllocationMatrix random_allocation(std::size_t n, std::size_t m,
                                                   std::uint64_t seed, std::uint64_t stream) {
  std::vector<double> e(n * m);
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      e[i * m + j] = 0.05 + anarchy::rng::uniform01(seed, stream, i * m + j);
      sum += e[i * m + j];
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      e[i * m + j] /= sum;
      acc += e[i * m + j];
    }
    e[(n - 1) * m + j] = 1.0 - acc;  // exact column sum
  }
  return anarchy::AllocationMatrix(n, m, std::move(e));
}

}  // namespace oracle
