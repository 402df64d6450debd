#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "anarchy/errors.hpp"
#include "anarchy/matrix.hpp"

namespace anarchy {

/// Finite candidate declaration sets, one ascending list per (machine, task).
/// Discretizes the continuous strategy space for regret/equilibrium search.
struct BidGrid {
  std::size_t n = 0, m = 0;
  double factor = 0.0;  // geometric spacing g > 1
  int span = 0;         // exponents -span..span around the true time
  std::vector<double> pivots;
  std::vector<std::vector<double>> candidates;  // index i*m + j

  const std::vector<double>& at(std::size_t i, std::size_t j) const {
    return candidates[i * m + j];
  }

  /// Number of full declaration profiles on the grid, clamped at `cap` + 1.
  std::uint64_t profile_count(std::uint64_t cap) const {
    std::uint64_t total = 1;
    for (const auto& c : candidates) {
      total *= static_cast<std::uint64_t>(c.size());
      if (total > cap) return cap + 1;
    }
    return total;
  }

  /// Number of row deviations for one machine, clamped at `cap` + 1.
  std::uint64_t row_count(std::size_t i, std::uint64_t cap) const {
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < m; ++j) {
      total *= static_cast<std::uint64_t>(at(i, j).size());
      if (total > cap) return cap + 1;
    }
    return total;
  }
};

/// Geometric grid {t_ij * factor^p : p = -span..span} per cell, plus the given
/// pivot values in every cell, deduplicated and sorted ascending.
inline BidGrid build_grid(const CostMatrix& truth, double factor, int span,
                          const std::vector<double>& pivots = {}) {
  if (factor <= 1.0) throw input_error("grid factor must exceed 1");
  if (span < 1) throw input_error("grid span must be at least 1");
  for (double p : pivots)
    if (!(p > 0.0)) throw input_error("grid pivots must be positive");

  BidGrid g;
  g.n = truth.machines();
  g.m = truth.tasks();
  g.factor = factor;
  g.span = span;
  g.pivots = pivots;
  g.candidates.resize(g.n * g.m);
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j < g.m; ++j) {
      const double t = truth.at(i, j);
      if (!(t > 0.0)) throw input_error("grid construction needs positive true times");
      std::vector<double> c;
      c.reserve(2 * span + 1 + pivots.size());
      double up = t, down = t;
      c.push_back(t);  // factor^0 keeps the true time exactly
      for (int p = 1; p <= span; ++p) {
        up *= factor;
        down /= factor;
        c.push_back(up);
        c.push_back(down);
      }
      c.insert(c.end(), pivots.begin(), pivots.end());
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      g.candidates[i * g.m + j] = std::move(c);
    }
  }
  return g;
}

}  // namespace anarchy
