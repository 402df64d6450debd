#include <catch2/catch_amalgamated.hpp>

#include "anarchy/lp.hpp"
#include "anarchy/experiments.hpp"
#include "support.hpp"

using namespace anarchy;
using Catch::Approx;

namespace {
CostMatrix mat(std::vector<std::vector<double>> rows) { return CostMatrix::from_rows(rows); }

double lp_load(const LpSolution& s, const CostMatrix& t, std::size_t i) {
  double l = 0.0;
  for (std::size_t j = 0; j < t.tasks(); ++j) l += s.alloc.at(i, j) * t.at(i, j);
  return l;
}
}  // namespace

TEST_CASE("solve_scheduling_lp on the reference instances") {
  const LpSolution s1 = solve_scheduling_lp(mat({{1}, {3}}));
  CHECK(s1.mu == Approx(0.75).margin(1e-9));
  CHECK(s1.alloc.at(0, 0) == Approx(0.75).margin(1e-9));
  CHECK(s1.alloc.at(1, 0) == Approx(0.25).margin(1e-9));

  const LpSolution s2 = solve_scheduling_lp(mat({{5, 2}}));
  CHECK(s2.mu == Approx(7.0).margin(1e-9));
  CHECK(s2.alloc.at(0, 0) == 1.0);
  CHECK(s2.alloc.at(0, 1) == 1.0);

  const LpSolution s3 = solve_scheduling_lp(mat({{1, 2}, {2, 1}}));
  CHECK(s3.mu == Approx(1.0).margin(1e-9));
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(lp_load(s3, mat({{1, 2}, {2, 1}}), i) == Approx(1.0).margin(1e-9));

  CHECK_THROWS_AS(solve_scheduling_lp(mat({{1, 0}, {1, 1}})), input_error);
}

TEST_CASE("lp_mechanism: equal declarations split the single task evenly in value") {
  const AllocationMatrix a = lp_mechanism(mat({{2}, {2}}));
  // mu must be t/2; any split achieving it is acceptable
  const LpSolution s = solve_scheduling_lp(mat({{2}, {2}}));
  CHECK(s.mu == Approx(1.0).margin(1e-9));
  CHECK(a.at(0, 0) + a.at(1, 0) == Approx(1.0).margin(1e-12));
}

TEST_CASE("single-task optimum equals the harmonic formula and the proportional makespan") {
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng::keyed(31, trial, 0) % 5;
    const CostMatrix t = random_instance(n, 1, 31, 100 + trial);
    double inv = 0.0;
    for (std::size_t i = 0; i < n; ++i) inv += 1.0 / t.at(i, 0);
    const LpSolution s = solve_scheduling_lp(t);
    CHECK(s.mu == Approx(1.0 / inv).margin(1e-9));
  }
}

TEST_CASE("lp optimum matches a dense fractional grid search on 2 x m instances") {
  for (std::uint64_t trial = 0; trial < 6; ++trial) {
    const CostMatrix t = random_instance(2, 2, 37, trial);
    const LpSolution s = solve_scheduling_lp(t);
    const double grid_best = oracle::fractional_optimum_2xm(t, 400);
    CHECK(s.mu <= grid_best + 1e-9);                            // grid can only overestimate
    CHECK(grid_best <= s.mu + 2.0 * t.max_entry() * (1.0 / 400) + 1e-9);  // by at most one step
  }
}

TEST_CASE("balanced workload and monotonicity") {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng::keyed(41, trial, 0) % 4;
    const std::size_t m = 1 + rng::keyed(41, trial, 1) % 4;
    const CostMatrix t = random_instance(n, m, 41, 100 + trial);
    const LpSolution s = solve_scheduling_lp(t);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(lp_load(s, t, i) == Approx(s.mu).margin(1e-9 * std::max(1.0, s.mu)));

    // pointwise increase cannot reduce the optimum
    CostMatrix bigger = t;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        bigger.set(i, j, t.at(i, j) * (1.0 + rng::uniform01(41, 7000 + trial, i * m + j)));
    CHECK(s.mu <= solve_scheduling_lp(bigger).mu + 1e-9);
  }
}

TEST_CASE("lp solution is deterministic bit for bit") {
  const CostMatrix t = random_instance(4, 4, 43, 0);
  const LpSolution a = solve_scheduling_lp(t);
  const LpSolution b = solve_scheduling_lp(t);
  CHECK(a.mu == b.mu);
  CHECK(a.alloc == b.alloc);
}

TEST_CASE("randomized interpretation stays within factor n of the fractional optimum") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng::keyed(47, trial, 0) % 3;
    const std::size_t m = 1 + rng::keyed(47, trial, 1) % 3;
    const CostMatrix t = random_instance(n, m, 47, 100 + trial);
    const LpSolution s = solve_scheduling_lp(t);
    const double mk = exact_expected_makespan(s.alloc, t, t).value;
    CHECK(mk <= static_cast<double>(n) * s.mu + 1e-9);
  }
}

TEST_CASE("lp_truthfulness_regret never finds a profitable grid deviation") {
  // truthful baseline on a fixed instance
  const CostMatrix t = mat({{1, 2}, {3, 1}});
  const BidGrid g = build_grid(t, 1.5, 3);
  for (std::size_t i = 0; i < 2; ++i) CHECK(lp_truthfulness_regret(t, t, i, g) <= 1e-9);

  // single machine: deviating up only raises cost
  const CostMatrix solo = mat({{2, 5}});
  const BidGrid gs = build_grid(solo, 1.5, 3);
  CHECK(lp_truthfulness_regret(solo, solo, 0, gs) <= 1e-9);

  // 3x3 with a 5-point grid and non-truthful opponents
  const CostMatrix t3 = random_instance(3, 3, 53, 0);
  const CostMatrix d3 = random_instance(3, 3, 53, 1);
  const BidGrid g3 = build_grid(t3, 1.5, 2);
  for (std::size_t i = 0; i < 3; ++i) CHECK(lp_truthfulness_regret(t3, d3, i, g3) <= 1e-9);
}
