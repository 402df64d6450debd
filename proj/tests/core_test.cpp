#include <catch2/catch_amalgamated.hpp>

#include "anarchy/core.hpp"
#include "anarchy/experiments.hpp"
#include "support.hpp"

using namespace anarchy;
using Catch::Approx;

namespace {
CostMatrix mat(std::vector<std::vector<double>> rows) { return CostMatrix::from_rows(rows); }
AllocationMatrix alloc2(std::vector<std::vector<double>> rows) {
  const std::size_t n = rows.size(), m = rows.front().size();
  std::vector<double> e;
  for (const auto& r : rows) e.insert(e.end(), r.begin(), r.end());
  return AllocationMatrix(n, m, std::move(e));
}
}  // namespace

TEST_CASE("effective_times is the pointwise maximum") {
  const EffectiveTimes e1 = effective_times(mat({{1}}), mat({{2}}));
  CHECK(e1.at(0, 0) == 2.0);

  const CostMatrix d = mat({{1, 4}, {3, 2}});
  const EffectiveTimes idem = effective_times(d, d);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(idem.at(i, j) == d.at(i, j));

  const EffectiveTimes e = effective_times(mat({{1, 4}, {3, 2}}), mat({{2, 1}, {3, 5}}));
  CHECK(e.at(0, 0) == 2.0);
  CHECK(e.at(0, 1) == 4.0);
  CHECK(e.at(1, 0) == 3.0);
  CHECK(e.at(1, 1) == 5.0);

  CHECK_THROWS_AS(effective_times(mat({{1}}), mat({{1, 2}})), input_error);
}

TEST_CASE("machine_costs follows the bound-by-declaration rule") {
  const MachineCosts c1 = machine_costs(alloc2({{1}, {0}}), mat({{1}, {4}}), mat({{2}, {1}}));
  CHECK(c1.c[0] == 2.0);
  CHECK(c1.c[1] == 0.0);

  const MachineCosts c2 =
      machine_costs(alloc2({{15.0 / 16}, {1.0 / 16}}), mat({{1}, {4}}), mat({{2}, {1}}));
  CHECK(c2.c[0] == Approx(15.0 / 8).margin(1e-15));
  CHECK(c2.c[1] == Approx(0.25).margin(1e-15));

  const CostMatrix ones = mat({{1, 1}, {1, 1}});
  const MachineCosts c3 = machine_costs(alloc2({{0.5, 0.5}, {0.5, 0.5}}), ones, ones);
  CHECK(c3.c[0] == 1.0);
  CHECK(c3.c[1] == 1.0);
}

TEST_CASE("social_welfare sums machine costs") {
  CHECK(social_welfare(MachineCosts{{2.0, 0.0}}) == 2.0);
  CHECK(social_welfare(MachineCosts{{15.0 / 8, 0.25}}) == Approx(17.0 / 8).margin(1e-15));
  const MachineCosts single = machine_costs(alloc2({{1}}), mat({{3}}), mat({{3}}));
  CHECK(social_welfare(single) == 3.0);
}

TEST_CASE("fractional_makespan is the maximum load") {
  const CostMatrix t13 = mat({{1}, {3}});
  CHECK(fractional_makespan(alloc2({{0.75}, {0.25}}), t13, t13) == 0.75);
  const CostMatrix t51 = mat({{5}, {1}});
  CHECK(fractional_makespan(alloc2({{1}, {0}}), t51, t51) == 5.0);
  const CostMatrix ones = mat({{1, 1}, {1, 1}});
  CHECK(fractional_makespan(alloc2({{0.5, 0.5}, {0.5, 0.5}}), ones, ones) == 1.0);
}

TEST_CASE("exact_expected_makespan matches the enumeration oracle") {
  const CostMatrix diag = mat({{1, 9}, {9, 2}});
  const MakespanEstimate e1 = exact_expected_makespan(alloc2({{1, 0}, {0, 1}}), diag, diag);
  CHECK(e1.value == 2.0);
  CHECK(e1.method == MakespanEstimate::Method::exact_enumeration);
  CHECK_FALSE(e1.std_error.has_value());

  const CostMatrix ones = mat({{1, 1}, {1, 1}});
  const AllocationMatrix half = alloc2({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(exact_expected_makespan(half, ones, ones).value == Approx(1.5).margin(1e-15));

  // single task: expected makespan equals social welfare
  const AllocationMatrix a = alloc2({{15.0 / 16}, {1.0 / 16}});
  const CostMatrix d = mat({{1}, {4}}), t = mat({{2}, {1}});
  CHECK(exact_expected_makespan(a, d, t).value == social_welfare(machine_costs(a, d, t)));
  CHECK(exact_expected_makespan(a, d, t).value == Approx(17.0 / 8).margin(1e-15));

  // random cross-checks against the independent odometer oracle
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng::keyed(7, trial, 0) % 3;
    const std::size_t m = 1 + rng::keyed(7, trial, 1) % 4;
    const CostMatrix truth = random_instance(n, m, 7, 10 + trial);
    const CostMatrix decl = random_instance(n, m, 7, 200 + trial);
    const AllocationMatrix al = oracle::random_allocation(n, m, 7, 300 + trial);
    CHECK(exact_expected_makespan(al, decl, truth).value ==
          Approx(oracle::expected_makespan(al, decl, truth)).margin(1e-12));
  }
}

TEST_CASE("exact_expected_makespan refuses blowups and names the sampler") {
  const std::size_t n = 10, m = 7;  // 10^7 outcomes
  const CostMatrix big(n, m, std::vector<double>(n * m, 1.0));
  std::vector<double> e(n * m, 1.0 / n);
  const AllocationMatrix a(n, m, std::move(e));
  try {
    exact_expected_makespan(a, big, big);
    FAIL("expected capacity_error");
  } catch (const capacity_error& err) {
    CHECK(std::string(err.what()).find("mc_expected_makespan") != std::string::npos);
  }
}

TEST_CASE("mc_expected_makespan: determinism, degenerate exactness, consistency") {
  const CostMatrix diag = mat({{1, 9}, {9, 2}});
  const MakespanEstimate det = mc_expected_makespan(alloc2({{1, 0}, {0, 1}}), diag, diag, 500, 42);
  CHECK(det.value == 2.0);
  CHECK(*det.std_error == 0.0);

  const CostMatrix ones = mat({{1, 1}, {1, 1}});
  const AllocationMatrix half = alloc2({{0.5, 0.5}, {0.5, 0.5}});
  const MakespanEstimate a = mc_expected_makespan(half, ones, ones, 100'000, 5);
  const MakespanEstimate b = mc_expected_makespan(half, ones, ones, 100'000, 5);
  CHECK(a.value == b.value);  // bitwise reproducible
  CHECK(std::abs(a.value - 1.5) <= 3.0 * *a.std_error + 1e-12);

  // |mc - exact| <= 4 stderr on >= 95% of 100 seeded trials
  const CostMatrix truth = random_instance(3, 3, 11, 1);
  const AllocationMatrix al = oracle::random_allocation(3, 3, 11, 2);
  const double exact = exact_expected_makespan(al, truth, truth).value;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const MakespanEstimate mc = mc_expected_makespan(al, truth, truth, 2000, seed);
    if (std::abs(mc.value - exact) <= 4.0 * *mc.std_error) ++ok;
  }
  CHECK(ok >= 95);
}

TEST_CASE("optimal_integral_makespan enumerates and breaks ties lexicographically") {
  const OptimalAssignment a1 = optimal_integral_makespan(mat({{1}, {3}}));
  CHECK(a1.makespan == 1.0);
  CHECK(a1.task_to_machine == std::vector<std::size_t>{0});

  const OptimalAssignment a2 = optimal_integral_makespan(mat({{1, 2}, {2, 1}}));
  CHECK(a2.makespan == 1.0);
  CHECK(a2.task_to_machine == std::vector<std::size_t>{0, 1});

  const OptimalAssignment a3 = optimal_integral_makespan(mat({{1, 1}, {1, 1}}));
  CHECK(a3.makespan == 1.0);
  CHECK(a3.task_to_machine == std::vector<std::size_t>{0, 1});  // lex-smallest split

  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const CostMatrix truth = random_instance(3, 4, 13, trial);
    CHECK(optimal_integral_makespan(truth).makespan ==
          Approx(oracle::optimal_makespan(truth)).margin(1e-15));
  }
}

TEST_CASE("objective sandwiches hold for random allocations") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng::keyed(17, trial, 0) % 4;
    const std::size_t m = 1 + rng::keyed(17, trial, 1) % 4;
    const CostMatrix truth = random_instance(n, m, 17, 100 + trial);
    const CostMatrix decl = random_instance(n, m, 17, 500 + trial);
    const AllocationMatrix al = oracle::random_allocation(n, m, 17, 900 + trial);

    const double mf = fractional_makespan(al, decl, truth);
    const double mk = exact_expected_makespan(al, decl, truth).value;
    const double w = social_welfare(machine_costs(al, decl, truth));
    const double nd = static_cast<double>(n);
    CHECK(mf <= mk + 1e-12);
    CHECK(mk <= nd * mf + 1e-12);
    CHECK(mk <= w + 1e-12);
    CHECK(w <= nd * mk + 1e-12);
    if (m == 1) CHECK(mk == w);  // single task: identical sums in identical order
  }
}
