#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "ctf/quantum/search.hpp"
#include "oracles.hpp"

using namespace ctf;
using namespace ctf::quantum;

namespace {

/// Marked-probability after m Grover iterations by explicit amplitude simulation.
double statevector_success(std::uint64_t n, std::uint64_t t, std::uint64_t m) {
  std::vector<double> amp(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (std::uint64_t it = 0; it < m; ++it) {
    for (std::uint64_t i = 0; i < t; ++i) amp[i] = -amp[i];
    double mean = 0.0;
    for (double a : amp) mean += a;
    mean /= static_cast<double>(n);
    for (double& a : amp) a = 2.0 * mean - a;
  }
  double p = 0.0;
  for (std::uint64_t i = 0; i < t; ++i) p += amp[i] * amp[i];
  return p;
}

}  // namespace

TEST(Grover, ClosedFormCases) {
  EXPECT_NEAR(grover_success_prob(4, 1, 1), 1.0, 1e-15);
  EXPECT_EQ(grover_success_prob(64, 0, 5), 0.0);
  EXPECT_NEAR(grover_success_prob(64, 64, 5), 1.0, 1e-15);
  EXPECT_NEAR(grover_success_prob(100, 7, 0), 0.07, 1e-15);
  EXPECT_EQ(optimal_iterations(4, 1), 1u);
  EXPECT_EQ(optimal_iterations(1024, 1), 25u);
}

TEST(Grover, SuccessProbabilityMatchesStatevector) {
  for (std::uint64_t n : {2u, 5u, 16u, 37u, 128u}) {
    for (std::uint64_t t = 0; t <= n; t += std::max<std::uint64_t>(1, n / 5)) {
      for (std::uint64_t m = 0; m < 12; ++m) {
        EXPECT_NEAR(grover_success_prob(n, t, m), statevector_success(n, t, m), 1e-12)
            << n << " " << t << " " << m;
      }
    }
  }
}

TEST(Grover, SampleFrequenciesAndUniformity) {
  const MarkedSetSpace space(20, {2, 3, 11});
  std::mt19937_64 rng(5);
  QueryLedger ledger;
  const int trials = 40000;
  std::map<std::uint64_t, int> counts;
  int marked = 0;
  for (int i = 0; i < trials; ++i) {
    const auto x = grover_sample(space, 2, rng, ledger);
    ++counts[x];
    marked += space.is_marked(x);
  }
  const double p = grover_success_prob(20, 3, 2);
  EXPECT_LT(std::abs(oracle::binomial_z(marked, trials, p)), 4.0);
  for (std::uint64_t i : {2u, 3u, 11u}) {
    EXPECT_LT(std::abs(oracle::binomial_z(counts[i], marked, 1.0 / 3.0)), 4.0);
  }
  for (std::uint64_t i = 0; i < 20; ++i) {
    if (space.is_marked(i)) continue;
    EXPECT_LT(std::abs(oracle::binomial_z(counts[i], trials - marked, 1.0 / 17.0)), 4.0);
  }
  EXPECT_EQ(ledger.oracle_calls, 2u * trials);
  EXPECT_EQ(ledger.diffusion_calls, 2u * trials);
}

TEST(Grover, ErrorBranchReturnsUnmarked) {
  const MarkedSetSpace space(4, {1});
  std::mt19937_64 rng(6);
  QueryLedger ledger;
  int marked = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) marked += space.is_marked(grover_sample(space, 1, rng, ledger, 0.25));
  EXPECT_LT(std::abs(oracle::binomial_z(marked, trials, 0.75)), 4.0);
}

TEST(Spaces, MarkedSetAgainstBruteForce) {
  const auto space = MarkedSetSpace::from_predicate(50, [](std::uint64_t i) { return i % 7 == 3; });
  EXPECT_EQ(space.marked_count(), 7u);
  std::mt19937_64 rng(7);
  std::map<std::uint64_t, int> seen;
  for (int i = 0; i < 20000; ++i) {
    const auto x = space.sample_unmarked(rng);
    ASSERT_LT(x, 50u);
    ASSERT_FALSE(space.is_marked(x));
    ++seen[x];
  }
  EXPECT_EQ(seen.size(), 43u);
  EXPECT_THROW(MarkedSetSpace(5, {5}), ConfigError);
}

TEST(Spaces, KeyedThresholdAndLift) {
  KeyedSpace space(10, {{1, 3.0}, {4, 1.0}, {7, 2.0}, {9, kInf}});
  EXPECT_EQ(space.finite_count(), 3u);
  EXPECT_EQ(space.marked_count(), 3u);
  space.set_threshold(2.0);
  EXPECT_EQ(space.marked_count(), 1u);
  EXPECT_TRUE(space.is_marked(4));
  EXPECT_FALSE(space.is_marked(7));
  EXPECT_EQ(space.argmin(), std::optional<std::uint64_t>(4));
  space.lift(4);
  EXPECT_EQ(space.marked_count(), 0u);
  EXPECT_EQ(space.key(4), kInf);
  EXPECT_EQ(space.argmin(), std::optional<std::uint64_t>(7));
  std::mt19937_64 rng(8);
  space.set_threshold(kInf);
  for (int i = 0; i < 2000; ++i) {
    const auto x = space.sample_unmarked(rng);
    ASSERT_LT(x, 10u);
    ASSERT_EQ(space.key(x), kInf);
  }
  EXPECT_THROW(KeyedSpace(3, {{1, 1.0}, {1, 2.0}}), ConfigError);
}

TEST(ExponentialSearch, AllMarkedCostsAtMostOneCall) {
  const auto space = MarkedSetSpace::from_predicate(1024, [](std::uint64_t) { return true; });
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    QueryLedger ledger;
    ASSERT_TRUE(exponential_search(space, rng, ledger).has_value());
    EXPECT_LE(ledger.oracle_calls, 1u);
  }
}

TEST(ExponentialSearch, NothingMarkedStopsAtCutoff) {
  const MarkedSetSpace space(4096, {});
  std::mt19937_64 rng(10);
  for (int i = 0; i < 20; ++i) {
    QueryLedger ledger;
    EXPECT_FALSE(exponential_search(space, rng, ledger).has_value());
    EXPECT_LE(ledger.oracle_calls, static_cast<std::uint64_t>(8.0 * 64.0));
  }
}

TEST(ExponentialSearch, SingleMarkedScalesAsRootN) {
  std::mt19937_64 rng(11);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::uint64_t n = 1u << 8; n <= (1u << 16); n <<= 2) {
    const MarkedSetSpace space(n, {n / 3});
    double total = 0.0;
    int found = 0;
    for (int i = 0; i < 400; ++i) {
      QueryLedger ledger;
      found += exponential_search(space, rng, ledger).has_value();
      total += static_cast<double>(ledger.oracle_calls);
    }
    EXPECT_GE(found, 360);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(total / 400.0));
  }
  double mx = 0, my = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / xs.size(), my += ys[i] / ys.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  EXPECT_NEAR(sxy / sxx, 0.5, 0.1);
}

TEST(Counting, ExactExtremes) {
  std::mt19937_64 rng(12);
  for (std::uint64_t n : {16u, 1000u}) {
    QueryLedger ledger;
    EXPECT_EQ(quantum_count(MarkedSetSpace(n, {}), rng, ledger).estimate, 0u);
    EXPECT_EQ(quantum_count(MarkedSetSpace::from_predicate(n, [](auto) { return true; }), rng, ledger)
                  .estimate,
              n);
  }
}

TEST(Counting, EstimatesAreUsuallyExact) {
  std::mt19937_64 rng(13);
  for (std::uint64_t n : {64u, 729u, 4096u}) {
    for (std::uint64_t t : {1u, 5u, 17u}) {
      std::vector<std::uint64_t> marked;
      for (std::uint64_t i = 0; i < t; ++i) marked.push_back(i * 3);
      const MarkedSetSpace space(n, marked);
      int exact = 0;
      for (int i = 0; i < 50; ++i) {
        QueryLedger ledger;
        const auto r = quantum_count(space, rng, ledger);
        exact += r.estimate == t;
        EXPECT_EQ(ledger.oracle_calls, 2 * r.register_size - std::bit_ceil(static_cast<std::uint64_t>(
                                                                  std::ceil(std::sqrt(double(n))))));
      }
      EXPECT_GE(exact, 38) << n << " " << t;
    }
  }
}

TEST(MinimumFinding, SmallKeysAndBudget) {
  std::mt19937_64 rng(14);
  int hits = 0;
  for (int i = 0; i < 200; ++i) {
    auto space = KeyedSpace::dense({3.0, 1.0, 2.0});
    QueryLedger ledger;
    const auto r = durr_hoyer_min(space, kInf, rng, ledger);
    ASSERT_TRUE(r.has_value());
    hits += *r == 1;
    EXPECT_LE(ledger.oracle_calls, static_cast<std::uint64_t>(std::ceil(22.5 * std::sqrt(3.0))));
  }
  EXPECT_GE(hits, 190);
  auto none = KeyedSpace(64, {{5, 4.0}});
  QueryLedger ledger;
  EXPECT_FALSE(durr_hoyer_min(none, 4.0, rng, ledger).has_value());
}

TEST(MinimumFinding, RandomKeysAgainstArgmin) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> key(0.0, 1.0);
  const std::uint64_t n = 1024;
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> keys(n);
    for (double& k : keys) k = key(rng);
    auto space = KeyedSpace::dense(keys);
    const auto truth = std::min_element(keys.begin(), keys.end()) - keys.begin();
    QueryLedger ledger;
    const auto r = durr_hoyer_min(space, kInf, rng, ledger);
    hits += r && *r == static_cast<std::uint64_t>(truth);
    EXPECT_LE(ledger.oracle_calls, 720u);
  }
  EXPECT_GE(hits, 50);
}

TEST(Search, EmptySpaceThrows) {
  std::mt19937_64 rng(16);
  QueryLedger ledger;
  EXPECT_THROW(grover_sample(MarkedSetSpace(0, {}), 1, rng, ledger), EmptySpaceError);
}
