#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>
#include <set>

#include "hyflexa/sampling.hpp"

using namespace hyflexa;

namespace {

long long binomial(int n, int k) {
  long long r = 1;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

/// Empirical inclusion frequencies over draws with a fixed seed.
std::vector<double> inclusion_frequencies(const SamplingRule& rule, int draws,
                                          std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> count(static_cast<std::size_t>(rule.n_blocks), 0.0);
  for (int t = 0; t < draws; ++t) {
    for (int i : draw(rule, rng)) count[static_cast<std::size_t>(i)] += 1.0;
  }
  for (auto& c : count) c /= draws;
  return count;
}

void check_frequencies_within_4sd(const SamplingRule& rule, int draws = 100000,
                                  std::uint64_t seed = 2024) {
  const auto freq = inclusion_frequencies(rule, draws, seed);
  for (int i = 0; i < rule.n_blocks; ++i) {
    const double pi = inclusion_probability(rule, i);
    const double sd = std::sqrt(std::max(pi * (1.0 - pi), 0.0) / draws);
    INFO("rule block " << i << " freq " << freq[static_cast<std::size_t>(i)] << " expected " << pi);
    REQUIRE(std::abs(freq[static_cast<std::size_t>(i)] - pi) <= 4.0 * sd + 1e-12);
  }
}

}  // namespace

TEST_CASE("nice draws have exactly tau blocks") {
  auto rule = SamplingRule::nice(10, 3);
  SplitMix64 rng(1);
  for (int t = 0; t < 500; ++t) {
    const auto s = draw(rule, rng);
    REQUIRE(s.size() == 3);
    REQUIRE(std::set<int>(s.begin(), s.end()).size() == 3);
    for (int i : s) REQUIRE((i >= 0 && i < 10));
  }
}

TEST_CASE("sequential draws one block, fully parallel draws all") {
  auto seq = SamplingRule::sequential(6);
  SplitMix64 rng(2);
  for (int t = 0; t < 100; ++t) REQUIRE(draw(seq, rng).size() == 1);

  auto full = SamplingRule::fully_parallel(6);
  const auto s = draw(full, rng);
  REQUIRE(s == std::vector<int>({0, 1, 2, 3, 4, 5}));
}

TEST_CASE("nonoverlapping draws equal one partition part exactly") {
  auto rule = SamplingRule::nonoverlapping(7, {{0, 3}, {1, 2, 6}, {4, 5}});
  SplitMix64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto s = draw(rule, rng);
    const bool is_part = s == std::vector<int>({0, 3}) || s == std::vector<int>({1, 2, 6}) ||
                         s == std::vector<int>({4, 5});
    REQUIRE(is_part);
  }
}

TEST_CASE("inclusion probabilities") {
  CHECK(inclusion_probability(SamplingRule::uniform(100, 8.0), 17) == Catch::Approx(0.08));
  CHECK(inclusion_probability(SamplingRule::nice(10, 3), 0) == Catch::Approx(0.3));
  CHECK(inclusion_probability(SamplingRule::sequential(8), 5) == Catch::Approx(0.125));
  CHECK(inclusion_probability(SamplingRule::fully_parallel(8), 2) == 1.0);
  auto nu = SamplingRule::nonoverlapping_contiguous(12, 4);
  for (int i = 0; i < 12; ++i) CHECK(inclusion_probability(nu, i) == Catch::Approx(0.25));
}

TEST_CASE("nice inclusion probability equals tau/N by exhaustive enumeration") {
  // For N <= 8, count the tau-subsets containing a fixed index.
  for (int n = 2; n <= 8; ++n) {
    for (int tau = 1; tau <= n; ++tau) {
      const double expected = static_cast<double>(binomial(n - 1, tau - 1)) / binomial(n, tau);
      CHECK(expected == Catch::Approx(static_cast<double>(tau) / n));
      CHECK(inclusion_probability(SamplingRule::nice(n, tau), 0) ==
            Catch::Approx(static_cast<double>(tau) / n));
    }
  }
}

TEST_CASE("doubly-uniform law gives equal probability to equal-cardinality sets") {
  // N = 6: analytic P(S) = pmf[|S|] / C(6, |S|); empirical frequencies over a
  // seeded run agree within 4 standard deviations for every subset.
  const int n = 6;
  std::vector<double> pmf = {0.3, 0.0, 0.4, 0.0, 0.0, 0.3};
  auto rule = SamplingRule::doubly_uniform(n, pmf);

  // Analytic identity: summing P(S) over sets containing i reproduces
  // inclusion_probability exactly.
  double incl = 0.0;
  for (int mask = 1; mask < (1 << n); ++mask) {
    const int size = __builtin_popcount(static_cast<unsigned>(mask));
    const double p_set = pmf[static_cast<std::size_t>(size - 1)] / binomial(n, size);
    if (mask & 1) incl += p_set;
  }
  CHECK(incl == Catch::Approx(inclusion_probability(rule, 0)).epsilon(1e-12));

  const int draws = 200000;
  SplitMix64 rng(555);
  std::map<int, int> hist;
  for (int t = 0; t < draws; ++t) {
    int mask = 0;
    for (int i : draw(rule, rng)) mask |= 1 << i;
    hist[mask]++;
  }
  for (int mask = 1; mask < (1 << n); ++mask) {
    const int size = __builtin_popcount(static_cast<unsigned>(mask));
    const double p_set = pmf[static_cast<std::size_t>(size - 1)] / binomial(n, size);
    const double freq = hist.count(mask) ? static_cast<double>(hist[mask]) / draws : 0.0;
    const double sd = std::sqrt(std::max(p_set * (1.0 - p_set), 0.0) / draws);
    INFO("subset mask " << mask);
    REQUIRE(std::abs(freq - p_set) <= 4.0 * sd + 1e-12);
  }
}

TEST_CASE("empirical inclusion frequencies match the law for all six rules") {
  const int n = 20;
  check_frequencies_within_4sd(SamplingRule::uniform(n, 5.0));
  check_frequencies_within_4sd(SamplingRule::doubly_uniform(
      n, std::vector<double>(static_cast<std::size_t>(n), 1.0 / n)));
  check_frequencies_within_4sd(SamplingRule::nonoverlapping_contiguous(n, 4));
  check_frequencies_within_4sd(SamplingRule::nice(n, 3));
  check_frequencies_within_4sd(SamplingRule::sequential(n));
  check_frequencies_within_4sd(SamplingRule::fully_parallel(n));
}

TEST_CASE("identical seeds reproduce identical draw sequences") {
  auto rule = SamplingRule::uniform(15, 4.0);
  SplitMix64 a(42), b(42);
  for (int t = 0; t < 200; ++t) REQUIRE(draw(rule, a) == draw(rule, b));
}

TEST_CASE("sampling rule validation") {
  CHECK_THROWS_AS(SamplingRule::uniform(10, 0.0), config_error);
  CHECK_THROWS_AS(SamplingRule::uniform(10, 11.0), config_error);
  CHECK_THROWS_AS(SamplingRule::nice(10, 0), config_error);
  CHECK_THROWS_AS(SamplingRule::nice(10, 11), config_error);
  CHECK_THROWS_AS(SamplingRule::doubly_uniform(3, {0.5, 0.5}), config_error);
  CHECK_THROWS_AS(SamplingRule::doubly_uniform(3, {0.5, 0.4, 0.2}), config_error);
  CHECK_THROWS_AS(SamplingRule::nonoverlapping(4, {{0, 1}, {1, 2, 3}}), config_error);
  CHECK_THROWS_AS(SamplingRule::nonoverlapping(4, {{0, 1}, {2}}), config_error);
  CHECK_THROWS_AS(SamplingRule::nonoverlapping(4, {{0, 1}, {}, {2, 3}}), config_error);
}

TEST_CASE("greedy subselection") {
  const std::vector<int> S = {1, 2, 3};
  auto E = [](int i) { return i == 1 ? 0.9 : (i == 2 ? 0.5 : 0.05); };

  CHECK(greedy_subselect(S, E, GreedyPolicy::threshold(0.1)) == std::vector<int>({1, 2}));
  CHECK(greedy_subselect(S, E, GreedyPolicy::threshold(0.0)) == std::vector<int>({1, 2, 3}));
  CHECK(greedy_subselect(S, E, GreedyPolicy::minimal_rho(0.5)) == std::vector<int>({1}));

  // Ties break toward the lowest block index.
  auto tied = [](int) { return 1.0; };
  CHECK(greedy_subselect(S, tied, GreedyPolicy::minimal_rho(1.0)) == std::vector<int>({1}));

  CHECK_THROWS_AS(greedy_subselect({}, E, GreedyPolicy::threshold(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(GreedyPolicy::threshold(1.5), config_error);
  CHECK_THROWS_AS(GreedyPolicy::minimal_rho(0.0), config_error);
}
