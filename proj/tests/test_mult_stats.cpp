#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <random>

#include "digitsieve/error.hpp"
#include "digitsieve/mult_stats.hpp"

using namespace digitsieve;

TEST_CASE("squarefree counts on small patterns") {
  CHECK(squarefree_count_direct(DigitPattern::parse("**1")).count == 4);
  CHECK(squarefree_count_direct(DigitPattern::parse("***1")).count == 7);
  CHECK(squarefree_count_moebius(DigitPattern::parse("***1")).count == 7);
  CHECK(squarefree_count_moebius(DigitPattern::parse("**1")).count == 4);
  CHECK(squarefree_count_direct(DigitPattern::parse("101", true)).count == 1);
  CHECK(squarefree_count_moebius(DigitPattern::parse("101", true)).count == 1);

  std::uint64_t sf = 0;
  for (std::uint64_t s = 0; s < 64; ++s) sf += oracle::squarefree(s);
  const auto all = DigitPattern::parse("******");
  CHECK(squarefree_count_direct(all).count == sf);
  CHECK(squarefree_count_moebius(all).count == sf);
}

TEST_CASE("property: both squarefree methods agree with brute force") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 12);
    const int k = 1 + static_cast<int>(rng() % (n - 1));
    const auto p = random_pattern(n, k, trial % 3 != 0, rng);
    std::uint64_t expected = 0;
    for (auto s : oracle::members(p.to_string())) expected += oracle::squarefree(s);
    const auto direct = squarefree_count_direct(p);
    CHECK(direct.count == expected);
    CHECK(squarefree_count_moebius(p).count == expected);
    CHECK(direct.count <= direct.total);
  }
}

TEST_CASE("euler sums") {
  const auto r = euler_ratio_sum(DigitPattern::parse("**1"));
  CHECK(r.exact_mode);
  REQUIRE(r.exact.has_value());
  CHECK(*r.exact == "349/105");
  CHECK(r.sum == doctest::Approx(349.0 / 105).epsilon(1e-14));
  CHECK(r.ratio == doctest::Approx(349.0 / 420).epsilon(1e-14));
  CHECK(euler_ratio_sum(DigitPattern::parse("101", true)).sum == doctest::Approx(0.8));
  CHECK(euler_ratio_sum(DigitPattern::parse("0*1")).sum == doctest::Approx(5.0 / 3));
}

TEST_CASE("euler zero policy") {
  const auto p = DigitPattern::parse("****");
  CHECK_THROWS_AS(euler_ratio_sum(p, {}, ZeroPolicy::Reject), ValidationError);
  const auto r = euler_ratio_sum(p, {}, ZeroPolicy::Exclude);
  CHECK(r.zero_excluded);
  CHECK(r.total == 15);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("property: euler routes agree with naive totients") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 9);
    const auto p = random_pattern(n, 1 + static_cast<int>(rng() % (n - 1)), true, rng);
    double expected = 0;
    for (auto s : oracle::members(p.to_string())) expected += static_cast<double>(oracle::totient(s)) / s;
    const auto r = euler_ratio_sum(p);
    CHECK(r.sum == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.sum_moebius == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("euler compensated mode stays consistent across routes") {
  MultStatsLimits limits;
  limits.exact_member_limit = 16;
  const auto p = DigitPattern::parse("**0*1*******1");
  const auto r = euler_ratio_sum(p, limits);
  CHECK_FALSE(r.exact_mode);
  CHECK(r.route_relative_difference <= 1e-9);
  const auto exact = euler_ratio_sum(p);
  CHECK(exact.exact_mode);
  CHECK(r.sum == doctest::Approx(exact.sum).epsilon(1e-12));
}

TEST_CASE("results are independent of the thread count") {
  const auto p = DigitPattern::parse("1*****0********1");
  MultStatsLimits one, four;
  four.threads = 4;
  CHECK(squarefree_count_direct(p, one).count == squarefree_count_direct(p, four).count);
  one.exact_member_limit = four.exact_member_limit = 0;
  CHECK(euler_ratio_sum(p, one).sum == euler_ratio_sum(p, four).sum);
}

TEST_CASE("range flags") {
  CHECK_FALSE(squarefree_count_direct(DigitPattern::parse("*******1")).outside_proved_range);
  CHECK(squarefree_count_direct(DigitPattern::parse("********")).outside_proved_range);
  CHECK(squarefree_count_direct(DigitPattern::parse("*1*1*0*1")).outside_proved_range);
}
