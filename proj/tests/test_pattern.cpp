#include "doctest.h"
#include "oracles.hpp"

#include <random>

#include "digitsieve/error.hpp"
#include "digitsieve/pattern.hpp"

using namespace digitsieve;
using S = DigitSymbol;

TEST_CASE("construction and validation") {
  const S syms[] = {S::Fixed1, S::Free, S::Free};
  const auto p = DigitPattern::make(3, syms);
  CHECK(p.fixed_count() == 1);
  CHECK(p.kappa() == doctest::Approx(1.0 / 3));
  CHECK(p.starred());
  CHECK(p.to_string() == "**1");

  const S fixed[] = {S::Fixed1, S::Fixed0, S::Fixed1};
  CHECK_THROWS_AS(DigitPattern::make(3, fixed), ValidationError);
  CHECK(DigitPattern::make(3, fixed, true).members() == std::vector<std::uint64_t>{5});

  std::vector<S> wide(64, S::Free);
  CHECK_THROWS_AS(DigitPattern::make(64, wide), ValidationError);
  CHECK_THROWS_AS(DigitPattern::parse("1*2"), ValidationError);
  CHECK_THROWS_AS(DigitPattern::parse(""), ValidationError);
}

TEST_CASE("enumeration in ascending order") {
  CHECK(DigitPattern::parse("**1").members() == std::vector<std::uint64_t>{1, 3, 5, 7});
  CHECK(DigitPattern::parse("**01").members() == std::vector<std::uint64_t>{1, 5, 9, 13});
  CHECK(DigitPattern::parse("1*1").members() == std::vector<std::uint64_t>{5, 7});
}

TEST_CASE("member counts") {
  CHECK(DigitPattern::parse("**1").member_count() == 4);
  CHECK(DigitPattern::parse("1010******").member_count() == 64);
  CHECK(DigitPattern::parse(std::string(20, '*')).member_count() == 1048576);
}

TEST_CASE("congruence histogram") {
  CHECK(congruence_histogram(DigitPattern::parse("**1"), 3).counts == std::vector<std::uint64_t>{1, 2, 1});
  const auto five = congruence_histogram(DigitPattern::parse("101", true), 5);
  CHECK(five.counts == std::vector<std::uint64_t>{1, 0, 0, 0, 0});
  CHECK(congruence_histogram(DigitPattern::parse("****"), 3).counts[0] == 6);
  CHECK_THROWS_AS(congruence_histogram(DigitPattern::parse("****"), 1), ValidationError);
}

TEST_CASE("count of multiples") {
  const auto c = count_multiples(DigitPattern::parse("**1"), 3);
  CHECK(c.count == 1);
  CHECK(c.deviation == doctest::Approx(1.0 / 3));
  CHECK(count_multiples(DigitPattern::parse("**01"), 4).count == 0);
  CHECK(count_multiples(DigitPattern::parse("101", true), 25).count == 0);
}

TEST_CASE("free-position split") {
  const auto p = DigitPattern::parse("**1");
  const int chosen[] = {2};
  const auto [a, b] = split_free_positions(p, chosen);
  CHECK(a.members() == std::vector<std::uint64_t>{1, 3});
  CHECK(b.members() == std::vector<std::uint64_t>{0, 4});
  const auto [a2, b2] = split_free_positions(p, std::span<const int>{});
  CHECK(a2.members() == p.members());
  CHECK(b2.members() == std::vector<std::uint64_t>{0});
  const int bad[] = {0};
  CHECK_THROWS_AS(split_free_positions(p, bad), ValidationError);
}

TEST_CASE("property: enumeration, membership and histograms match brute force") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const bool starred = trial % 2 == 0;
    const int k = starred ? 1 + static_cast<int>(rng() % (n - 1)) : static_cast<int>(rng() % n);
    const auto p = random_pattern(n, k, starred, rng);
    const auto text = p.to_string();
    const auto expected = oracle::members(text);
    REQUIRE(p.members() == expected);
    CHECK(p.member_count() == expected.size());
    CHECK(p.max_member() == expected.back());
    for (std::uint64_t i = 0; i < expected.size(); i += 3) CHECK(p.member_at(i) == expected[i]);
    std::uint64_t seen = 0;
    for (std::uint64_t s : p) CHECK(s == expected[seen++]);
    CHECK(seen == expected.size());

    const std::uint64_t q = 2 + rng() % 40;
    std::vector<std::uint64_t> counts(q, 0);
    for (auto s : expected) ++counts[s % q];
    CHECK(congruence_histogram(p, q).counts == counts);
    CHECK(count_multiples(p, q).count == counts[0]);
    const std::uint64_t big = 1 + rng() % 5000;
    if (big >= 2) {
      std::uint64_t multiples = 0;
      for (auto s : expected) multiples += s % big == 0;
      CHECK(count_multiples(p, big).count == multiples);
    }
  }
}

TEST_CASE("property: split sums reproduce the pattern") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_pattern(8, 3, true, rng);
    std::vector<int> chosen;
    for (int pos : p.free_positions())
      if (rng() & 1) chosen.push_back(pos);
    const auto [a, b] = split_free_positions(p, chosen);
    std::vector<std::uint64_t> sums;
    for (auto x : a.members())
      for (auto y : b.members()) sums.push_back(x + y);
    std::sort(sums.begin(), sums.end());
    CHECK(sums == p.members());
  }
}

TEST_CASE("random corpus is reproducible and respects kappa") {
  const auto a = random_pattern_corpus(25, 20, 0.4, true, 99);
  const auto b = random_pattern_corpus(25, 20, 0.4, true, 99);
  REQUIRE(a.size() == 25);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i].starred());
    CHECK(a[i].kappa() <= 0.4 + 1e-12);
  }
}
