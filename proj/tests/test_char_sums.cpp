#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "digitsieve/char_sums.hpp"
#include "digitsieve/error.hpp"

using namespace digitsieve;

TEST_CASE("legendre symbol") {
  CHECK(legendre(2, 7) == 1);
  CHECK(legendre(3, 7) == -1);
  CHECK(legendre(0, 11) == 0);
  CHECK(legendre(-1, 7) == -1);
  CHECK(legendre(-1, 13) == 1);
  for (std::uint64_t p : {3, 5, 7, 11, 13, 101, 103}) {
    const CharContext chi(p);
    for (std::uint64_t a = 0; a < p; ++a) {
      CHECK(legendre(static_cast<std::int64_t>(a), p) == oracle::legendre(a, p));
      CHECK(chi(a) == oracle::legendre(a, p));
    }
  }
  CHECK_THROWS_AS(CharContext(9), ValidationError);
  CHECK_THROWS_AS(CharContext(2), ValidationError);
}

TEST_CASE("large prime character uses Euler's criterion") {
  const std::uint64_t p = 1000000007;
  const CharContext chi(p);
  CHECK_FALSE(chi.tabulated());
  CHECK(chi(4) == 1);
  CHECK(chi(p - 1) == -1);
}

TEST_CASE("exponential sums") {
  const auto p = DigitPattern::parse("**1");
  const auto zero = exp_sum(p, 0, 7);
  CHECK(zero.value.re == doctest::Approx(4));
  CHECK(zero.value.im == doctest::Approx(0).epsilon(1e-12));
  CHECK(exp_sum(p, 1, 3).value.magnitude() == doctest::Approx(1));
  const auto four = exp_sum(DigitPattern::parse("**01"), 1, 4);
  CHECK(std::fabs(four.value.re) < 1e-12);
  CHECK(four.value.im == doctest::Approx(4));
}

TEST_CASE("property: histogram and direct routes agree with naive sums") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 9);
    const auto p = random_pattern(n, 1 + static_cast<int>(rng() % (n - 1)), true, rng);
    const std::uint64_t q = 2 + rng() % 50, a = rng() % q;
    double re = 0, im = 0;
    for (auto s : oracle::members(p.to_string())) {
      const double angle = 2 * std::numbers::pi * static_cast<double>((a * s) % q) / static_cast<double>(q);
      re += std::cos(angle);
      im += std::sin(angle);
    }
    for (auto route : {ExpSumRoute::Histogram, ExpSumRoute::Direct}) {
      const auto r = exp_sum(p, a, q, route);
      CHECK(r.value.re == doctest::Approx(re).epsilon(1e-9));
      CHECK(r.value.im == doctest::Approx(im).epsilon(1e-9));
    }
  }
}

TEST_CASE("quadratic residue split") {
  const auto p = DigitPattern::parse("**1");
  const auto eleven = qr_split(p, 11);
  CHECK(eleven.plus == 3);
  CHECK(eleven.minus == 1);
  CHECK(eleven.zero == 0);
  CHECK(eleven.in_dyadic_window);
  const auto seven = qr_split(p, 7);
  CHECK(seven.plus == 1);
  CHECK(seven.minus == 2);
  CHECK(seven.zero == 1);
  const auto five = qr_split(DigitPattern::parse("101", true), 5);
  CHECK(five.zero == 1);
  CHECK_FALSE(seven.in_dyadic_window);
  CHECK_FALSE(seven.warnings.empty());
  CHECK(eleven.warnings.empty());
}

TEST_CASE("double character sums") {
  const CharContext chi(7);
  const std::uint64_t one[] = {1};
  CHECK(double_char_sum(one, one, chi).value == 1);
  const std::uint64_t a[] = {1, 2}, b[] = {3};
  CHECK(double_char_sum(a, b, chi).value == 0);
  const std::uint64_t bad[] = {9};
  CHECK_THROWS_AS(double_char_sum(bad, b, chi), ValidationError);
}

TEST_CASE("moment character sums") {
  const CharContext chi(7);
  const std::uint64_t w[] = {0};
  CHECK(moment_char_sum(w, 3, 1, chi).value == doctest::Approx(4));
  const std::uint64_t close[] = {0, 1};
  CHECK_THROWS_AS(moment_char_sum(close, 3, 1, chi), ValidationError);
  CHECK_THROWS_AS(moment_char_sum(w, 8, 1, chi), ValidationError);
}

TEST_CASE("spaced subsets") {
  std::vector<std::uint64_t> ten(10);
  std::iota(ten.begin(), ten.end(), 0);
  CHECK(spaced_subset(ten, 3) == std::vector<std::uint64_t>{0, 4, 8});
  const std::uint64_t five[] = {5};
  CHECK(spaced_subset(five, 100) == std::vector<std::uint64_t>{5});
  const std::uint64_t mixed[] = {0, 1, 2, 10, 11, 20};
  CHECK(spaced_subset(mixed, 5) == std::vector<std::uint64_t>{0, 10, 20});
  CHECK_THROWS_AS(spaced_subset(std::span<const std::uint64_t>{}, 2), ValidationError);
}
