#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <random>

#include "digitsieve/bounds.hpp"
#include "digitsieve/error.hpp"

using namespace digitsieve;

namespace {

double tau_textbook(double kappa, double rho) {
  return (1 + rho - std::sqrt((1 - rho) * (1 - rho) + 4 * rho * kappa)) / 2;
}

}  // namespace

TEST_CASE("tau and theta reference values") {
  CHECK(tau(0.25, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(theta(0.4, 0.4) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(theta(0, 0.37) == doctest::Approx(1).epsilon(1e-14));
  CHECK(std::fabs(theta(0.3, 0.5) - tau_textbook(0.3, 0.5) / 0.5) < 1e-12);
  CHECK_THROWS_AS(tau(1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(tau(0.2, 0.0), ValidationError);
  CHECK_THROWS_AS(tau(0.2, 1.5), ValidationError);
}

TEST_CASE("property: tau solves its quadratic and stays in range") {
  for (int i = 0; i < 100; ++i) {
    for (int j = 1; j <= 100; ++j) {
      const double kappa = i / 100.0, rho = j / 100.0;
      const double t = tau(kappa, rho);
      CHECK(std::fabs(t * t - t * (1 + rho) + rho * (1 - kappa)) <= 1e-12);
      CHECK(t >= 0);
      CHECK(t <= rho + 1e-15);
      const double th = theta(kappa, rho);
      CHECK(th >= 0);
      CHECK(th <= 1 + 1e-15);
    }
  }
}

TEST_CASE("two-window exponent") {
  CHECK(predicted_two_window_exponent(0.4, 0.25) == doctest::Approx(-0.2));
  CHECK(predicted_two_window_exponent(0.4, 0.5) == doctest::Approx(-0.6));
  CHECK(predicted_two_window_exponent(0, 0.5) == doctest::Approx(-1));
  CHECK_THROWS_AS(predicted_two_window_exponent(0.4, 0.1), ValidationError);
}

TEST_CASE("congruence decay measurement") {
  const auto p = DigitPattern::parse("**1");
  const std::uint64_t q3[] = {3};
  const auto r = measure_cong_decay(p, q3);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].count == 1);
  CHECK(r.rows[0].predicted_ceiling ==
        doctest::Approx(4 * std::pow(3.0, -theta(1.0 / 3, std::log2(3.0) / 3))));
  const std::uint64_t q1[] = {1};
  CHECK_THROWS_AS(measure_cong_decay(p, q1), ValidationError);

  const std::uint64_t q5[] = {5};
  const auto all = measure_cong_decay(DigitPattern::parse(std::string(12, '*')), q5);
  CHECK(std::fabs(static_cast<double>(all.rows[0].count) - 4096.0 / 5) <= 1);
}

TEST_CASE("dyadic square sums") {
  CHECK(measure_dyadic_square_sum(DigitPattern::parse("********"), 4).sum == 29);
  CHECK(measure_dyadic_square_sum(DigitPattern::parse("**1"), 2).sum == 0);
  CHECK(measure_dyadic_square_sum(DigitPattern::parse("101", true), 2).sum == 0);
  CHECK_THROWS_AS(measure_dyadic_square_sum(DigitPattern::parse("**1"), 1), ValidationError);
}

TEST_CASE("property: dyadic sums match brute force") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 10);
    const auto p = random_pattern(n, 1 + static_cast<int>(rng() % (n - 1)), trial % 2 == 0, rng);
    const std::uint64_t a = 2 + rng() % 63;
    std::uint64_t expected = 0;
    const auto members = oracle::members(p.to_string());
    for (std::uint64_t q = a + 1; q <= 2 * a; ++q)
      for (auto s : members) expected += s % (q * q) == 0;
    CHECK(measure_dyadic_square_sum(p, a).sum == expected);
  }
}

TEST_CASE("gauss reduction examples") {
  auto id = gauss_reduce({1, 0}, {0, 1});
  CHECK(id.lambda1 == 1);
  CHECK(id.lambda2 == 1);
  auto diag = gauss_reduce({2, 0}, {0, 3});
  CHECK(diag.lambda1 == 2);
  CHECK(diag.lambda2 == 3);
  auto cong = congruence_lattice_minima(2, 3);
  CHECK(cong.lambda1 == doctest::Approx(std::sqrt(5.0)));
  CHECK(norm2(cong.shortest) == 5);
  CHECK_THROWS_AS(gauss_reduce({1, 2}, {2, 4}), ValidationError);
}

TEST_CASE("property: gauss reduction finds the shortest vector") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long long> entry(-1000, 1000);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 b1{entry(rng), entry(rng)}, b2{entry(rng), entry(rng)};
    const __int128 det = static_cast<__int128>(b1.x) * b2.y - static_cast<__int128>(b1.y) * b2.x;
    if (det == 0) continue;
    const auto m = gauss_reduce(b1, b2);
    CHECK(norm2(m.shortest) == oracle::shortest_norm2(b1.x, b1.y, b2.x, b2.y));
    const double absdet = std::fabs(static_cast<double>(det));
    CHECK(m.lambda1 <= m.lambda2);
    CHECK(m.lambda1 * m.lambda2 >= absdet * (1 - 1e-12));
    CHECK(m.lambda1 * m.lambda2 <= 2 * absdet);
  }
}
