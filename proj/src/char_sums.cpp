#include "digitsieve/char_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "digitsieve/arith.hpp"
#include "digitsieve/error.hpp"

namespace digitsieve {

namespace {

void require_odd_prime(std::uint64_t p) {
  if (p == 2) throw ValidationError("p = 2 has no quadratic character");
  if (!arith::is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
}

int euler_criterion(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  return arith::powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

ComplexSum unit_root_sum(std::uint64_t a, std::uint64_t q, auto&& for_each_term) {
  // Angles are taken from (a r mod q) / q so that rounding does not grow with s.
  const double step = 2.0 * std::numbers::pi / static_cast<double>(q);
  double re = 0, im = 0;
  for_each_term([&](std::uint64_t residue, double weight) {
    const double angle = step * static_cast<double>(arith::mulmod(a % q, residue, q));
    re += weight * std::cos(angle);
    im += weight * std::sin(angle);
  });
  return {re, im};
}

}  // namespace

CharContext::CharContext(std::uint64_t p) : p_(p) {
  require_odd_prime(p);
  if (p <= kCharTableLimit) {
    table_.assign(p, -1);
    table_[0] = 0;
    for (std::uint64_t x = 1; x <= (p - 1) / 2; ++x) table_[x * x % p] = 1;
  }
}

int CharContext::operator()(std::uint64_t a) const {
  if (!table_.empty()) return table_[a % p_];
  return euler_criterion(a, p_);
}

int legendre(std::int64_t a, std::uint64_t p) {
  require_odd_prime(p);
  const std::uint64_t magnitude = a < 0 ? 0 - static_cast<std::uint64_t>(a) : static_cast<std::uint64_t>(a);
  const std::uint64_t r = magnitude % p;
  return euler_criterion(a < 0 && r != 0 ? p - r : r, p);
}

double ComplexSum::magnitude() const { return std::hypot(re, im); }

ExpSumReport exp_sum(const DigitPattern& pattern, std::uint64_t a, std::uint64_t q, ExpSumRoute route) {
  if (q < 1) throw ValidationError("modulus must be at least 1");
  ExpSumReport report;
  report.total = pattern.member_count();
  const double total = static_cast<double>(report.total);
  if (q == 1) {
    report.value = {total, 0.0};
  } else {
    bool histogram = route == ExpSumRoute::Histogram ||
                     (route == ExpSumRoute::Auto && q <= report.total / 4);
    if (histogram && q > kMaxHistogramModulus) histogram = false;
    report.via_histogram = histogram;
    if (histogram) {
      const auto profile = congruence_histogram(pattern, q);
      report.value = unit_root_sum(a, q, [&](auto&& emit) {
        for (std::uint64_t c = 0; c < q; ++c)
          if (profile.counts[c] != 0) emit(c, static_cast<double>(profile.counts[c]));
      });
    } else {
      report.value = unit_root_sum(a, q, [&](auto&& emit) {
        for_each_member_residue(pattern, q, [&](std::uint64_t, std::uint64_t r) { emit(r, 1.0); });
      });
    }
  }
  report.normalized = report.value.magnitude() / total;
  const double n = pattern.bits();
  report.reference = total * std::exp2(-std::sqrt(n));
  const double kappa = pattern.kappa();
  report.in_small_modulus_range = pattern.starred() && std::gcd(2 * (a % q), q) == 1 && q >= 3 && kappa > 0 &&
                                  static_cast<double>(q) <= std::pow(n, 1.0 / (10.0 * kappa));
  return report;
}

QrSplit qr_split(const DigitPattern& pattern, const CharContext& chi) {
  QrSplit out;
  out.p = chi.prime();
  const int n = pattern.bits();
  const std::uint64_t low = std::uint64_t{1} << n;
  out.in_dyadic_window = out.p > low && (n >= 63 || out.p < (low << 1));
  if (!out.in_dyadic_window) out.warnings.push_back("p outside the dyadic window (2^n, 2^(n+1))");
  for (std::uint64_t s : pattern) {
    switch (chi(s)) {
      case 1:
        ++out.plus;
        break;
      case -1:
        ++out.minus;
        break;
      default:
        ++out.zero;
    }
  }
  out.deviation = std::fabs(static_cast<double>(out.plus) / static_cast<double>(pattern.member_count()) - 0.5);
  return out;
}

QrSplit qr_split(const DigitPattern& pattern, std::uint64_t p) { return qr_split(pattern, CharContext(p)); }

DoubleCharSum double_char_sum(std::span<const std::uint64_t> set_a, std::span<const std::uint64_t> set_b,
                              const CharContext& chi, int nu) {
  const std::uint64_t p = chi.prime();
  if (nu < 1) throw ValidationError("nu must be at least 1");
  for (auto span : {set_a, set_b})
    for (std::uint64_t x : span)
      if (x >= p) throw ValidationError("element " + std::to_string(x) + " outside [0, p)");
  DoubleCharSum out;
  for (std::uint64_t a : set_a)
    for (std::uint64_t b : set_b) out.value += chi(arith::addmod(a, b, p));
  const double na = static_cast<double>(set_a.size()), nb = static_cast<double>(set_b.size());
  const double lp = std::log(static_cast<double>(p));
  if (na > 0 && nb > 0) {
    out.normalized = std::fabs(static_cast<double>(out.value)) / (na * nb);
    out.eta_a = std::log(na) / lp - 0.5;
    out.eta_b = std::log(nb) / lp;
  }
  out.decay_applicable = out.eta_a > 0 && out.eta_b > 0;
  const double inv = 1.0 / (2.0 * nu);
  const double pd = static_cast<double>(p);
  out.envelope = std::pow(na, 1.0 - inv) * nb * std::pow(pd, inv / 2.0) +
                 std::pow(na, 1.0 - inv) * std::sqrt(nb) * std::pow(pd, inv);
  return out;
}

MomentSum moment_char_sum(std::span<const std::uint64_t> points, std::uint64_t window, int nu,
                          const CharContext& chi) {
  const std::uint64_t p = chi.prime();
  if (window < 1) throw ValidationError("window H must be at least 1");
  if (window > p) throw ValidationError("window H exceeds p");
  if (nu < 1) throw ValidationError("nu must be at least 1");
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j] >= p) throw ValidationError("point outside [0, p)");
    if (j > 0) {
      if (points[j] <= points[j - 1]) throw ValidationError("points must be strictly increasing");
      if (points[j] - points[j - 1] < window) throw ValidationError("points closer than the window H");
    }
  }
  MomentSum out;
  for (std::uint64_t w : points) {
    std::int64_t partial = 0, best = 0;
    for (std::uint64_t i = 1; i <= window; ++i) {
      partial += chi(w + i);
      best = std::max<std::int64_t>(best, std::llabs(partial));
    }
    out.value += std::pow(static_cast<double>(best), 2.0 * nu);
  }
  out.envelope = std::pow(static_cast<double>(p), 0.5 + 1.0 / (2.0 * nu)) *
                 std::pow(static_cast<double>(window), 2.0 * nu - 2.0);
  return out;
}

std::vector<std::uint64_t> spaced_subset(std::span<const std::uint64_t> values, std::uint64_t separation) {
  if (values.empty()) throw ValidationError("spaced_subset: empty input");
  if (separation < 1) throw ValidationError("spaced_subset: separation must be at least 1");
  std::vector<std::uint64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> out{sorted.front()};
  for (std::uint64_t v : sorted)
    if (v - out.back() > separation) out.push_back(v);
  return out;
}

}  // namespace digitsieve
