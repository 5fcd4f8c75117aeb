#include "digitsieve/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "digitsieve/error.hpp"

namespace digitsieve {

namespace {

void check_domain(double kappa, double rho) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw ValidationError("kappa must lie in [0, 1)");
  if (!(rho > 0.0 && rho <= 1.0)) throw ValidationError("rho must lie in (0, 1]");
}

// floor(num / den) for den > 0.
__int128 floor_div(__int128 num, __int128 den) {
  __int128 q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

// Nearest integer to num / den, halves rounded up; den > 0.
__int128 round_div(__int128 num, __int128 den) { return floor_div(2 * num + den, 2 * den); }

}  // namespace

double tau(double kappa, double rho) {
  check_domain(kappa, rho);
  // Product of the two roots is rho(1 - kappa); dividing by the larger root
  // avoids the cancellation in 1 + rho - sqrt(...).
  const double disc = std::sqrt((1.0 - rho) * (1.0 - rho) + 4.0 * rho * kappa);
  return 2.0 * rho * (1.0 - kappa) / (1.0 + rho + disc);
}

double theta(double kappa, double rho) { return tau(kappa, rho) / rho; }

BoundParams bound_params(double kappa, double rho) {
  const double t = tau(kappa, rho);
  return {kappa, rho, t, t / rho};
}

double predicted_med_q_exponent(double kappa, double rho) { return theta(kappa, rho); }

double predicted_two_window_exponent(double kappa, double rho) {
  check_domain(kappa, rho);
  if (rho < kappa / 2.0 || rho > 0.5) throw ValidationError("two-window bound needs kappa/2 <= rho <= 1/2");
  return -1.0 + kappa / (2.0 * rho);
}

CongDecayReport measure_cong_decay(const DigitPattern& pattern, std::span<const std::uint64_t> moduli) {
  if (moduli.empty()) throw ValidationError("modulus list is empty");
  CongDecayReport report;
  report.pattern = summarize(pattern);
  report.total = pattern.member_count();
  const double n = pattern.bits();
  const double total = static_cast<double>(report.total);
  for (std::uint64_t q : moduli) {
    if (q < 2) throw ValidationError("modulus must be at least 2");
    if (q % 2 == 0) throw ValidationError("modulus " + std::to_string(q) + " is even");
    const double lq = std::log2(static_cast<double>(q));
    if (lq > n) throw ValidationError("modulus " + std::to_string(q) + " exceeds 2^n");
    CongDecayRow row;
    row.q = q;
    row.rho = lq / n;
    row.count = count_multiples(pattern, q).count;
    row.predicted_exponent = theta(pattern.kappa(), row.rho);
    row.measured_exponent = std::log(total / static_cast<double>(std::max<std::uint64_t>(row.count, 1))) /
                            std::log(static_cast<double>(q));
    row.predicted_ceiling = total * std::pow(static_cast<double>(q), -row.predicted_exponent);
    report.fitted_constant = std::max(report.fitted_constant, static_cast<double>(row.count) / row.predicted_ceiling);
    report.rows.push_back(row);
  }
  return report;
}

DyadicSquareSum measure_dyadic_square_sum(const DigitPattern& pattern, std::uint64_t a, double epsilon) {
  if (a < 2) throw ValidationError("dyadic range start A must be at least 2");
  if (!(epsilon > 0)) throw ValidationError("epsilon must be positive");
  DyadicSquareSum out;
  out.a = a;
  out.epsilon = epsilon;
  const std::uint64_t top = pattern.max_member();
  for (std::uint64_t q = a + 1; q <= 2 * a; ++q) {
    const unsigned __int128 sq = static_cast<unsigned __int128>(q) * q;
    if (sq > top) {
      // Only s = 0 can be divisible by q^2 from here on.
      if (pattern.contains(0)) out.sum += 2 * a - q + 1;
      break;
    }
    out.sum += count_multiples(pattern, static_cast<std::uint64_t>(sq)).count;
  }
  out.reference = static_cast<double>(pattern.member_count()) * std::pow(static_cast<double>(a), -epsilon / 2.0);
  return out;
}

LatticeMinima2D gauss_reduce(const Vec2& b1, const Vec2& b2) {
  const __int128 det = static_cast<__int128>(b1.x) * b2.y - static_cast<__int128>(b1.y) * b2.x;
  if (det == 0) throw ValidationError("lattice basis is linearly dependent");
  Vec2 a = b1, b = b2;
  if (norm2(a) > norm2(b)) std::swap(a, b);
  for (;;) {
    const __int128 m = round_div(dot(a, b), norm2(a));
    b.x = static_cast<std::int64_t>(b.x - m * a.x);
    b.y = static_cast<std::int64_t>(b.y - m * a.y);
    if (norm2(b) >= norm2(a)) break;
    std::swap(a, b);
  }
  LatticeMinima2D out;
  out.basis = {a, b};
  out.shortest = a;
  out.lambda1 = std::sqrt(static_cast<double>(norm2(a)));
  out.lambda2 = std::sqrt(static_cast<double>(norm2(b)));
  return out;
}

LatticeMinima2D congruence_lattice_minima(int r, std::uint64_t q) {
  if (r < 0 || r > 62) throw ValidationError("lattice exponent r must lie in [0, 62]");
  if (q < 2 || q > 3037000499ULL) throw ValidationError("lattice modulus q must satisfy 2 <= q, q^2 < 2^63");
  const auto q2 = static_cast<std::int64_t>(q * q);
  return gauss_reduce({1, -(std::int64_t{1} << r)}, {0, q2});
}

}  // namespace digitsieve
