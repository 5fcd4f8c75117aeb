#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "digitsieve/mult_stats.hpp"
#include "digitsieve/pattern.hpp"

// Congruence-count decay exponents and the two-dimensional lattice attached
// to q^2 | s with a fixed low block of digits.
//
// For a pattern with kappa = k/n fixed digits and a modulus q = 2^(rho n),
// #{s in N : q | s} is bounded by #N * q^(-theta(kappa, rho)) where
//   tau(kappa, rho)   = (1 + rho - sqrt((1 - rho)^2 + 4 rho kappa)) / 2,
//   theta(kappa, rho) = tau / rho.
// tau is the root in [0, rho] of t^2 - t(1 + rho) + rho(1 - kappa) = 0.

namespace digitsieve {

struct BoundParams {
  double kappa = 0;
  double rho = 0;
  double tau = 0;
  double theta = 0;
};

// Domain: 0 <= kappa < 1, 0 < rho <= 1. Throws ValidationError outside it.
double tau(double kappa, double rho);
double theta(double kappa, double rho);
BoundParams bound_params(double kappa, double rho);

// Continuous extension of theta at rho -> 0.
inline double theta_small_rho_limit(double kappa) { return 1.0 - kappa; }

// Decay exponent from the medium-modulus bound: theta(kappa, rho).
double predicted_med_q_exponent(double kappa, double rho);

// Signed decay exponent -1 + kappa/(2 rho) from the two-window bound;
// requires kappa/2 <= rho <= 1/2.
double predicted_two_window_exponent(double kappa, double rho);

struct CongDecayRow {
  std::uint64_t q = 0;
  double rho = 0;
  std::uint64_t count = 0;
  double predicted_exponent = 0;  // theta(kappa, rho)
  double measured_exponent = 0;   // log_q(#N / max(count, 1))
  double predicted_ceiling = 0;   // #N * q^-theta
};

struct CongDecayReport {
  PatternSummary pattern;
  std::uint64_t total = 0;
  std::vector<CongDecayRow> rows;
  // Smallest C with count <= C * #N * q^-theta on every row.
  double fitted_constant = 0;
};

// Moduli must be odd, at least 3, and at most 2^n.
CongDecayReport measure_cong_decay(const DigitPattern& pattern, std::span<const std::uint64_t> moduli);

struct DyadicSquareSum {
  std::uint64_t a = 0;
  std::uint64_t sum = 0;         // sum over A < q <= 2A of #{s : q^2 | s}
  double epsilon = 0.1;
  double reference = 0;          // #N * A^(-epsilon/2)
};

DyadicSquareSum measure_dyadic_square_sum(const DigitPattern& pattern, std::uint64_t a, double epsilon = 0.1);

struct Vec2 {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline __int128 dot(const Vec2& a, const Vec2& b) {
  return static_cast<__int128>(a.x) * b.x + static_cast<__int128>(a.y) * b.y;
}
inline __int128 norm2(const Vec2& a) { return dot(a, a); }

struct LatticeMinima2D {
  std::array<Vec2, 2> basis;  // reduced: |basis[0]| = lambda1, |basis[1]| = lambda2
  double lambda1 = 0;
  double lambda2 = 0;
  Vec2 shortest;
};

// Gauss-Lagrange reduction with exact integer arithmetic. Throws
// ValidationError for a dependent basis.
LatticeMinima2D gauss_reduce(const Vec2& b1, const Vec2& b2);

// The lattice {(a, c) : 2^r a + c = 0 (mod q^2)}, basis (1, -2^r), (0, q^2).
// Requires 0 <= r <= 62 and q^2 < 2^63.
LatticeMinima2D congruence_lattice_minima(int r, std::uint64_t q);

}  // namespace digitsieve
