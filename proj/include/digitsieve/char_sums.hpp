#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "digitsieve/pattern.hpp"

// Exponential sums over digit-pattern sets and quadratic-character statistics
// modulo an odd prime.

namespace digitsieve {

// Quadratic character modulo an odd prime p. Below kCharTableLimit the
// character is tabulated; above it each value is a modular exponentiation.
class CharContext {
 public:
  static constexpr std::uint64_t kCharTableLimit = std::uint64_t{1} << 22;

  // Throws ValidationError unless p is an odd prime.
  explicit CharContext(std::uint64_t p);

  std::uint64_t prime() const { return p_; }
  bool tabulated() const { return !table_.empty(); }

  // chi(a) in {-1, 0, 1}; a is reduced mod p.
  int operator()(std::uint64_t a) const;

 private:
  std::uint64_t p_;
  std::vector<std::int8_t> table_;
};

// Legendre symbol (a / p) by Euler's criterion. p must be an odd prime.
int legendre(std::int64_t a, std::uint64_t p);

struct ComplexSum {
  double re = 0;
  double im = 0;
  double magnitude() const;
};

enum class ExpSumRoute { Auto, Histogram, Direct };

struct ExpSumReport {
  ComplexSum value;
  std::uint64_t total = 0;
  double normalized = 0;           // |S| / #N
  double reference = 0;            // #N * 2^-sqrt(n)
  bool via_histogram = false;
  // gcd(2a, q) = 1, starred, and 3 <= q <= n^(1/(10 kappa)).
  bool in_small_modulus_range = false;
};

// S(a) = sum over members s of exp(2 pi i a s / q). Auto uses the residue
// histogram when q <= #N / 4 and direct iteration otherwise.
ExpSumReport exp_sum(const DigitPattern& pattern, std::uint64_t a, std::uint64_t q,
                     ExpSumRoute route = ExpSumRoute::Auto);

struct QrSplit {
  std::uint64_t p = 0;
  std::uint64_t plus = 0;
  std::uint64_t minus = 0;
  std::uint64_t zero = 0;
  double deviation = 0;            // |plus / total - 1/2|
  bool in_dyadic_window = false;   // 2^n < p < 2^(n+1)
  std::vector<std::string> warnings;
};

QrSplit qr_split(const DigitPattern& pattern, const CharContext& chi);
QrSplit qr_split(const DigitPattern& pattern, std::uint64_t p);

struct DoubleCharSum {
  std::int64_t value = 0;          // sum over a in A, b in B of chi(a + b)
  double normalized = 0;           // |value| / (#A #B)
  double eta_a = 0;                // log_p #A - 1/2
  double eta_b = 0;                // log_p #B
  bool decay_applicable = false;   // eta_a > 0 and eta_b > 0
  // Holder/Weil envelope (#A)^(1-1/2nu) #B p^(1/4nu) + (#A)^(1-1/2nu) #B^(1/2) p^(1/2nu)
  double envelope = 0;
};

DoubleCharSum double_char_sum(std::span<const std::uint64_t> set_a, std::span<const std::uint64_t> set_b,
                              const CharContext& chi, int nu = 2);

struct MomentSum {
  double value = 0;     // sum_j max_{h <= H} |sum_{i=1}^h chi(i + w_j)|^(2 nu)
  double envelope = 0;  // p^(1/2 + 1/(2 nu)) H^(2 nu - 2)
};

// Points must satisfy 0 <= w_1 < ... < w_J < p with gaps >= H; 1 <= H <= p.
MomentSum moment_char_sum(std::span<const std::uint64_t> points, std::uint64_t window, int nu,
                          const CharContext& chi);

// Greedy ascending selection with consecutive gaps > separation.
std::vector<std::uint64_t> spaced_subset(std::span<const std::uint64_t> values, std::uint64_t separation);

}  // namespace digitsieve
