#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Arithmetic in F_{p^n} = F_p[x]/(m(x)) and the restricted-digit sets
// W = {a_1 w_1 + ... + a_n w_n : a_i in A_i} for a basis w_1..w_n over F_p.

namespace digitsieve {

inline constexpr int kMaxFieldDegree = 8;

// Coefficients in the power basis 1, x, ..., x^(n-1); unused slots are zero.
struct FieldElement {
  std::array<std::uint64_t, kMaxFieldDegree> c{};
  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

// Dense polynomials over F_p, coefficients low to high.
namespace poly {
using Poly = std::vector<std::uint64_t>;
void trim(Poly& f);
Poly mul_mod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p);
Poly pow_mod(Poly base, std::uint64_t exp, const Poly& m, std::uint64_t p);
Poly rem(Poly a, const Poly& m, std::uint64_t p);
Poly gcd(Poly a, Poly b, std::uint64_t p);
// Rabin's test for a monic polynomial of degree >= 1.
bool is_irreducible(const Poly& f, std::uint64_t p);
}  // namespace poly

// Monic irreducible of degree n. Candidates are the p^n monic polynomials
// indexed by their low coefficients read as base-p digits; the scan starts at
// index seed mod p^n and wraps around.
poly::Poly find_irreducible(std::uint64_t p, int n, std::uint64_t seed = 0);

class FieldContext {
 public:
  // Power basis w_i = x^(i-1). `modulus` is monic of degree n, low to high.
  FieldContext(std::uint64_t p, poly::Poly modulus);
  // basis_rows[i] holds the power-basis coordinates of w_{i+1}; the matrix
  // must be invertible mod p.
  FieldContext(std::uint64_t p, poly::Poly modulus, std::vector<std::vector<std::uint64_t>> basis_rows);

  std::uint64_t p() const { return p_; }
  int degree() const { return n_; }
  std::uint64_t order() const { return order_; }  // p^n
  const poly::Poly& modulus() const { return modulus_; }
  const std::vector<FieldElement>& basis() const { return basis_; }
  std::vector<std::vector<std::uint64_t>> basis_rows() const;

  FieldElement zero() const { return {}; }
  FieldElement one() const;
  FieldElement generator_x() const;
  FieldElement from_coefficients(std::span<const std::uint64_t> low_to_high) const;
  // Bijection [0, p^n) <-> F_{p^n}, coefficients as base-p digits.
  FieldElement from_index(std::uint64_t index) const;
  std::uint64_t to_index(const FieldElement& a) const;
  bool is_zero(const FieldElement& a) const { return a == FieldElement{}; }

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement scale(const FieldElement& a, std::uint64_t k) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement pow(FieldElement a, std::uint64_t exp) const;

 private:
  void init(std::uint64_t p, poly::Poly modulus);

  std::uint64_t p_ = 0;
  int n_ = 0;
  std::uint64_t order_ = 0;
  poly::Poly modulus_;
  std::vector<FieldElement> basis_;
  // x^(n + j) reduced, for j in [0, n - 1).
  std::vector<FieldElement> high_powers_;
};

// w^((p^n - 1)/2) mapped to {-1, 0, 1}. p must be odd.
int quad_char(const FieldElement& w, const FieldContext& ctx);

struct DigitSetFamily {
  std::vector<std::vector<std::uint64_t>> sets;  // A_1..A_n, residues in [0, p)

  std::uint64_t product() const;  // saturates at UINT64_MAX
  double log_product() const;
  std::uint64_t min_size() const;
};

// Checks sizes, ranges and distinctness against the context.
void validate_family(const DigitSetFamily& family, const FieldContext& ctx);

inline constexpr std::uint64_t kMaxWSize = std::uint64_t{1} << 26;

std::vector<FieldElement> build_W(const DigitSetFamily& family, const FieldContext& ctx);

struct WSplit {
  std::uint64_t plus = 0;
  std::uint64_t minus = 0;
  std::uint64_t zero = 0;
  double deviation = 0;  // |plus / #W - 1/2|
};

// Streams W with incremental basis updates; nothing is materialized.
WSplit qr_split_W(const DigitSetFamily& family, const FieldContext& ctx);

struct ConditionReport {
  double epsilon = 0;
  double log_p_product = 0;       // log_p prod #A_i
  double product_exponent = 0;    // (1/2 + eps) n^2/(n - 1)
  bool product_condition = false;
  std::uint64_t min_size = 0;
  double min_size_threshold = 0;  // p^eps
  bool min_condition = false;
  double linear_threshold = 0;    // ((sqrt 5 - 1)/2 + eps) p
  bool linear_condition = false;
  // "product+min", "linear", "both", or "outside proved range"
  std::string regime;
};

ConditionReport check_conditions(const DigitSetFamily& family, const FieldContext& ctx, double epsilon);

struct IndexSplit {
  std::vector<int> large;   // I: indices (0-based) of the m largest sets
  std::vector<int> rest;    // J
  int m = 0;
  int n0 = 0;               // ceil(4/eps)
  bool large_n_branch = false;
  double log_product_large = 0;   // log prod_{i in I} #A_i
  double log_product_bound = 0;   // (m/n) log prod_i #A_i
  bool product_bound_holds = false;
};

// m = ceil((1 + eps) n / (1 + 2 eps)) when n > ceil(4/eps), else n - 1.
// Ties between equal sizes go to the lower index.
IndexSplit split_largest_index_set(std::span<const std::uint64_t> sizes, double epsilon);

}  // namespace digitsieve
