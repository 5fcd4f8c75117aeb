#include "digitsieve/ffield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "digitsieve/arith.hpp"
#include "digitsieve/error.hpp"

namespace digitsieve {

using arith::addmod;
using arith::mulmod;
using arith::submod;

namespace poly {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly rem(Poly a, const Poly& m, std::uint64_t p) {
  Poly mm = m;
  trim(mm);
  if (mm.empty()) throw ValidationError("polynomial division by zero");
  trim(a);
  const std::size_t dm = mm.size() - 1;
  const std::uint64_t inv_lead = arith::powmod(mm.back(), p - 2, p);
  while (a.size() > dm) {
    const std::uint64_t factor = mulmod(a.back(), inv_lead, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = submod(a[shift + i], mulmod(factor, mm[i], p), p);
    trim(a);
  }
  return a;
}

Poly mul_mod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = addmod(out[i + j], mulmod(a[i], b[j], p), p);
  return rem(std::move(out), m, p);
}

Poly pow_mod(Poly base, std::uint64_t exp, const Poly& m, std::uint64_t p) {
  Poly result{1};
  base = rem(std::move(base), m, p);
  result = rem(std::move(result), m, p);
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m, p);
    base = mul_mod(base, base, m, p);
    exp >>= 1;
  }
  return result;
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t inv = arith::powmod(a.back(), p - 2, p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

namespace {

// x^(p^k) mod f.
Poly frobenius_power(const Poly& f, std::uint64_t p, int k) {
  Poly x{0, 1};
  Poly acc = rem(x, f, p);
  for (int i = 0; i < k; ++i) acc = pow_mod(acc, p, f, p);
  return acc;
}

Poly minus_x(Poly a, std::uint64_t p) {
  if (a.size() < 2) a.resize(2, 0);
  a[1] = submod(a[1], 1, p);
  trim(a);
  return a;
}

}  // namespace

bool is_irreducible(const Poly& f_in, std::uint64_t p) {
  Poly f = f_in;
  trim(f);
  if (f.size() < 2) return false;
  const int n = static_cast<int>(f.size()) - 1;
  if (n == 1) return true;
  if (!minus_x(frobenius_power(f, p, n), p).empty()) return false;
  for (auto r : arith::distinct_prime_factors(static_cast<std::uint64_t>(n))) {
    const Poly g = gcd(f, minus_x(frobenius_power(f, p, n / static_cast<int>(r)), p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace poly

namespace {

void require_prime(std::uint64_t p) {
  if (!arith::is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
}

std::uint64_t checked_order(std::uint64_t p, int n) {
  unsigned __int128 order = 1;
  for (int i = 0; i < n; ++i) {
    order *= p;
    if (order >= (static_cast<unsigned __int128>(1) << 63)) throw ValidationError("p^n must be below 2^63");
  }
  return static_cast<std::uint64_t>(order);
}

}  // namespace

poly::Poly find_irreducible(std::uint64_t p, int n, std::uint64_t seed) {
  require_prime(p);
  if (n < 2 || n > kMaxFieldDegree) throw ValidationError("extension degree must lie in [2, 8]");
  const std::uint64_t count = checked_order(p, n);
  for (std::uint64_t step = 0; step < count; ++step) {
    std::uint64_t index = (seed % count + step) % count;
    poly::Poly f(n + 1, 0);
    for (int i = 0; i < n; ++i) {
      f[i] = index % p;
      index /= p;
    }
    f[n] = 1;
    if (poly::is_irreducible(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

// ---------------------------------------------------------------------------
// FieldContext

void FieldContext::init(std::uint64_t p, poly::Poly modulus) {
  require_prime(p);
  poly::trim(modulus);
  const int n = static_cast<int>(modulus.size()) - 1;
  if (n < 2 || n > kMaxFieldDegree) throw ValidationError("extension degree must lie in [2, 8]");
  for (auto c : modulus)
    if (c >= p) throw ValidationError("modulus coefficient outside [0, p)");
  if (modulus.back() != 1) throw ValidationError("modulus polynomial must be monic");
  if (!poly::is_irreducible(modulus, p)) throw ValidationError("modulus polynomial is reducible over F_p");
  p_ = p;
  n_ = n;
  order_ = checked_order(p, n);
  modulus_ = std::move(modulus);

  FieldElement xn;  // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
  for (int i = 0; i < n; ++i) xn.c[i] = submod(0, modulus_[i], p);
  high_powers_.clear();
  high_powers_.push_back(xn);
  for (int j = 1; j < n - 1; ++j) {
    const FieldElement& prev = high_powers_.back();
    FieldElement next;
    const std::uint64_t carry = prev.c[n - 1];
    for (int i = n - 1; i >= 1; --i) next.c[i] = prev.c[i - 1];
    next.c[0] = 0;
    for (int i = 0; i < n; ++i) next.c[i] = addmod(next.c[i], mulmod(carry, xn.c[i], p), p);
    high_powers_.push_back(next);
  }
}

FieldContext::FieldContext(std::uint64_t p, poly::Poly modulus) {
  init(p, std::move(modulus));
  basis_.resize(n_);
  for (int i = 0; i < n_; ++i) basis_[i].c[i] = 1;
}

FieldContext::FieldContext(std::uint64_t p, poly::Poly modulus, std::vector<std::vector<std::uint64_t>> rows) {
  init(p, std::move(modulus));
  if (rows.size() != static_cast<std::size_t>(n_)) throw ValidationError("basis must have n rows");
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(n_)) throw ValidationError("basis rows must have n entries");
    for (auto v : row)
      if (v >= p_) throw ValidationError("basis entry outside [0, p)");
  }
  // Rank over F_p by Gaussian elimination.
  auto m = rows;
  int rank = 0;
  for (int col = 0; col < n_ && rank < n_; ++col) {
    int pivot = -1;
    for (int r = rank; r < n_; ++r)
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    const std::uint64_t inv = arith::powmod(m[rank][col], p_ - 2, p_);
    for (int r = 0; r < n_; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const std::uint64_t f = mulmod(m[r][col], inv, p_);
      for (int c = 0; c < n_; ++c) m[r][c] = submod(m[r][c], mulmod(f, m[rank][c], p_), p_);
    }
    ++rank;
  }
  if (rank != n_) throw ValidationError("basis matrix is singular mod p");
  basis_.resize(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) basis_[i].c[j] = rows[i][j];
}

std::vector<std::vector<std::uint64_t>> FieldContext::basis_rows() const {
  std::vector<std::vector<std::uint64_t>> rows(n_);
  for (int i = 0; i < n_; ++i) rows[i].assign(basis_[i].c.begin(), basis_[i].c.begin() + n_);
  return rows;
}

FieldElement FieldContext::one() const {
  FieldElement e;
  e.c[0] = 1;
  return e;
}

FieldElement FieldContext::generator_x() const {
  FieldElement e;
  e.c[1] = 1;
  return e;
}

FieldElement FieldContext::from_coefficients(std::span<const std::uint64_t> low_to_high) const {
  if (low_to_high.size() > static_cast<std::size_t>(n_)) throw ValidationError("too many coefficients");
  FieldElement e;
  for (std::size_t i = 0; i < low_to_high.size(); ++i) e.c[i] = low_to_high[i] % p_;
  return e;
}

FieldElement FieldContext::from_index(std::uint64_t index) const {
  if (index >= order_) throw ValidationError("field index out of range");
  FieldElement e;
  for (int i = 0; i < n_; ++i) {
    e.c[i] = index % p_;
    index /= p_;
  }
  return e;
}

std::uint64_t FieldContext::to_index(const FieldElement& a) const {
  std::uint64_t index = 0;
  for (int i = n_ - 1; i >= 0; --i) index = index * p_ + a.c[i];
  return index;
}

FieldElement FieldContext::add(const FieldElement& a, const FieldElement& b) const {
  FieldElement out;
  for (int i = 0; i < n_; ++i) out.c[i] = addmod(a.c[i], b.c[i], p_);
  return out;
}

FieldElement FieldContext::sub(const FieldElement& a, const FieldElement& b) const {
  FieldElement out;
  for (int i = 0; i < n_; ++i) out.c[i] = submod(a.c[i], b.c[i], p_);
  return out;
}

FieldElement FieldContext::scale(const FieldElement& a, std::uint64_t k) const {
  k %= p_;
  FieldElement out;
  for (int i = 0; i < n_; ++i) out.c[i] = mulmod(a.c[i], k, p_);
  return out;
}

FieldElement FieldContext::mul(const FieldElement& a, const FieldElement& b) const {
  std::array<std::uint64_t, 2 * kMaxFieldDegree> prod{};
  for (int i = 0; i < n_; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < n_; ++j) prod[i + j] = addmod(prod[i + j], mulmod(a.c[i], b.c[j], p_), p_);
  }
  FieldElement out;
  for (int i = 0; i < n_; ++i) out.c[i] = prod[i];
  for (int j = 0; j < n_ - 1; ++j) {
    const std::uint64_t k = prod[n_ + j];
    if (k == 0) continue;
    for (int i = 0; i < n_; ++i) out.c[i] = addmod(out.c[i], mulmod(k, high_powers_[j].c[i], p_), p_);
  }
  return out;
}

FieldElement FieldContext::pow(FieldElement a, std::uint64_t exp) const {
  FieldElement result = one();
  while (exp != 0) {
    if (exp & 1) result = mul(result, a);
    a = mul(a, a);
    exp >>= 1;
  }
  return result;
}

int quad_char(const FieldElement& w, const FieldContext& ctx) {
  if (ctx.p() == 2) throw ValidationError("characteristic 2 has no quadratic character");
  if (ctx.is_zero(w)) return 0;
  return ctx.pow(w, (ctx.order() - 1) / 2) == ctx.one() ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Restricted-digit sets

std::uint64_t DigitSetFamily::product() const {
  unsigned __int128 prod = 1;
  for (const auto& s : sets) {
    prod *= s.size();
    if (prod > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(prod);
}

double DigitSetFamily::log_product() const {
  double acc = 0;
  for (const auto& s : sets) acc += std::log(static_cast<double>(s.size()));
  return acc;
}

std::uint64_t DigitSetFamily::min_size() const {
  std::uint64_t m = std::numeric_limits<std::uint64_t>::max();
  for (const auto& s : sets) m = std::min<std::uint64_t>(m, s.size());
  return sets.empty() ? 0 : m;
}

void validate_family(const DigitSetFamily& family, const FieldContext& ctx) {
  if (family.sets.size() != static_cast<std::size_t>(ctx.degree())) {
    throw ValidationError("family must have exactly n digit sets");
  }
  for (const auto& s : family.sets) {
    if (s.empty()) throw ValidationError("digit sets must be nonempty");
    auto sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.back() >= ctx.p()) throw ValidationError("digit outside [0, p)");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("digit sets must not repeat elements");
    }
  }
}

namespace {

// Visits every a_1 w_1 + ... + a_n w_n, updating one coordinate at a time.
template <class Visit>
void for_each_combination(const DigitSetFamily& family, const FieldContext& ctx, Visit&& visit) {
  const int n = ctx.degree();
  const auto& basis = ctx.basis();
  std::vector<std::size_t> idx(n, 0);
  FieldElement w;
  for (int i = 0; i < n; ++i) w = ctx.add(w, ctx.scale(basis[i], family.sets[i][0]));
  for (;;) {
    visit(w);
    int i = 0;
    for (; i < n; ++i) {
      const auto& set = family.sets[i];
      const std::uint64_t old = set[idx[i]];
      idx[i] = idx[i] + 1 == set.size() ? 0 : idx[i] + 1;
      w = ctx.add(w, ctx.scale(basis[i], submod(set[idx[i]], old, ctx.p())));
      if (idx[i] != 0) break;
    }
    if (i == n) return;
  }
}

}  // namespace

std::vector<FieldElement> build_W(const DigitSetFamily& family, const FieldContext& ctx) {
  validate_family(family, ctx);
  const std::uint64_t size = family.product();
  if (size > kMaxWSize) throw ResourceError("W has " + std::to_string(size) + " elements, above cap 2^26");
  std::vector<FieldElement> out;
  out.reserve(size);
  for_each_combination(family, ctx, [&](const FieldElement& w) { out.push_back(w); });
  std::vector<std::uint64_t> keys;
  keys.reserve(out.size());
  for (const auto& w : out) keys.push_back(ctx.to_index(w));
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw std::logic_error("basis combinations are not unique");
  }
  return out;
}

WSplit qr_split_W(const DigitSetFamily& family, const FieldContext& ctx) {
  validate_family(family, ctx);
  if (ctx.p() == 2) throw ValidationError("characteristic 2 has no quadratic character");
  WSplit out;
  for_each_combination(family, ctx, [&](const FieldElement& w) {
    switch (quad_char(w, ctx)) {
      case 1:
        ++out.plus;
        break;
      case -1:
        ++out.minus;
        break;
      default:
        ++out.zero;
    }
  });
  const double total = static_cast<double>(out.plus + out.minus + out.zero);
  out.deviation = std::fabs(static_cast<double>(out.plus) / total - 0.5);
  return out;
}

ConditionReport check_conditions(const DigitSetFamily& family, const FieldContext& ctx, double epsilon) {
  validate_family(family, ctx);
  if (!(epsilon > 0)) throw ValidationError("epsilon must be positive");
  constexpr double slack = 1e-12;
  const double p = static_cast<double>(ctx.p());
  const double n = ctx.degree();
  ConditionReport r;
  r.epsilon = epsilon;
  r.log_p_product = family.log_product() / std::log(p);
  r.product_exponent = (0.5 + epsilon) * n * n / (n - 1);
  r.product_condition = r.log_p_product >= r.product_exponent - slack;
  r.min_size = family.min_size();
  r.min_size_threshold = std::pow(p, epsilon);
  r.min_condition = std::log(static_cast<double>(r.min_size)) / std::log(p) >= epsilon - slack;
  r.linear_threshold = ((std::sqrt(5.0) - 1.0) / 2.0 + epsilon) * p;
  r.linear_condition = static_cast<double>(r.min_size) >= r.linear_threshold;
  const bool product_regime = r.product_condition && r.min_condition;
  if (product_regime && r.linear_condition) {
    r.regime = "both";
  } else if (product_regime) {
    r.regime = "product+min";
  } else if (r.linear_condition) {
    r.regime = "linear";
  } else {
    r.regime = "outside proved range";
  }
  return r;
}

IndexSplit split_largest_index_set(std::span<const std::uint64_t> sizes, double epsilon) {
  if (!(epsilon > 0)) throw ValidationError("epsilon must be positive");
  const int n = static_cast<int>(sizes.size());
  if (n < 2) throw ValidationError("need at least two digit sets");
  for (auto s : sizes)
    if (s == 0) throw ValidationError("digit sets must be nonempty");
  IndexSplit out;
  out.n0 = static_cast<int>(std::ceil(4.0 / epsilon - 1e-12));
  out.large_n_branch = n > out.n0;
  out.m = out.large_n_branch ? static_cast<int>(std::ceil((1.0 + epsilon) * n / (1.0 + 2.0 * epsilon) - 1e-12))
                             : n - 1;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sizes[a] > sizes[b]; });
  out.large.assign(order.begin(), order.begin() + out.m);
  out.rest.assign(order.begin() + out.m, order.end());
  std::sort(out.large.begin(), out.large.end());
  std::sort(out.rest.begin(), out.rest.end());
  double total = 0;
  for (auto s : sizes) total += std::log(static_cast<double>(s));
  for (int i : out.large) out.log_product_large += std::log(static_cast<double>(sizes[i]));
  out.log_product_bound = static_cast<double>(out.m) / n * total;
  out.product_bound_holds = out.log_product_large >= out.log_product_bound - 1e-9;
  return out;
}

}  // namespace digitsieve
