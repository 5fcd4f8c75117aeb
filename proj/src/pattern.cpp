#include "digitsieve/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "digitsieve/arith.hpp"
#include "digitsieve/error.hpp"

namespace digitsieve {

DigitPattern DigitPattern::make(int n, std::span<const DigitSymbol> symbols, bool allow_degenerate) {
  if (n < kMinPatternBits || n > kMaxPatternBits) {
    throw ValidationError("pattern bit-length " + std::to_string(n) + " out of range [2, 63]");
  }
  if (symbols.size() != static_cast<std::size_t>(n)) {
    throw ValidationError("pattern has " + std::to_string(symbols.size()) + " symbols, expected " +
                          std::to_string(n));
  }
  DigitPattern p;
  p.n_ = n;
  p.symbols_.assign(symbols.begin(), symbols.end());
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    switch (symbols[i]) {
      case DigitSymbol::Fixed0:
        p.fixed_mask_ |= bit;
        break;
      case DigitSymbol::Fixed1:
        p.fixed_mask_ |= bit;
        p.fixed_value_ |= bit;
        break;
      case DigitSymbol::Free:
        p.free_mask_ |= bit;
        ++p.free_count_;
        break;
    }
  }
  if (p.free_count_ == 0 && !allow_degenerate) {
    throw ValidationError("pattern has no free positions (pass the degenerate flag to allow it)");
  }
  return p;
}

DigitPattern DigitPattern::parse(std::string_view msb_first, bool allow_degenerate) {
  const int n = static_cast<int>(msb_first.size());
  std::vector<DigitSymbol> symbols(msb_first.size());
  for (int i = 0; i < n; ++i) {
    const char c = msb_first[n - 1 - i];
    switch (c) {
      case '0':
        symbols[i] = DigitSymbol::Fixed0;
        break;
      case '1':
        symbols[i] = DigitSymbol::Fixed1;
        break;
      case '*':
        symbols[i] = DigitSymbol::Free;
        break;
      default:
        throw ValidationError(std::string("invalid pattern character '") + c + "' (allowed: 0, 1, *)");
    }
  }
  return make(n, symbols, allow_degenerate);
}

DigitSymbol DigitPattern::symbol(int position) const {
  if (position < 0 || position >= n_) throw ValidationError("digit position out of range");
  return symbols_[position];
}

std::vector<int> DigitPattern::free_positions() const {
  std::vector<int> out;
  out.reserve(free_count_);
  for (int i = 0; i < n_; ++i)
    if (symbols_[i] == DigitSymbol::Free) out.push_back(i);
  return out;
}

std::uint64_t DigitPattern::member_at(std::uint64_t index) const {
  std::uint64_t out = fixed_value_;
  std::uint64_t mask = free_mask_;
  while (mask != 0 && index != 0) {
    const std::uint64_t low = mask & (~mask + 1);
    if (index & 1) out |= low;
    index >>= 1;
    mask ^= low;
  }
  return out;
}

std::string DigitPattern::to_string() const {
  std::string s(n_, '*');
  for (int i = 0; i < n_; ++i) {
    const char c = symbols_[i] == DigitSymbol::Fixed0 ? '0' : symbols_[i] == DigitSymbol::Fixed1 ? '1' : '*';
    s[n_ - 1 - i] = c;
  }
  return s;
}

std::vector<std::uint64_t> DigitPattern::members() const { return {begin(), end()}; }

namespace detail {

ResidueWalk make_residue_walk(const DigitPattern& pattern, std::uint64_t q) {
  ResidueWalk walk;
  const auto positions = pattern.free_positions();
  walk.weight.reserve(positions.size() + 1);
  walk.prefix.reserve(positions.size() + 1);
  std::uint64_t acc = 0;
  for (int pos : positions) {
    const std::uint64_t w = arith::powmod(2, static_cast<std::uint64_t>(pos), q);
    walk.prefix.push_back(acc);
    walk.weight.push_back(w);
    acc = arith::addmod(acc, w, q);
  }
  // Sentinel so the final increment of the counter stays in bounds.
  walk.prefix.push_back(acc);
  walk.weight.push_back(0);
  walk.start = pattern.fixed_value() % q;
  return walk;
}

}  // namespace detail

CongruenceProfile congruence_histogram(const DigitPattern& pattern, std::uint64_t q) {
  if (q < 2) throw ValidationError("modulus must be at least 2");
  if (q > kMaxHistogramModulus) {
    throw ResourceError("histogram modulus " + std::to_string(q) + " exceeds cap 2^26");
  }
  CongruenceProfile profile{q, std::vector<std::uint64_t>(q, 0)};
  for_each_member_residue(pattern, q, [&](std::uint64_t, std::uint64_t r) { ++profile.counts[r]; });
  return profile;
}

MultipleCount count_multiples(const DigitPattern& pattern, std::uint64_t q) {
  if (q < 2) throw ValidationError("modulus must be at least 2");
  if (q > (std::uint64_t{1} << 63) - 1) throw ValidationError("modulus exceeds 2^63 - 1");
  MultipleCount out;
  const std::uint64_t members = pattern.member_count();
  const std::uint64_t top = pattern.max_member();
  const std::uint64_t multiples = top / q + 1;  // multiples of q in [0, top]
  if (multiples <= members) {
    const std::uint64_t fm = pattern.fixed_mask();
    const std::uint64_t fv = pattern.fixed_value();
    // Start at the first multiple not below the smallest member.
    for (std::uint64_t s = (fv + q - 1) / q * q; s <= top; s += q) {
      if ((s & fm) == fv) ++out.count;
      if (top - s < q) break;
    }
  } else {
    for_each_member_residue(pattern, q, [&](std::uint64_t, std::uint64_t r) { out.count += (r == 0); });
  }
  out.expected = static_cast<double>(members) / static_cast<double>(q);
  out.deviation = std::fabs(static_cast<double>(out.count) - out.expected);
  return out;
}

std::pair<DigitPattern, DigitPattern> split_free_positions(const DigitPattern& pattern,
                                                           std::span<const int> chosen) {
  const int n = pattern.bits();
  std::vector<DigitSymbol> a(pattern.symbols().begin(), pattern.symbols().end());
  std::vector<DigitSymbol> b(n, DigitSymbol::Fixed0);
  for (int pos : chosen) {
    if (pos < 0 || pos >= n) throw ValidationError("chosen position " + std::to_string(pos) + " out of range");
    if (pattern.symbol(pos) != DigitSymbol::Free) {
      throw ValidationError("chosen position " + std::to_string(pos) + " is fixed");
    }
    a[pos] = DigitSymbol::Fixed0;
    b[pos] = DigitSymbol::Free;
  }
  return {DigitPattern::make(n, a, true), DigitPattern::make(n, b, true)};
}

DigitPattern random_pattern(int n, int fixed, bool starred, std::mt19937_64& rng) {
  if (n < kMinPatternBits || n > kMaxPatternBits) throw ValidationError("pattern bit-length out of range [2, 63]");
  if (fixed < (starred ? 1 : 0) || fixed >= n) throw ValidationError("fixed count out of range");
  std::vector<DigitSymbol> symbols(n, DigitSymbol::Free);
  std::vector<int> positions;
  for (int i = starred ? 1 : 0; i < n; ++i) positions.push_back(i);
  std::shuffle(positions.begin(), positions.end(), rng);
  int remaining = fixed;
  if (starred) {
    symbols[0] = DigitSymbol::Fixed1;
    --remaining;
  }
  std::bernoulli_distribution coin(0.5);
  for (int j = 0; j < remaining; ++j) symbols[positions[j]] = coin(rng) ? DigitSymbol::Fixed1 : DigitSymbol::Fixed0;
  return DigitPattern::make(n, symbols);
}

std::vector<DigitPattern> random_pattern_corpus(std::size_t count, int n, double max_kappa, bool starred,
                                                std::uint64_t seed) {
  const int low = starred ? 1 : 0;
  const int high = std::min(n - 1, static_cast<int>(std::floor(max_kappa * n + 1e-9)));
  if (high < low) throw ValidationError("max kappa leaves no admissible fixed count");
  std::mt19937_64 rng(seed);
  std::vector<DigitPattern> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int fixed = std::uniform_int_distribution<int>(low, high)(rng);
    out.push_back(random_pattern(n, fixed, starred, rng));
  }
  return out;
}

}  // namespace digitsieve
