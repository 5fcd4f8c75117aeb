#pragma once

#include <cstdint>
#include <iterator>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Digit-prescribed integer sets.
//
// A DigitPattern of bit-length n fixes some binary digits of an integer to 0
// or 1 and leaves the others free. Its member set contains every integer
// s = sum d_i 2^i (0 <= i < n) whose digits agree with the fixed positions.
// Position 0 is the least significant bit. The textual form used by the CLI is
// most-significant-bit first, so "**1" is n = 3 with bit 0 fixed to 1.

namespace digitsieve {

enum class DigitSymbol : std::uint8_t { Fixed0, Fixed1, Free };

inline constexpr int kMinPatternBits = 2;
inline constexpr int kMaxPatternBits = 63;

class DigitPattern {
 public:
  // Validates length and range. Fully fixed patterns (no free position) are
  // rejected unless allow_degenerate is set.
  static DigitPattern make(int n, std::span<const DigitSymbol> symbols, bool allow_degenerate = false);

  // Parses an MSB-first string over {0, 1, *}.
  static DigitPattern parse(std::string_view msb_first, bool allow_degenerate = false);

  int bits() const { return n_; }
  int fixed_count() const { return n_ - free_count_; }
  int free_count() const { return free_count_; }
  double kappa() const { return static_cast<double>(fixed_count()) / n_; }
  bool starred() const { return symbol(0) == DigitSymbol::Fixed1; }
  bool degenerate() const { return free_count_ == 0; }

  DigitSymbol symbol(int position) const;
  std::span<const DigitSymbol> symbols() const { return symbols_; }

  std::uint64_t fixed_mask() const { return fixed_mask_; }
  std::uint64_t fixed_value() const { return fixed_value_; }
  std::uint64_t free_mask() const { return free_mask_; }
  std::vector<int> free_positions() const;

  // 2^(n - k).
  std::uint64_t member_count() const { return std::uint64_t{1} << free_count_; }
  std::uint64_t max_member() const { return fixed_value_ | free_mask_; }
  bool contains(std::uint64_t s) const { return (s >> n_) == 0 && (s & fixed_mask_) == fixed_value_; }

  // The index-th member in ascending order: scatters the bits of index through
  // the free positions.
  std::uint64_t member_at(std::uint64_t index) const;

  std::string to_string() const;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::uint64_t*;
    using reference = std::uint64_t;

    iterator() = default;
    std::uint64_t operator*() const { return value_ | free_bits_; }
    iterator& operator++() {
      // Next subset of the free mask in increasing numeric order.
      free_bits_ = ((free_bits_ | ~free_mask_) + 1) & free_mask_;
      --remaining_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.remaining_ == b.remaining_; }

   private:
    friend class DigitPattern;
    iterator(std::uint64_t value, std::uint64_t free_mask, std::uint64_t remaining)
        : value_(value), free_mask_(free_mask), remaining_(remaining) {}
    std::uint64_t value_ = 0;
    std::uint64_t free_mask_ = 0;
    std::uint64_t free_bits_ = 0;
    std::uint64_t remaining_ = 0;
  };

  // Ascending enumeration of all members.
  iterator begin() const { return iterator(fixed_value_, free_mask_, member_count()); }
  iterator end() const { return iterator(fixed_value_, free_mask_, 0); }

  std::vector<std::uint64_t> members() const;

  friend bool operator==(const DigitPattern& a, const DigitPattern& b) { return a.symbols_ == b.symbols_; }

 private:
  DigitPattern() = default;

  int n_ = 0;
  int free_count_ = 0;
  std::vector<DigitSymbol> symbols_;
  std::uint64_t fixed_mask_ = 0;
  std::uint64_t fixed_value_ = 0;
  std::uint64_t free_mask_ = 0;
};

struct CongruenceProfile {
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> counts;  // counts[c] = #{s : s = c mod modulus}
};

struct MultipleCount {
  std::uint64_t count = 0;
  double expected = 0;   // member_count / q
  double deviation = 0;  // |count - expected|
};

// Largest modulus for which a dense histogram is materialized.
inline constexpr std::uint64_t kMaxHistogramModulus = std::uint64_t{1} << 26;

// Exact residue histogram by enumeration with incremental residue updates.
CongruenceProfile congruence_histogram(const DigitPattern& pattern, std::uint64_t q);

// #{s in N : q | s}. Works for any q >= 2, choosing between walking the
// multiples of q below 2^n and walking the members, whichever is shorter.
MultipleCount count_multiples(const DigitPattern& pattern, std::uint64_t q);

// Calls visit(member, member mod q) for every member in ascending order.
// Residues are updated incrementally from precomputed 2^i mod q.
template <class Visit>
void for_each_member_residue(const DigitPattern& pattern, std::uint64_t q, Visit&& visit);

// Splits the free positions into `chosen` (pattern B: chosen positions free,
// everything else fixed to 0) and the rest (pattern A: original pattern with
// chosen positions fixed to 0). Every member is uniquely a + b with disjoint
// bit supports.
std::pair<DigitPattern, DigitPattern> split_free_positions(const DigitPattern& pattern,
                                                           std::span<const int> chosen);

// Uniformly random pattern with exactly `fixed` fixed positions. A starred
// pattern always fixes bit 0 to 1 and spends one of the fixed positions on it.
DigitPattern random_pattern(int n, int fixed, bool starred, std::mt19937_64& rng);

// A seeded corpus: for each pattern the fixed count is drawn uniformly from
// [starred ? 1 : 0, floor(max_kappa * n)].
std::vector<DigitPattern> random_pattern_corpus(std::size_t count, int n, double max_kappa, bool starred,
                                                std::uint64_t seed);

// ---------------------------------------------------------------------------

namespace detail {
struct ResidueWalk {
  std::vector<std::uint64_t> weight;      // 2^{free position j} mod q
  std::vector<std::uint64_t> prefix;      // sum of weight[0..j) mod q
  std::uint64_t start = 0;                // fixed_value mod q
};
ResidueWalk make_residue_walk(const DigitPattern& pattern, std::uint64_t q);
}  // namespace detail

template <class Visit>
void for_each_member_residue(const DigitPattern& pattern, std::uint64_t q, Visit&& visit) {
  const auto walk = detail::make_residue_walk(pattern, q);
  const std::uint64_t free_mask = pattern.free_mask();
  const std::uint64_t base = pattern.fixed_value();
  const std::uint64_t total = pattern.member_count();
  std::uint64_t bits = 0;
  std::uint64_t residue = walk.start;
  for (std::uint64_t counter = 0;;) {
    visit(base | bits, residue);
    if (++counter == total) break;
    // The increment clears the t trailing ones of the counter and sets bit t.
    const int t = __builtin_ctzll(counter);
    residue = residue >= walk.prefix[t] ? residue - walk.prefix[t] : residue + (q - walk.prefix[t]);
    residue = residue >= q - walk.weight[t] ? residue - (q - walk.weight[t]) : residue + walk.weight[t];
    bits = ((bits | ~free_mask) + 1) & free_mask;
  }
}

}  // namespace digitsieve
