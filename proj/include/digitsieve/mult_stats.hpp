#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "digitsieve/pattern.hpp"

// Squarefree counts and Euler-ratio sums over digit-pattern sets.
//
// Both statistics are computed two ways: a route that decomposes over the
// Moebius function and uses congruence counts #{s : q | s}, and a direct route
// (squarefree flag sieve, or per-member factorization). The two must agree.

namespace digitsieve {

inline constexpr double kEightOverPiSquared = 8.0 / (std::numbers::pi * std::numbers::pi);

struct PatternSummary {
  std::string text;  // MSB-first
  int n = 0;
  int k = 0;
  double kappa = 0;
  bool starred = false;
};

PatternSummary summarize(const DigitPattern& pattern);

enum class CountMethod { Moebius, DirectSieve };
std::string_view to_string(CountMethod method);

struct MultStatsLimits {
  std::uint64_t max_members = std::uint64_t{1} << 28;
  std::uint64_t moebius_limit = std::uint64_t{1} << 26;
  // Largest member bound for which a squarefree flag sieve is built; above it
  // the direct route falls back to trial division by prime squares.
  std::uint64_t flag_sieve_limit = std::uint64_t{1} << 28;
  // Largest member bound for a smallest-prime-factor table.
  std::uint64_t spf_limit = std::uint64_t{1} << 25;
  // Euler sums are exact rationals up to this many members.
  std::uint64_t exact_member_limit = std::uint64_t{1} << 16;
  unsigned threads = 1;
};

struct SquarefreeReport {
  PatternSummary pattern;
  std::uint64_t count = 0;
  std::uint64_t total = 0;
  double ratio = 0;
  double predicted = kEightOverPiSquared;
  CountMethod method = CountMethod::DirectSieve;
  // Unstarred pattern or kappa >= 2/5: the density statement is not proved here.
  bool outside_proved_range = false;
};

// Index q holds mu(q) for 1 <= q <= limit; index 0 is unused (0).
std::vector<std::int8_t> moebius_table(std::uint64_t limit,
                                       std::uint64_t cap = MultStatsLimits{}.moebius_limit);

// squarefree(0) is false.
SquarefreeReport squarefree_count_direct(const DigitPattern& pattern, const MultStatsLimits& limits = {});
SquarefreeReport squarefree_count_moebius(const DigitPattern& pattern, const MultStatsLimits& limits = {});

enum class ZeroPolicy { Exclude, Reject };

struct EulerReport {
  PatternSummary pattern;
  double sum = 0;             // sum of phi(s)/s via per-member factorization
  double sum_moebius = 0;     // sum over q of mu(q)/q * #{s : q | s}
  std::optional<std::string> exact;  // "num/den" in exact mode (both routes identical)
  std::uint64_t total = 0;    // number of summed members (0 excluded)
  double ratio = 0;
  double predicted = kEightOverPiSquared;
  double route_relative_difference = 0;
  bool exact_mode = false;
  bool zero_excluded = false;
  bool outside_proved_range = false;
  std::vector<std::string> warnings;
};

EulerReport euler_ratio_sum(const DigitPattern& pattern, const MultStatsLimits& limits = {},
                            ZeroPolicy zero_policy = ZeroPolicy::Exclude);

}  // namespace digitsieve
