#include "digitsieve/mult_stats.hpp"

#include <gmpxx.h>

#include <cmath>
#include <string>

#include "digitsieve/arith.hpp"
#include "digitsieve/error.hpp"
#include "digitsieve/parallel.hpp"

namespace digitsieve {

namespace {

constexpr std::size_t kChunks = 64;

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > x) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= x) ++r;
  return r;
}

void check_member_cap(const DigitPattern& pattern, const MultStatsLimits& limits) {
  if (pattern.member_count() > limits.max_members) {
    throw ResourceError("pattern has " + std::to_string(pattern.member_count()) +
                        " members, above the enumeration cap " + std::to_string(limits.max_members));
  }
}

// Member index range [begin, end) of one chunk.
std::pair<std::uint64_t, std::uint64_t> chunk_range(std::uint64_t total, std::size_t chunks, std::size_t c) {
  const std::uint64_t per = total / chunks, extra = total % chunks;
  const std::uint64_t begin = c * per + std::min<std::uint64_t>(c, extra);
  return {begin, begin + per + (c < extra ? 1 : 0)};
}

template <class Visit>
void for_member_indices(const DigitPattern& pattern, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
  if (begin >= end) return;
  const std::uint64_t free_mask = pattern.free_mask();
  std::uint64_t s = pattern.member_at(begin);
  for (std::uint64_t i = begin;;) {
    visit(s);
    if (++i == end) break;
    s = (((s | ~free_mask) + 1) & free_mask) | pattern.fixed_value();
  }
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0, carry = 0;
  void add(double x) {
    const double t = sum + x;
    carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

mpq_class tree_sum(std::vector<mpq_class> terms) {
  if (terms.empty()) return 0;
  while (terms.size() > 1) {
    std::size_t out = 0;
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) terms[out++] = terms[i] + terms[i + 1];
    if (terms.size() % 2) terms[out++] = terms.back();
    terms.resize(out);
  }
  return terms.front();
}

void distinct_primes_of(std::uint64_t s, const std::vector<std::uint32_t>& spf, std::vector<std::uint64_t>& out) {
  out.clear();
  if (!spf.empty() && s < spf.size()) {
    while (s > 1) {
      const std::uint32_t p = spf[s];
      out.push_back(p);
      while (s % p == 0) s /= p;
    }
  } else {
    out = arith::distinct_prime_factors(s);
  }
}

}  // namespace

PatternSummary summarize(const DigitPattern& pattern) {
  return {pattern.to_string(), pattern.bits(), pattern.fixed_count(), pattern.kappa(), pattern.starred()};
}

std::string_view to_string(CountMethod method) {
  return method == CountMethod::Moebius ? "moebius" : "direct-sieve";
}

std::vector<std::int8_t> moebius_table(std::uint64_t limit, std::uint64_t cap) {
  if (limit < 1) throw ValidationError("moebius_table: limit must be at least 1");
  if (limit > cap) {
    throw ResourceError("moebius_table: limit " + std::to_string(limit) + " exceeds cap " + std::to_string(cap));
  }
  return arith::moebius_sieve(limit);
}

SquarefreeReport squarefree_count_direct(const DigitPattern& pattern, const MultStatsLimits& limits) {
  check_member_cap(pattern, limits);
  SquarefreeReport report;
  report.pattern = summarize(pattern);
  report.total = pattern.member_count();
  report.method = CountMethod::DirectSieve;
  report.outside_proved_range = !pattern.starred() || pattern.kappa() >= 0.4;

  const std::uint64_t top = pattern.max_member();
  const std::uint64_t root = isqrt(top);
  std::vector<std::uint64_t> chunk_counts(kChunks, 0);

  if (top < limits.flag_sieve_limit) {
    std::vector<bool> square_divisible(top + 1, false);
    square_divisible[0] = true;
    for (std::uint32_t p : arith::primes_up_to(static_cast<std::uint32_t>(root))) {
      const std::uint64_t sq = std::uint64_t{p} * p;
      for (std::uint64_t m = sq; m <= top; m += sq) square_divisible[m] = true;
    }
    parallel_chunks(kChunks, limits.threads, [&](std::size_t c) {
      const auto [b, e] = chunk_range(report.total, kChunks, c);
      std::uint64_t local = 0;
      for_member_indices(pattern, b, e, [&](std::uint64_t s) { local += !square_divisible[s]; });
      chunk_counts[c] = local;
    });
  } else {
    if (root > 0xFFFFFFFFull) throw ResourceError("trial-division bound exceeds 2^32");
    const auto primes = arith::primes_up_to(static_cast<std::uint32_t>(root));
    parallel_chunks(kChunks, limits.threads, [&](std::size_t c) {
      const auto [b, e] = chunk_range(report.total, kChunks, c);
      std::uint64_t local = 0;
      for_member_indices(pattern, b, e, [&](std::uint64_t s) {
        if (s == 0) return;
        for (std::uint64_t p : primes) {
          const std::uint64_t sq = p * p;
          if (sq > s) break;
          if (s % sq == 0) return;
        }
        ++local;
      });
      chunk_counts[c] = local;
    });
  }
  for (auto v : chunk_counts) report.count += v;
  report.ratio = static_cast<double>(report.count) / static_cast<double>(report.total);
  return report;
}

SquarefreeReport squarefree_count_moebius(const DigitPattern& pattern, const MultStatsLimits& limits) {
  check_member_cap(pattern, limits);
  SquarefreeReport report;
  report.pattern = summarize(pattern);
  report.total = pattern.member_count();
  report.method = CountMethod::Moebius;
  report.outside_proved_range = !pattern.starred() || pattern.kappa() >= 0.4;

  // 0 is divisible by every q^2; dropping it from each count makes it
  // contribute nothing, i.e. squarefree(0) = false.
  const std::uint64_t zero = pattern.contains(0) ? 1 : 0;
  const std::uint64_t root = isqrt(pattern.max_member());
  std::int64_t sum = static_cast<std::int64_t>(report.total - zero);
  if (root >= 2) {
    const auto mu = moebius_table(root, limits.moebius_limit);
    for (std::uint64_t q = 2; q <= root; ++q) {
      if (mu[q] == 0) continue;
      const auto c = static_cast<std::int64_t>(count_multiples(pattern, q * q).count - zero);
      sum += mu[q] * c;
    }
  }
  report.count = static_cast<std::uint64_t>(sum);
  report.ratio = static_cast<double>(report.count) / static_cast<double>(report.total);
  return report;
}

EulerReport euler_ratio_sum(const DigitPattern& pattern, const MultStatsLimits& limits, ZeroPolicy zero_policy) {
  check_member_cap(pattern, limits);
  EulerReport report;
  report.pattern = summarize(pattern);
  report.outside_proved_range = !pattern.starred();

  const bool has_zero = pattern.contains(0);
  if (has_zero) {
    if (zero_policy == ZeroPolicy::Reject) {
      throw ValidationError("pattern contains 0 and the zero policy is reject");
    }
    report.zero_excluded = true;
    report.warnings.push_back("member 0 excluded from the Euler sum");
  }
  const std::uint64_t zero = has_zero ? 1 : 0;
  report.total = pattern.member_count() - zero;
  if (report.total == 0) throw ValidationError("pattern has no nonzero members");

  const std::uint64_t top = pattern.max_member();
  if (top > limits.moebius_limit) {
    throw ResourceError("Euler Moebius route needs mu up to " + std::to_string(top) + ", above cap " +
                        std::to_string(limits.moebius_limit));
  }
  std::vector<std::uint32_t> spf;
  if (top <= limits.spf_limit) spf = arith::smallest_prime_factor_sieve(static_cast<std::uint32_t>(top));
  const auto mu = arith::moebius_sieve(top);

  report.exact_mode = pattern.member_count() <= limits.exact_member_limit;
  if (report.exact_mode) {
    std::vector<mpq_class> direct;
    direct.reserve(report.total);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t s : pattern) {
      if (s == 0) continue;
      distinct_primes_of(s, spf, primes);
      mpz_class num = 1, den = 1;
      for (auto p : primes) {
        num *= static_cast<unsigned long>(p - 1);
        den *= static_cast<unsigned long>(p);
      }
      direct.emplace_back(num, den);
      direct.back().canonicalize();
    }
    std::vector<mpq_class> by_divisor;
    for (std::uint64_t q = 1; q <= top; ++q) {
      if (mu[q] == 0) continue;
      const std::uint64_t c = (q == 1 ? pattern.member_count() : count_multiples(pattern, q).count) - zero;
      if (c == 0) continue;
      by_divisor.emplace_back(mu[q] * static_cast<long>(c), static_cast<unsigned long>(q));
      by_divisor.back().canonicalize();
    }
    const mpq_class a = tree_sum(std::move(direct));
    const mpq_class b = tree_sum(std::move(by_divisor));
    report.sum = a.get_d();
    report.sum_moebius = b.get_d();
    report.exact = a.get_str();
    report.route_relative_difference = a == b ? 0.0 : std::fabs(report.sum - report.sum_moebius) / report.sum;
  } else {
    std::vector<CompensatedSum> partial(kChunks);
    parallel_chunks(kChunks, limits.threads, [&](std::size_t c) {
      const auto [b, e] = chunk_range(pattern.member_count(), kChunks, c);
      std::vector<std::uint64_t> primes;
      for_member_indices(pattern, b, e, [&](std::uint64_t s) {
        if (s == 0) return;
        distinct_primes_of(s, spf, primes);
        double ratio = 1.0;
        for (auto p : primes) ratio *= 1.0 - 1.0 / static_cast<double>(p);
        partial[c].add(ratio);
      });
    });
    CompensatedSum direct;
    for (const auto& p : partial) {
      direct.add(p.sum);
      direct.add(p.carry);
    }
    CompensatedSum by_divisor;
    for (std::uint64_t q = 1; q <= top; ++q) {
      if (mu[q] == 0) continue;
      const std::uint64_t c = (q == 1 ? pattern.member_count() : count_multiples(pattern, q).count) - zero;
      if (c != 0) by_divisor.add(mu[q] * static_cast<double>(c) / static_cast<double>(q));
    }
    report.sum = direct.value();
    report.sum_moebius = by_divisor.value();
    report.route_relative_difference = std::fabs(report.sum - report.sum_moebius) / std::fabs(report.sum);
  }
  report.ratio = report.sum / static_cast<double>(report.total);
  return report;
}

}  // namespace digitsieve
