#pragma once

#include <cstdint>
#include <span>
#include <vector>

// 64-bit modular arithmetic, primality, factoring and multiplicative sieves
// shared by the statistics modules.

namespace digitsieve::arith {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
  // a, b < m < 2^64; a + b may wrap, so compare against the complement.
  return a >= m - b ? a - (m - b) : a + b;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 powmod(u64 base, u64 exp, u64 m);

u64 gcd(u64 a, u64 b);

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

// Prime factorization with multiplicity, ascending. Trial division by small
// primes followed by Pollard rho (Brent) on the cofactor.
std::vector<u64> factor(u64 n);

// Distinct prime divisors, ascending.
std::vector<u64> distinct_prime_factors(u64 n);

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

// mu[0..limit] by a linear sieve; mu[0] is set to 0 and carries no meaning.
std::vector<std::int8_t> moebius_sieve(std::uint64_t limit);

// spf[0..limit], spf[x] = smallest prime factor of x (spf[0] = spf[1] = 0).
std::vector<std::uint32_t> smallest_prime_factor_sieve(std::uint32_t limit);

// First prime strictly greater than n (n < 2^63).
u64 next_prime(u64 n);

}  // namespace digitsieve::arith
