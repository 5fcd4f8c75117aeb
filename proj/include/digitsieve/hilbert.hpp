#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Hilbert cubes H(a0; a1..ad) = {a0 + sum t_i a_i : t_i in {0, 1}} in F_p,
// subset-sum sets, arithmetic progressions, and the largest cube dimension
// avoiding a forbidden set (f(p): quadratic non-residues, F(p): primitive roots).

namespace digitsieve {

// A subset of Z/pZ stored as a bitset.
class ResidueSet {
 public:
  ResidueSet() = default;
  explicit ResidueSet(std::uint64_t p);
  static ResidueSet of(std::uint64_t p, std::span<const std::uint64_t> elements);
  static ResidueSet full(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }
  void insert(std::uint64_t x);
  bool contains(std::uint64_t x) const { return (words_[x >> 6] >> (x & 63)) & 1; }
  std::uint64_t size() const;
  bool empty() const { return size() == 0; }

  // {x + t mod p : x in this}
  ResidueSet shifted(std::uint64_t t) const;
  ResidueSet& operator|=(const ResidueSet& other);
  bool intersects(const ResidueSet& other) const;
  ResidueSet complement() const;
  std::vector<std::uint64_t> elements() const;

  friend bool operator==(const ResidueSet&, const ResidueSet&) = default;

 private:
  std::uint64_t p_ = 0;
  std::vector<std::uint64_t> words_;
};

struct HilbertCube {
  std::uint64_t p = 0;
  std::uint64_t a0 = 0;
  std::vector<std::uint64_t> gens;
  ResidueSet elements;
  int dimension() const { return static_cast<int>(gens.size()); }
};

inline constexpr int kMaxCubeDimension = 30;

// E_0 = {a0}, E_i = E_{i-1} u (E_{i-1} + a_i). Generators must be pairwise
// distinct mod p.
HilbertCube build_cube(std::uint64_t p, std::uint64_t a0, std::span<const std::uint64_t> gens);

struct SubsetSums {
  ResidueSet sums;
  std::uint64_t bound = 0;   // min{p, k#S - k^2 + 1}
  bool bound_holds = false;
};

// Sigma_k(S): sums of k-element subsets. Bound min{p, k#S - k^2 + 1}.
SubsetSums subset_sums_k(std::span<const std::uint64_t> set, std::uint64_t k, std::uint64_t p);

// Union of Sigma_k(S) over all k. Bound min{p, floor(#S/2) ceil(#S/2) + 1}.
SubsetSums sigma_star(std::span<const std::uint64_t> set, std::uint64_t p);

struct Progression {
  std::uint64_t start = 0;
  std::uint64_t difference = 0;
  std::uint64_t length = 0;
};

// Longest progression {start + j d mod p} contained in S, with d in
// [1, (p-1)/2]. Ties: smallest d, then smallest start.
Progression longest_ap(const ResidueSet& set);

bool primitive_root_test(std::uint64_t g, std::uint64_t p);
ResidueSet primitive_roots(std::uint64_t p);
// Nonzero quadratic non-residues.
ResidueSet quadratic_nonresidues(std::uint64_t p);

struct CubeSearchOptions {
  bool allow_zero_gen = true;
  std::uint64_t exact_cap = 40;
  std::uint64_t greedy_restarts = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct CubeSearchResult {
  int dimension = 0;
  HilbertCube witness;
  bool exact = false;
  std::string predicate;
  bool allow_zero_gen = true;
};

// Branch-and-bound over a0 and increasing generators a_1 < ... < a_d when
// p <= exact_cap; seeded greedy restarts (exact = false) above it.
CubeSearchResult max_cube_dimension(std::uint64_t p, const ResidueSet& forbidden,
                                    const CubeSearchOptions& options = {}, std::string predicate = "custom");

// Independent exhaustive search over every generator subset and every a0.
// Exponential in p; capped at p <= 26.
CubeSearchResult max_cube_dimension_bruteforce(std::uint64_t p, const ResidueSet& forbidden,
                                               bool allow_zero_gen = true, std::string predicate = "custom");

struct CubeBoundsReport {
  std::uint64_t p = 0;
  CubeSearchResult f;   // avoiding quadratic non-residues
  CubeSearchResult F;   // avoiding primitive roots
  double bound_12p14 = 0;
  double bound_p319 = 0;
  bool f_le_F = true;          // only meaningful when both are exact
  bool f_below_12p14 = true;
};

CubeBoundsReport compute_f_and_F(std::uint64_t p, const CubeSearchOptions& options = {});

}  // namespace digitsieve
