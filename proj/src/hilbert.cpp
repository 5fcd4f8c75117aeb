#include "digitsieve/hilbert.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <string>

#include "digitsieve/arith.hpp"
#include "digitsieve/error.hpp"
#include "digitsieve/parallel.hpp"

namespace digitsieve {

namespace {

void require_prime(std::uint64_t p) {
  if (!arith::is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
}

std::vector<std::uint64_t> normalized_set(std::span<const std::uint64_t> set, std::uint64_t p) {
  std::vector<std::uint64_t> out;
  out.reserve(set.size());
  for (std::uint64_t x : set) out.push_back(x % p);
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw ValidationError("set elements must be pairwise distinct mod p");
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ResidueSet

ResidueSet::ResidueSet(std::uint64_t p) : p_(p), words_((p + 63) / 64, 0) {
  if (p == 0) throw ValidationError("residue set modulus must be positive");
}

ResidueSet ResidueSet::of(std::uint64_t p, std::span<const std::uint64_t> elements) {
  ResidueSet s(p);
  for (std::uint64_t x : elements) s.insert(x % p);
  return s;
}

ResidueSet ResidueSet::full(std::uint64_t p) {
  ResidueSet s(p);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  if (p % 64) s.words_.back() &= (std::uint64_t{1} << (p % 64)) - 1;
  return s;
}

void ResidueSet::insert(std::uint64_t x) {
  if (x >= p_) throw ValidationError("residue " + std::to_string(x) + " outside [0, p)");
  words_[x >> 6] |= std::uint64_t{1} << (x & 63);
}

std::uint64_t ResidueSet::size() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

ResidueSet ResidueSet::shifted(std::uint64_t t) const {
  t %= p_;
  if (t == 0) return *this;
  ResidueSet out(p_);
  const std::size_t nw = words_.size();
  // Bits x < p - t move up by t.
  {
    const std::size_t ws = t / 64, bs = t % 64;
    for (std::size_t i = nw; i-- > ws;) {
      std::uint64_t v = words_[i - ws] << bs;
      if (bs && i > ws) v |= words_[i - ws - 1] >> (64 - bs);
      out.words_[i] = v;
    }
    if (p_ % 64) out.words_.back() &= (std::uint64_t{1} << (p_ % 64)) - 1;
  }
  // Bits x >= p - t wrap to x + t - p.
  {
    const std::uint64_t back = p_ - t;
    const std::size_t ws = back / 64, bs = back % 64;
    for (std::size_t i = 0; i + ws < nw; ++i) {
      std::uint64_t v = words_[i + ws] >> bs;
      if (bs && i + ws + 1 < nw) v |= words_[i + ws + 1] << (64 - bs);
      out.words_[i] |= v;
    }
  }
  return out;
}

ResidueSet& ResidueSet::operator|=(const ResidueSet& other) {
  if (other.p_ != p_) throw ValidationError("residue sets have different moduli");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

bool ResidueSet::intersects(const ResidueSet& other) const {
  if (other.p_ != p_) throw ValidationError("residue sets have different moduli");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

ResidueSet ResidueSet::complement() const {
  ResidueSet out = full(p_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~words_[i];
  return out;
}

std::vector<std::uint64_t> ResidueSet::elements() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (std::uint64_t w = words_[i]; w != 0; w &= w - 1) out.push_back(i * 64 + std::countr_zero(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cubes and subset sums

HilbertCube build_cube(std::uint64_t p, std::uint64_t a0, std::span<const std::uint64_t> gens) {
  require_prime(p);
  if (gens.size() > kMaxCubeDimension) {
    throw ResourceError("cube dimension " + std::to_string(gens.size()) + " exceeds cap 30");
  }
  HilbertCube cube;
  cube.p = p;
  cube.a0 = a0 % p;
  for (std::uint64_t g : gens) cube.gens.push_back(g % p);
  {
    auto sorted = cube.gens;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("cube generators must be pairwise distinct mod p");
    }
  }
  cube.elements = ResidueSet(p);
  cube.elements.insert(cube.a0);
  for (std::uint64_t g : cube.gens) cube.elements |= cube.elements.shifted(g);
  return cube;
}

SubsetSums subset_sums_k(std::span<const std::uint64_t> set, std::uint64_t k, std::uint64_t p) {
  require_prime(p);
  const auto s = normalized_set(set, p);
  const std::uint64_t m = s.size();
  if (k > m) throw ValidationError("k exceeds the set size");
  // rows[j] = sums of j-element subsets of the elements processed so far.
  std::vector<ResidueSet> rows(k + 1, ResidueSet(p));
  rows[0].insert(0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t top = std::min<std::uint64_t>(k, i + 1);
    for (std::uint64_t j = top; j >= 1; --j) rows[j] |= rows[j - 1].shifted(s[i]);
  }
  SubsetSums out{rows[k], 0, false};
  const std::uint64_t claimed = k * m - k * k + 1;
  out.bound = std::min(p, claimed);
  out.bound_holds = out.sums.size() >= out.bound;
  return out;
}

SubsetSums sigma_star(std::span<const std::uint64_t> set, std::uint64_t p) {
  require_prime(p);
  const auto s = normalized_set(set, p);
  ResidueSet sums(p);
  sums.insert(0);
  for (std::uint64_t x : s) sums |= sums.shifted(x);
  const std::uint64_t m = s.size();
  SubsetSums out{sums, 0, false};
  out.bound = std::min(p, (m / 2) * ((m + 1) / 2) + 1);
  out.bound_holds = out.sums.size() >= out.bound;
  return out;
}

Progression longest_ap(const ResidueSet& set) {
  const std::uint64_t p = set.modulus();
  const auto elems = set.elements();
  if (elems.empty()) throw ValidationError("longest_ap: empty set");
  if (elems.size() == p) return {0, 1, p};
  Progression best{elems.front(), 1, 1};
  const std::uint64_t max_d = std::max<std::uint64_t>(1, (p - 1) / 2);
  for (std::uint64_t d = 1; d <= max_d && d < p; ++d) {
    for (std::uint64_t x : elems) {
      // Only start runs at elements without a predecessor.
      if (set.contains((x + p - d) % p)) continue;
      std::uint64_t len = 1;
      for (std::uint64_t y = (x + d) % p; set.contains(y); y = (y + d) % p) ++len;
      if (len > best.length) best = {x, d, len};
    }
  }
  return best;
}

bool primitive_root_test(std::uint64_t g, std::uint64_t p) {
  require_prime(p);
  if (g % p == 0) throw ValidationError("0 is not a unit mod p");
  for (std::uint64_t l : arith::distinct_prime_factors(p - 1 == 0 ? 1 : p - 1)) {
    if (arith::powmod(g, (p - 1) / l, p) == 1) return false;
  }
  return true;
}

ResidueSet primitive_roots(std::uint64_t p) {
  require_prime(p);
  const auto factors = p > 2 ? arith::distinct_prime_factors(p - 1) : std::vector<std::uint64_t>{};
  ResidueSet out(p);
  for (std::uint64_t g = 1; g < p; ++g) {
    bool generator = true;
    for (std::uint64_t l : factors) {
      if (arith::powmod(g, (p - 1) / l, p) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) out.insert(g);
  }
  return out;
}

ResidueSet quadratic_nonresidues(std::uint64_t p) {
  require_prime(p);
  if (p == 2) throw ValidationError("p = 2 has no quadratic non-residues");
  ResidueSet squares(p);
  for (std::uint64_t x = 1; x <= (p - 1) / 2; ++x) squares.insert(arith::mulmod(x, x, p));
  ResidueSet out(p);
  for (std::uint64_t x = 1; x < p; ++x)
    if (!squares.contains(x)) out.insert(x);
  return out;
}

// ---------------------------------------------------------------------------
// Cube dimension search

namespace {

using Mask = std::uint64_t;

struct SmallField {
  std::uint64_t p;
  Mask full;
  Mask rot(Mask m, std::uint64_t t) const {
    if (t == 0) return m;
    return ((m << t) | (m >> (p - t))) & full;
  }
};

Mask to_mask(const ResidueSet& s) {
  Mask m = 0;
  for (auto x : s.elements()) m |= Mask{1} << x;
  return m;
}

struct Witness {
  int dimension = -1;
  std::uint64_t a0 = 0;
  std::vector<std::uint64_t> gens;
};

class BranchAndBound {
 public:
  BranchAndBound(const SmallField& f, Mask forbidden, std::atomic<int>& global_best)
      : f_(f), forbidden_(forbidden), global_best_(global_best) {}

  Witness run(std::uint64_t a0, bool allow_zero_gen) {
    best_ = {0, a0, {}};
    a0_ = a0;
    const Mask start = Mask{1} << a0;
    std::vector<std::uint64_t> valid;
    for (std::uint64_t g = allow_zero_gen ? 0 : 1; g < f_.p; ++g)
      if ((f_.rot(start, g) & forbidden_) == 0) valid.push_back(g);
    dfs(start, valid);
    return best_;
  }

 private:
  void dfs(Mask cube, const std::vector<std::uint64_t>& valid) {
    const int d = static_cast<int>(gens_.size());
    for (std::size_t i = 0; i < valid.size(); ++i) {
      const int bound = d + 1 + static_cast<int>(valid.size() - i - 1);
      if (bound <= best_.dimension || bound < global_best_.load(std::memory_order_relaxed)) break;
      const std::uint64_t g = valid[i];
      const Mask next = cube | f_.rot(cube, g);
      gens_.push_back(g);
      if (d + 1 > best_.dimension) {
        best_ = {d + 1, a0_, gens_};
        int seen = global_best_.load();
        while (seen < d + 1 && !global_best_.compare_exchange_weak(seen, d + 1)) {
        }
      }
      std::vector<std::uint64_t> child;
      child.reserve(valid.size() - i - 1);
      for (std::size_t j = i + 1; j < valid.size(); ++j)
        if ((f_.rot(next, valid[j]) & forbidden_) == 0) child.push_back(valid[j]);
      dfs(next, child);
      gens_.pop_back();
    }
  }

  const SmallField& f_;
  Mask forbidden_;
  std::atomic<int>& global_best_;
  std::uint64_t a0_ = 0;
  std::vector<std::uint64_t> gens_;
  Witness best_;
};

CubeSearchResult finish(std::uint64_t p, const Witness& w, bool exact, std::string predicate, bool allow_zero) {
  CubeSearchResult out;
  out.dimension = w.dimension;
  out.witness = build_cube(p, w.a0, w.gens);
  out.exact = exact;
  out.predicate = std::move(predicate);
  out.allow_zero_gen = allow_zero;
  return out;
}

void validate_forbidden(std::uint64_t p, const ResidueSet& forbidden) {
  require_prime(p);
  if (forbidden.modulus() != p) throw ValidationError("forbidden set has a different modulus");
  if (forbidden.size() == p) throw ValidationError("forbidden set covers all of F_p");
}

}  // namespace

CubeSearchResult max_cube_dimension(std::uint64_t p, const ResidueSet& forbidden, const CubeSearchOptions& options,
                                    std::string predicate) {
  validate_forbidden(p, forbidden);
  if (options.exact_cap > 64) throw ValidationError("exact search cap must be at most 64");
  const auto allowed = forbidden.complement().elements();

  if (p <= options.exact_cap) {
    const SmallField field{p, p == 64 ? ~Mask{0} : (Mask{1} << p) - 1};
    const Mask forbid = to_mask(forbidden);
    std::atomic<int> global_best{0};
    std::vector<Witness> per_start(allowed.size());
    parallel_chunks(allowed.size(), options.threads, [&](std::size_t i) {
      BranchAndBound search(field, forbid, global_best);
      per_start[i] = search.run(allowed[i], options.allow_zero_gen);
    });
    // Largest dimension; ties go to the smallest a0 (allowed is ascending).
    const Witness* best = &per_start.front();
    for (const auto& w : per_start)
      if (w.dimension > best->dimension) best = &w;
    return finish(p, *best, true, std::move(predicate), options.allow_zero_gen);
  }

  std::mt19937_64 rng(options.seed);
  std::vector<std::uint64_t> candidates;
  for (std::uint64_t g = options.allow_zero_gen ? 0 : 1; g < p; ++g) candidates.push_back(g);
  Witness best{0, allowed.front(), {}};
  const std::uint64_t restarts = std::max<std::uint64_t>(1, options.greedy_restarts);
  for (std::uint64_t r = 0; r < restarts; ++r) {
    const std::uint64_t a0 = allowed[std::uniform_int_distribution<std::size_t>(0, allowed.size() - 1)(rng)];
    std::shuffle(candidates.begin(), candidates.end(), rng);
    ResidueSet cube(p);
    cube.insert(a0);
    std::vector<std::uint64_t> gens;
    for (std::uint64_t g : candidates) {
      if (gens.size() >= static_cast<std::size_t>(kMaxCubeDimension)) break;
      ResidueSet moved = cube.shifted(g);
      if (moved.intersects(forbidden)) continue;
      cube |= moved;
      gens.push_back(g);
    }
    if (static_cast<int>(gens.size()) > best.dimension) {
      std::sort(gens.begin(), gens.end());
      best = {static_cast<int>(gens.size()), a0, gens};
    }
  }
  return finish(p, best, false, std::move(predicate), options.allow_zero_gen);
}

CubeSearchResult max_cube_dimension_bruteforce(std::uint64_t p, const ResidueSet& forbidden, bool allow_zero_gen,
                                               std::string predicate) {
  validate_forbidden(p, forbidden);
  if (p > 26) throw ResourceError("brute-force cube search is capped at p <= 26");
  const SmallField field{p, (Mask{1} << p) - 1};
  const Mask forbid = to_mask(forbidden);
  const std::uint64_t first = allow_zero_gen ? 0 : 1;
  const std::uint64_t universe = p - first;
  Witness best;
  for (Mask subset = 0; subset < (Mask{1} << universe); ++subset) {
    const int d = std::popcount(subset);
    if (d < best.dimension) continue;
    Mask cube = 1;  // a0 = 0
    for (Mask rest = subset; rest != 0; rest &= rest - 1) cube |= field.rot(cube, std::countr_zero(rest) + first);
    for (std::uint64_t a0 = 0; a0 < p; ++a0) {
      if ((field.rot(cube, a0) & forbid) != 0) continue;
      std::vector<std::uint64_t> gens;
      for (Mask rest = subset; rest != 0; rest &= rest - 1) gens.push_back(std::countr_zero(rest) + first);
      if (d > best.dimension || a0 < best.a0 || (a0 == best.a0 && gens < best.gens)) best = {d, a0, gens};
      break;
    }
  }
  return finish(p, best, true, std::move(predicate), allow_zero_gen);
}

CubeBoundsReport compute_f_and_F(std::uint64_t p, const CubeSearchOptions& options) {
  require_prime(p);
  if (p == 2) throw ValidationError("f(p) and F(p) need an odd prime");
  CubeBoundsReport out;
  out.p = p;
  out.f = max_cube_dimension(p, quadratic_nonresidues(p), options, "quadratic-nonresidue");
  out.F = max_cube_dimension(p, primitive_roots(p), options, "primitive-root");
  out.bound_12p14 = 12.0 * std::pow(static_cast<double>(p), 0.25);
  out.bound_p319 = std::pow(static_cast<double>(p), 3.0 / 19.0);
  out.f_le_F = !(out.f.exact && out.F.exact) || out.f.dimension <= out.F.dimension;
  out.f_below_12p14 = out.f.dimension < out.bound_12p14;
  return out;
}

}  // namespace digitsieve
