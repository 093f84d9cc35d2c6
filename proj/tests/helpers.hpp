#pragma once

#include <random>
#include <vector>

#include "fpt/block.hpp"
#include "fpt/fp.hpp"
#include "fpt/series.hpp"
#include "fpt/subgroup.hpp"

namespace fpt_test {

using fpt::u32;
using fpt::u64;

// Deterministic source of randomness for tests. mt19937_64 output is fully
// specified by the standard; bounding is done by rejection instead of
// std::uniform_int_distribution, whose mapping is implementation defined.
class Rng {
 public:
  explicit Rng(u64 seed) : eng_(seed) {}

  u64 next() { return eng_(); }

  // Uniform in [0, n).
  u32 below(u32 n) {
    u64 limit = ~u64(0) - (~u64(0) % n);
    u64 x;
    do { x = eng_(); } while (x >= limit);
    return static_cast<u32>(x % n);
  }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<u32>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 eng_;
};

// Runs f, requiring it to throw an Error of the given kind.
template <class F>
bool throws_kind(F&& f, fpt::ErrorKind kind) {
  try {
    f();
  } catch (const fpt::Error& e) {
    return e.kind() == kind;
  }
  return false;
}

inline fpt::MatFp random_mat(Rng& rng, u32 p, int rows, int cols) {
  fpt::MatFp m(p, rows, cols);
  for (u32& v : m.a) v = rng.below(p);
  return m;
}

inline fpt::FpVec random_vec(Rng& rng, u32 p, int n) {
  fpt::FpVec v(static_cast<size_t>(n));
  for (u32& x : v) x = rng.below(p);
  return v;
}

inline fpt::MatFp random_invertible(Rng& rng, u32 p, int n) {
  for (;;) {
    fpt::MatFp m = random_mat(rng, p, n, n);
    if (fpt::mat_rank(m) == n) return m;
  }
}

// Random nilpotent matrix: strictly lower triangular filling conjugated by a
// random invertible matrix.
inline fpt::MatFp random_nilpotent(Rng& rng, u32 p, int n) {
  fpt::MatFp m(p, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) m.at(i, j) = rng.below(p);
  fpt::MatFp g = random_invertible(rng, p, n);
  return fpt::mat_mul(fpt::mat_inverse(g), fpt::mat_mul(m, g));
}

// Exact series with coefficients drawn on every degree in [lo, hi].
inline fpt::SeriesVector random_series(Rng& rng, u32 p, int d, int lo, int hi) {
  fpt::SeriesVector z = fpt::series_zero(p, d);
  for (int n = lo; n <= hi; ++n) fpt::series_set(z, n, random_vec(rng, p, d));
  return z;
}

// Random shift-invariant compact open subgroup of depth K, generated from a
// few random vectors together with the forced deep tail.
inline fpt::CompactOpenSubgroup random_tidy(Rng& rng, u32 p, int d, int K) {
  std::vector<fpt::SeriesVector> gens;
  int n = rng.range(1, d + 1);
  for (int i = 0; i < n; ++i) gens.push_back(random_series(rng, p, d, -(K - 1), K - 1));
  return fpt::from_generators(p, d, gens, K);
}

// n x n matrix with a single 1 at (r, c).
inline fpt::MatFp elem_mat(u32 p, int n, int r, int c) {
  fpt::MatFp m(p, n, n);
  m.at(r, c) = 1;
  return m;
}

// Nilpotent Jordan shift: ones on the first subdiagonal, nilpotency index n.
inline fpt::MatFp jordan_mat(u32 p, int n) {
  fpt::MatFp m(p, n, n);
  for (int i = 1; i < n; ++i) m.at(i, i - 1) = 1;
  return m;
}

inline fpt::BlockMatrix single_block(u32 p, int d, int i, int j, const fpt::MatFp& m) {
  fpt::BlockMatrix a = fpt::bm_zero(p, d);
  fpt::bm_set(a, i, j, m);
  return a;
}

// Valid generator by construction: one nilpotent block repeated along a
// stretch of the diagonal commutes with all of its shift conjugates, and has
// order p exactly when the block's p-th power vanishes.
inline fpt::BlockMatrix random_diag_a0(Rng& rng, u32 p, int d, int k_lo, int k_hi) {
  for (;;) {
    fpt::MatFp n = random_nilpotent(rng, p, d);
    if (n.is_zero() || !fpt::mat_pow(n, p).is_zero()) continue;
    fpt::BlockMatrix a = fpt::bm_zero(p, d);
    for (int k = k_lo; k <= k_hi; ++k) fpt::bm_set(a, k, k, n);
    return a;
  }
}

// Valid generator with a single off-diagonal block (i != j, d >= 2): order
// and shift commutation both reduce to the block squaring to zero.
inline fpt::BlockMatrix random_offdiag_a0(Rng& rng, u32 p, int d, int i, int j) {
  for (;;) {
    fpt::MatFp n = random_mat(rng, p, d, d);
    if (n.is_zero() || !fpt::mat_mul(n, n).is_zero()) continue;
    return single_block(p, d, i, j, n);
  }
}

// Block matrix with `count` random blocks placed in the given index ranges.
inline fpt::BlockMatrix random_block_matrix(Rng& rng, u32 p, int d, int i_lo, int i_hi,
                                            int j_lo, int j_hi, int count) {
  fpt::BlockMatrix a = fpt::bm_zero(p, d);
  for (int t = 0; t < count; ++t)
    fpt::bm_set(a, rng.range(i_lo, i_hi), rng.range(j_lo, j_hi), random_mat(rng, p, d, d));
  return a;
}

}  // namespace fpt_test
