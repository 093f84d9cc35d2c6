#include "fpt/gen.hpp"

#include <random>

#include "fpt/error.hpp"

namespace fpt {

namespace {

// mt19937_64 has a standard-pinned output sequence; rejection keeps the
// bounding reproducible too.
struct GenRng {
  std::mt19937_64 eng;
  explicit GenRng(u64 seed) : eng(seed) {}
  u32 below(u32 n) {
    u64 lim = ~u64{0} - ~u64{0} % n;
    u64 v;
    do {
      v = eng();
    } while (v >= lim);
    return static_cast<u32>(v % n);
  }
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<u32>(hi - lo + 1))); }
};

MatFp elem(u32 p, int d, int r, int c) {
  MatFp m(p, d, d);
  m.at(r, c) = 1;
  return m;
}

BlockMatrix one_block(u32 p, int d, int i, int j, MatFp m) {
  BlockMatrix a = bm_zero(p, d);
  bm_set(a, i, j, std::move(m));
  return a;
}

// v w^T with w v = 0; square-zero, possibly zero for bad draws.
MatFp square_zero(GenRng& rng, u32 p, int d) {
  FpVec v(d, 0), w(d, 0);
  for (int k = 0; k < d; ++k) v[k] = rng.below(p);
  if (vec_is_zero(v)) v[rng.below(d)] = 1;
  int pivot = 0;
  while (v[pivot] == 0) ++pivot;
  for (int k = 0; k < d; ++k)
    if (k != pivot) w[k] = rng.below(p);
  u64 dot = 0;
  for (int k = 0; k < d; ++k) dot += static_cast<u64>(v[k]) * w[k];
  w[pivot] = static_cast<u32>((p - dot % p) % p) * fp_inv(v[pivot], p) % p;
  MatFp m(p, d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m.at(r, c) = static_cast<u32>(static_cast<u64>(v[r]) * w[c] % p);
  return m;
}

Rep gen_toeplitz(u32 p, int d) {
  int idx = std::min<int>(d, static_cast<int>(p));
  BlockMatrix a0 = bm_zero(p, d);
  MatFp m(p, d, d);
  for (int i = 0; i + 1 < idx; ++i) m.at(i, i + 1) = 1;
  if (!m.is_zero())
    for (int k = 0; k <= 2; ++k) bm_set(a0, k, k, m);
  return validated_rep(p, d, std::move(a0));
}

Rep gen_single_block(u32 p, int d, u64 seed) {
  GenRng rng(seed * 2 + 1);
  if (d < 2) return validated_rep(p, d, bm_zero(p, d));
  MatFp m = square_zero(rng, p, d);
  for (int tries = 0; m.is_zero() && tries < 32; ++tries) m = square_zero(rng, p, d);
  if (m.is_zero()) fail(ErrorKind::Budget, "gen: no nonzero square-zero block found");
  int i = rng.range(-1, 2), j = rng.range(-1, 2);
  return validated_rep(p, d, one_block(p, d, i, j, std::move(m)));
}

Rep gen_random(u32 p, int d, u64 seed) {
  GenRng rng(seed * 2 + 1);
  if (d < 2) return validated_rep(p, d, bm_zero(p, d));
  for (int attempt = 0; attempt < 64; ++attempt) {
    MatFp m = square_zero(rng, p, d);
    if (m.is_zero()) continue;
    BlockMatrix a0 = bm_zero(p, d);
    int i = rng.range(-1, 2), j = rng.range(-1, 2);
    int count = rng.range(1, 3);
    for (int k = 0; k < count; ++k) {
      int s = k == 0 ? 0 : rng.range(1, 3) * k;
      u32 scale = 1 + rng.below(p - 1);
      bm_set(a0, i + s, j + s, mat_scale(m, scale));
    }
    Rep rep = make_rep(p, d, std::move(a0));
    if (validate(rep).valid) return rep;
  }
  fail(ErrorKind::Budget, "gen: random family produced no valid instance in 64 attempts");
}

}  // namespace

Rep gen_instance(const std::string& family, u32 p, int d, u64 seed) {
  if (!is_prime_u32(p) || p >= (1u << 16))
    fail(ErrorKind::Mismatch, "gen: p must be a prime below 2^16");
  if (d < 1 || d > 64) fail(ErrorKind::Mismatch, "gen: d must be in [1, 64]");
  if (family == "trivial") return validated_rep(p, d, bm_zero(p, d));
  if (family == "toeplitz") return gen_toeplitz(p, d);
  if (family == "single-block") return gen_single_block(p, d, seed);
  if (family == "random") return gen_random(p, d, seed);
  if (d < 2) fail(ErrorKind::Mismatch, "gen: family " + family + " needs d >= 2");
  if (family == "e2")
    return validated_rep(p, d, one_block(p, d, 1, 0, elem(p, d, 0, 1)));
  if (family == "above-diagonal")
    return validated_rep(p, d, one_block(p, d, 0, 1, elem(p, d, 0, 1)));
  if (family == "shifted-lattice")
    return validated_rep(p, d, one_block(p, d, -1, 0, elem(p, d, 0, 1)));
  fail(ErrorKind::Mismatch, "gen: unknown family " + family);
}

const std::vector<NamedInstance>& shipped_instances() {
  static const std::vector<NamedInstance> suite = [] {
    std::vector<NamedInstance> v;
    auto add = [&](std::string name, std::string family, u32 p, int d, long long seed) {
      v.push_back({std::move(name), family, seed,
                   gen_instance(family, p, d, static_cast<u64>(seed))});
    };
    add("trivial-p2-d2", "trivial", 2, 2, 0);
    add("trivial-p5-d1", "trivial", 5, 1, 0);
    add("e2", "e2", 2, 2, 0);
    add("above-diagonal-p2-d2", "above-diagonal", 2, 2, 0);
    add("toeplitz-index2-p2-d2", "toeplitz", 2, 2, 0);
    add("toeplitz-index3-p3-d3", "toeplitz", 3, 3, 0);
    add("toeplitz-index2-p5-d2", "toeplitz", 5, 2, 0);
    add("single-block-p2-d2-s1", "single-block", 2, 2, 1);
    add("single-block-p3-d2-s2", "single-block", 3, 2, 2);
    add("single-block-p5-d3-s3", "single-block", 5, 3, 3);
    add("shifted-lattice-p2-d2", "shifted-lattice", 2, 2, 0);
    add("random-p2-d2-s4", "random", 2, 2, 4);
    add("random-p3-d3-s5", "random", 3, 3, 5);
    return v;
  }();
  return suite;
}

}  // namespace fpt
