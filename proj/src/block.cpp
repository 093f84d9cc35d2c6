#include "fpt/block.hpp"

#include <sstream>

namespace fpt {

BlockMatrix bm_zero(u32 p, int d) {
  check_modulus(p);
  if (d <= 0) fail(ErrorKind::Mismatch, "block dimension must be positive");
  BlockMatrix a;
  a.p = p;
  a.d = d;
  return a;
}

void bm_set(BlockMatrix& a, int i, int j, MatFp m) {
  check_degree(i);
  check_degree(j);
  if (m.p != a.p) fail(ErrorKind::Mismatch, "bm_set: moduli differ");
  if (m.rows != a.d || m.cols != a.d)
    fail(ErrorKind::Mismatch, "bm_set: block must be " + std::to_string(a.d) + "x" +
                                  std::to_string(a.d));
  if (m.is_zero())
    a.blocks.erase(BlockKey{i, j});
  else
    a.blocks[BlockKey{i, j}] = std::move(m);
}

void bm_add_to(BlockMatrix& a, int i, int j, const MatFp& m) {
  auto it = a.blocks.find(BlockKey{i, j});
  if (it == a.blocks.end())
    bm_set(a, i, j, m);
  else
    bm_set(a, i, j, mat_add(it->second, m));
}

MatFp bm_block(const BlockMatrix& a, int i, int j) {
  auto it = a.blocks.find(BlockKey{i, j});
  if (it != a.blocks.end()) return it->second;
  return MatFp(a.p, a.d, a.d);
}

static void check_compatible(const BlockMatrix& a, const BlockMatrix& b) {
  if (a.p != b.p) fail(ErrorKind::Mismatch, "block matrix moduli differ");
  if (a.d != b.d) fail(ErrorKind::Mismatch, "block matrix dimensions differ");
}

BlockMatrix bm_add(const BlockMatrix& a, const BlockMatrix& b) {
  check_compatible(a, b);
  BlockMatrix r = a;
  for (const auto& [k, m] : b.blocks) bm_add_to(r, k.i, k.j, m);
  return r;
}

BlockMatrix bm_neg(const BlockMatrix& a) {
  BlockMatrix r = a;
  for (auto& [k, m] : r.blocks) m = mat_neg(m);
  return r;
}

BlockMatrix bm_sub(const BlockMatrix& a, const BlockMatrix& b) {
  return bm_add(a, bm_neg(b));
}

BlockMatrix bm_scale(const BlockMatrix& a, u32 s) {
  s %= a.p;
  BlockMatrix r = bm_zero(a.p, a.d);
  if (s == 0) return r;
  if (s == 1) return a;
  for (const auto& [k, m] : a.blocks) r.blocks[k] = mat_scale(m, s);
  return r;
}

BlockMatrix bm_compose(const BlockMatrix& a, const BlockMatrix& b) {
  check_compatible(a, b);
  BlockMatrix r = bm_zero(a.p, a.d);
  for (const auto& [ka, ma] : a.blocks) {
    auto lo = b.blocks.lower_bound(BlockKey{ka.j, -kDegreeWindow});
    auto hi = b.blocks.lower_bound(BlockKey{ka.j + 1, -kDegreeWindow});
    for (auto it = lo; it != hi; ++it)
      bm_add_to(r, ka.i, it->first.j, mat_mul(ma, it->second));
  }
  return r;
}

BlockMatrix bm_commutator(const BlockMatrix& a, const BlockMatrix& b) {
  return bm_sub(bm_compose(a, b), bm_compose(b, a));
}

BlockMatrix bm_pow(const BlockMatrix& a, u64 e) {
  if (e == 0) fail(ErrorKind::Mismatch, "bm_pow: exponent must be positive");
  BlockMatrix r = a;
  for (u64 k = 1; k < e; ++k) r = bm_compose(r, a);
  return r;
}

SeriesVector bm_apply(const BlockMatrix& a, const SeriesVector& z) {
  if (a.p != z.p || a.d != z.d)
    fail(ErrorKind::Mismatch, "bm_apply: operand shapes differ");
  SeriesVector out = series_zero(a.p, a.d);
  if (z.prec) {
    // The first output row touching an unknown input column bounds what we
    // can know about the image.
    int bad = kDegreeWindow;
    for (const auto& [k, m] : a.blocks) {
      (void)m;
      if (k.j >= *z.prec) bad = std::min(bad, k.i);
    }
    if (bad < kDegreeWindow) out.prec = bad;
  }
  for (const auto& [k, m] : a.blocks) {
    if (!out.known_at(k.i)) continue;
    auto it = z.c.find(k.j);
    if (it == z.c.end()) continue;
    series_add_to(out, k.i, mat_vec(m, it->second));
  }
  return out;
}

BlockMatrix shift_conjugate(const BlockMatrix& a, int r) {
  BlockMatrix out = bm_zero(a.p, a.d);
  for (const auto& [k, m] : a.blocks) {
    check_degree(k.i + r);
    check_degree(k.j + r);
    out.blocks[BlockKey{k.i + r, k.j + r}] = m;
  }
  return out;
}

BlockSupport bm_support(const BlockMatrix& a) {
  BlockSupport s;
  for (const auto& [k, m] : a.blocks) {
    (void)m;
    if (s.empty) {
      s = BlockSupport{false, k.i, k.i, k.j, k.j};
    } else {
      s.i_min = std::min(s.i_min, k.i);
      s.i_max = std::max(s.i_max, k.i);
      s.j_min = std::min(s.j_min, k.j);
      s.j_max = std::max(s.j_max, k.j);
    }
  }
  return s;
}

int bm_delta_min(const BlockMatrix& a) {
  int d = kDegreeWindow;
  for (const auto& [k, m] : a.blocks) {
    (void)m;
    d = std::min(d, k.i - k.j);
  }
  return d;
}

bool bm_lower_triangular(const BlockMatrix& a) { return bm_delta_min(a) >= 0; }

BlockMatrix bm_window(const BlockMatrix& a, int i_lo, int i_hi, int j_lo, int j_hi) {
  BlockMatrix r = bm_zero(a.p, a.d);
  for (const auto& [k, m] : a.blocks)
    if (k.i >= i_lo && k.i <= i_hi && k.j >= j_lo && k.j <= j_hi) r.blocks[k] = m;
  return r;
}

BlockMatrix unipotent_compose(const BlockMatrix& a, const BlockMatrix& b) {
  return bm_add(bm_add(a, b), bm_compose(a, b));
}

BlockMatrix unipotent_pow(const BlockMatrix& a, u64 e) {
  BlockMatrix r = bm_zero(a.p, a.d);  // (I+a)^0 - I
  BlockMatrix sq = a;
  while (e) {
    if (e & 1) r = unipotent_compose(r, sq);
    e >>= 1;
    if (e) sq = unipotent_compose(sq, sq);
  }
  return r;
}

SeriesVector unipotent_apply(const BlockMatrix& a, const SeriesVector& z) {
  return series_add(z, bm_apply(a, z));
}

std::string bm_to_string(const BlockMatrix& a) {
  std::ostringstream os;
  if (a.blocks.empty()) return "0";
  bool first = true;
  for (const auto& [k, m] : a.blocks) {
    if (!first) os << ", ";
    first = false;
    os << "(" << k.i << "," << k.j << "): " << mat_to_string(m);
  }
  return os.str();
}

}  // namespace fpt
