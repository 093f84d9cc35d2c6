#pragma once

#include <compare>
#include <map>

#include "fpt/series.hpp"

namespace fpt {

// Position of a d x d block: row degree i, column degree j. Ordered by
// (i, j) so all blocks in one block row are contiguous.
struct BlockKey {
  int i = 0;
  int j = 0;
  auto operator<=>(const BlockKey&) const = default;
};

// Finitely supported block matrix over F_p: the continuous linear map on
// F_p((t))^d whose coefficient of t^i in the image of v t^j is M(i,j) v.
// Absent blocks are zero, so the object is exact. The degree shift itself is
// not finitely supported; conjugation by it acts on keys (shift_conjugate).
struct BlockMatrix {
  u32 p = 2;
  int d = 0;
  std::map<BlockKey, MatFp> blocks;  // no zero blocks stored

  bool is_zero() const { return blocks.empty(); }
  bool operator==(const BlockMatrix& o) const {
    return p == o.p && d == o.d && blocks == o.blocks;
  }
};

struct BlockSupport {
  bool empty = true;
  int i_min = 0, i_max = 0, j_min = 0, j_max = 0;
};

BlockMatrix bm_zero(u32 p, int d);
// Overwrites the block at (i, j); a zero block erases.
void bm_set(BlockMatrix& a, int i, int j, MatFp m);
void bm_add_to(BlockMatrix& a, int i, int j, const MatFp& m);
// Copy of the block at (i, j); zero matrix when absent.
MatFp bm_block(const BlockMatrix& a, int i, int j);

BlockMatrix bm_add(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix bm_sub(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix bm_neg(const BlockMatrix& a);
BlockMatrix bm_scale(const BlockMatrix& a, u32 s);
BlockMatrix bm_compose(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix bm_commutator(const BlockMatrix& a, const BlockMatrix& b);
// Composition power, e >= 1 (the identity is not finitely supported).
BlockMatrix bm_pow(const BlockMatrix& a, u64 e);

// Image of z. For truncated z the result carries the exact precision up to
// which it is determined: the first row degree that reads a column degree at
// or beyond z's precision becomes the output precision.
SeriesVector bm_apply(const BlockMatrix& a, const SeriesVector& z);

// Conjugation by the r-th power of the degree shift: block (i, j) moves to
// (i + r, j + r).
BlockMatrix shift_conjugate(const BlockMatrix& a, int r);

BlockSupport bm_support(const BlockMatrix& a);
// Minimum of i - j over the support; kDegreeWindow for the zero matrix. A
// nonnegative value means the map preserves every shifted standard lattice.
int bm_delta_min(const BlockMatrix& a);
// True when every supported block has i >= j.
bool bm_lower_triangular(const BlockMatrix& a);
// Restriction to i in [i_lo, i_hi] and j in [j_lo, j_hi] (inclusive).
BlockMatrix bm_window(const BlockMatrix& a, int i_lo, int i_hi, int j_lo, int j_hi);

// Calculus of maps I + A with A finitely supported, represented by A.
// (I+a)(I+b) - I
BlockMatrix unipotent_compose(const BlockMatrix& a, const BlockMatrix& b);
// (I+a)^e - I
BlockMatrix unipotent_pow(const BlockMatrix& a, u64 e);
// (I+a) z
SeriesVector unipotent_apply(const BlockMatrix& a, const SeriesVector& z);

std::string bm_to_string(const BlockMatrix& a);

}  // namespace fpt
