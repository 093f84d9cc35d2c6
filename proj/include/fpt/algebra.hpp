// Span arithmetic for sparse F_p vectors and the product closure of the
// algebra generated by finite block matrices.
#pragma once

#include <map>
#include <set>
#include <vector>

#include "fpt/block.hpp"

namespace fpt {

// Sparse F_p vector keyed by packed u64 coordinates.
using SparseVec = std::map<u64, u32>;

// Echelonized span: one stored row per leading key, leading coefficient 1.
class SparseSpan {
 public:
  explicit SparseSpan(u32 p) : p_(p) { check_modulus(p); }

  // Residue of v after cancelling leading terms against stored rows.
  SparseVec reduce(SparseVec v) const;
  // Inserts the residue of v when nonzero; true when the rank grew.
  bool insert(SparseVec v);
  bool contains(SparseVec v) const { return reduce(std::move(v)).empty(); }
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  u32 p_;
  std::map<u64, SparseVec> rows_;
};

// Packs a block entry position; |i|, |j| bounded by the degree window and
// coordinates bounded by the rank limit below.
constexpr int kMaxRank = 64;
u64 pack_entry(int i, int j, int r, int c);

SparseVec bm_sparse(const BlockMatrix& a);

// Layered basis of the algebra generated by `gens` under products: layer L
// holds exact length-L products, linearly independent as a spanning set of
// the length-L slice.  Closure stops at the first exactly vanishing layer.
struct AlgebraClosure {
  u32 p = 0;
  int d = 0;
  std::vector<BlockMatrix> gens;
  std::vector<std::vector<BlockMatrix>> layers;
  // factors[L][k]: generator indices whose left-to-right product is
  // layers[L][k].
  std::vector<std::vector<std::vector<int>>> factors;
  int vanish_len = -1;  // least L with every length-L product zero; -1 if the budget ran out
  bool budget_hit = false;

  // Union of the stored words' supports.
  std::set<BlockKey> support() const;
};

// max_len bounds the word length, max_rank the total number of stored words
// (exceeding it raises a budget error).
AlgebraClosure close_algebra(u32 p, int d, std::vector<BlockMatrix> gens, int max_len,
                             int max_rank = 4096);

// Shifted copies A^{(r)} for r in [0, r_max], dropping exact duplicates of
// support-free shifts.  The standard generator set for a representation.
std::vector<BlockMatrix> shifted_generators(const BlockMatrix& a, int r_max);

}  // namespace fpt
