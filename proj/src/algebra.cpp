#include "fpt/algebra.hpp"

#include <string>

#include "fpt/error.hpp"
#include "fpt/series.hpp"

namespace fpt {

SparseVec SparseSpan::reduce(SparseVec v) const {
  while (!v.empty()) {
    auto lead = v.begin();
    auto row = rows_.find(lead->first);
    if (row == rows_.end()) break;
    u32 c = lead->second;  // row has leading coefficient 1
    for (const auto& [key, val] : row->second) {
      auto it = v.find(key);
      u32 cur = (it == v.end()) ? 0 : it->second;
      u32 next = fp_sub(cur, fp_mul(c, val, p_), p_);
      if (next == 0) {
        if (it != v.end()) v.erase(it);
      } else if (it == v.end()) {
        v.emplace(key, next);
      } else {
        it->second = next;
      }
    }
  }
  return v;
}

bool SparseSpan::insert(SparseVec v) {
  SparseVec r = reduce(std::move(v));
  if (r.empty()) return false;
  u32 inv = fp_inv(r.begin()->second, p_);
  for (auto& [key, val] : r) val = fp_mul(val, inv, p_);
  u64 lead = r.begin()->first;
  rows_.emplace(lead, std::move(r));
  return true;
}

u64 pack_entry(int i, int j, int r, int c) {
  check_degree(i);
  check_degree(j);
  if (r < 0 || r >= kMaxRank || c < 0 || c >= kMaxRank)
    fail(ErrorKind::Window, "block coordinate exceeds the packing limit");
  u64 bi = static_cast<u64>(i + kDegreeWindow);
  u64 bj = static_cast<u64>(j + kDegreeWindow);
  return (((bi << 21) | bj) << 12) | static_cast<u64>(r * kMaxRank + c);
}

SparseVec bm_sparse(const BlockMatrix& a) {
  SparseVec v;
  for (const auto& [key, m] : a.blocks)
    for (int r = 0; r < a.d; ++r)
      for (int c = 0; c < a.d; ++c)
        if (u32 x = m.at(r, c)) v.emplace(pack_entry(key.i, key.j, r, c), x);
  return v;
}

std::set<BlockKey> AlgebraClosure::support() const {
  std::set<BlockKey> s;
  for (const auto& layer : layers)
    for (const BlockMatrix& w : layer)
      for (const auto& [key, m] : w.blocks) s.insert(key);
  return s;
}

AlgebraClosure close_algebra(u32 p, int d, std::vector<BlockMatrix> gens, int max_len,
                             int max_rank) {
  check_modulus(p);
  AlgebraClosure out;
  out.p = p;
  out.d = d;
  for (const BlockMatrix& g : gens)
    if (g.p != p || g.d != d) fail(ErrorKind::Mismatch, "generator over a different modulus or rank");
  out.gens = std::move(gens);

  int stored = 0;
  std::vector<BlockMatrix> prev;  // spanning set of the previous length slice
  std::vector<std::vector<int>> prev_factors;
  for (int len = 1; len <= max_len; ++len) {
    SparseSpan span(p);
    std::vector<BlockMatrix> layer;
    std::vector<std::vector<int>> layer_factors;
    auto consider = [&](BlockMatrix w, std::vector<int> fac) {
      if (span.insert(bm_sparse(w))) {
        layer.push_back(std::move(w));
        layer_factors.push_back(std::move(fac));
        if (++stored > max_rank)
          fail(ErrorKind::Budget, "algebra closure exceeded " + std::to_string(max_rank) +
                                      " stored words at length " + std::to_string(len));
      }
    };
    if (len == 1) {
      for (size_t g = 0; g < out.gens.size(); ++g)
        consider(out.gens[g], {static_cast<int>(g)});
    } else {
      for (size_t w = 0; w < prev.size(); ++w)
        for (size_t g = 0; g < out.gens.size(); ++g) {
          std::vector<int> fac = prev_factors[w];
          fac.push_back(static_cast<int>(g));
          consider(bm_compose(prev[w], out.gens[g]), std::move(fac));
        }
    }
    bool vanished = layer.empty();
    out.layers.push_back(std::move(layer));
    out.factors.push_back(std::move(layer_factors));
    if (vanished) {
      out.vanish_len = len;
      return out;
    }
    prev = out.layers.back();
    prev_factors = out.factors.back();
  }
  out.budget_hit = true;
  return out;
}

std::vector<BlockMatrix> shifted_generators(const BlockMatrix& a, int r_max) {
  std::vector<BlockMatrix> gens;
  if (a.blocks.empty()) return gens;
  for (int r = 0; r <= r_max; ++r) gens.push_back(shift_conjugate(a, r));
  return gens;
}

}  // namespace fpt
