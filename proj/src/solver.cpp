// Fixed-vector constructions: the brute-force oracle, the above-diagonal
// candidate, diagonal unipotence checks, both branches below the diagonal,
// the deterministic limit step, and the end-to-end pipeline.
#include "fpt/solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fpt/algebra.hpp"
#include "fpt/endo.hpp"
#include "fpt/error.hpp"
#include "fpt/subgroup.hpp"

namespace fpt {

namespace {

// Word length for the above-diagonal witness search.
constexpr int kEtaWordLen = 6;
// Cap on enumerated diagonal product tuples.
constexpr u64 kDiagProductCap = 4096;

int hi_deg(const SeriesVector& z) { return z.c.rbegin()->first; }

int support_width(const BlockMatrix& a) {
  BlockSupport s = bm_support(a);
  if (s.empty) return 0;
  return std::max({s.i_max - s.j_min, s.j_max - s.i_min, 0});
}

int max_lag(const BlockMatrix& a) {
  int best = -kDegreeWindow;
  for (const auto& [k, blk] : a.blocks) best = std::max(best, k.j - k.i);
  return best;
}

// First coordinate whose column of blk is nonzero; -1 when blk is zero.
int first_live_column(const MatFp& blk) {
  for (int c = 0; c < blk.cols; ++c)
    for (int r = 0; r < blk.rows; ++r)
      if (blk.at(r, c)) return c;
  return -1;
}

// Closure of the shifted generator words with the shift range
// self-calibrated: once products vanish at length L, a nonzero word over
// arbitrary shifts has consecutive shifts within the support width, so
// shifts up to (L - 1) * width reach every word up to diagonal translates.
AlgebraClosure closed_words(u32 p, int d, const BlockMatrix& a0, int max_len) {
  int width = support_width(a0);
  int r_max = std::max(width, 1);
  for (;;) {
    AlgebraClosure cl = close_algebra(p, d, shifted_generators(a0, r_max), max_len);
    if (cl.budget_hit) return cl;
    int need = std::max(1, (cl.vanish_len - 1) * width);
    if (r_max >= need) return cl;
    r_max = need;
  }
}

// First shift whose conjugate fails to annihilate xi; shifts that cannot
// overlap the support act as zero and are skipped. xi must be exact.
std::optional<int> residual_violation(const BlockMatrix& a0, const SeriesVector& xi) {
  BlockSupport s = bm_support(a0);
  if (s.empty || xi.c.empty()) return std::nullopt;
  int lo = xi.c.begin()->first;
  int hi = xi.c.rbegin()->first;
  for (int r = lo - s.j_max; r <= hi - s.j_min; ++r)
    if (!series_known_zero(bm_apply(shift_conjugate(a0, r), xi))) return r;
  return std::nullopt;
}

FpVec coeff_or_zero(const SeriesVector& z, int m, int d) {
  auto it = z.c.find(m);
  if (it != z.c.end()) return it->second;
  return FpVec(static_cast<size_t>(d), 0);
}

template <class F>
auto run_stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return std::forward<F>(f)();
  } catch (const Error& e) {
    fail(e.kind(), std::string(name) + ": " + e.what());
  }
}

}  // namespace

std::optional<SeriesVector> oracle_fixed_vector(const Rep& rep, int lo, int hi) {
  require_valid(rep);
  if (lo >= hi) fail(ErrorKind::Mismatch, "oracle search window is empty");
  check_degree(lo);
  check_degree(hi);
  const int d = rep.d;
  const int nvar = (hi - lo) * d;
  std::vector<FpVec> cond;
  BlockSupport s = bm_support(rep.a0);
  if (!s.empty) {
    // Only these shifts move something supported in [lo, hi).
    for (int r = lo - s.j_max; r < hi - s.j_min; ++r) {
      BlockMatrix m = shift_conjugate(rep.a0, r);
      std::map<int, std::map<int, const MatFp*>> rows;
      for (const auto& [k, blk] : m.blocks)
        if (k.j >= lo && k.j < hi) rows[k.i][k.j] = &blk;
      for (const auto& [i, cols] : rows) {
        for (int rr = 0; rr < d; ++rr) {
          FpVec row(static_cast<size_t>(nvar), 0);
          bool live = false;
          for (const auto& [j, blk] : cols)
            for (int cc = 0; cc < d; ++cc) {
              u32 v = blk->at(rr, cc);
              if (v) {
                row[static_cast<size_t>(j - lo) * d + cc] = v;
                live = true;
              }
            }
          if (live) cond.push_back(std::move(row));
        }
      }
    }
  }
  FpVec pick;
  if (cond.empty()) {
    pick.assign(static_cast<size_t>(nvar), 0);
    pick[0] = 1;
  } else {
    std::vector<FpVec> basis = kernel_basis(rows_from_vecs(rep.p, nvar, cond));
    if (basis.empty()) return std::nullopt;
    // kernel_basis is ordered by free column, so the front vector has the
    // earliest possible support.
    pick = basis.front();
  }
  u32 lead = 0;
  for (u32 v : pick)
    if (v) {
      lead = v;
      break;
    }
  u32 scale = fp_inv(lead, rep.p);
  SeriesVector xi = series_zero(rep.p, d);
  for (int j = lo; j < hi; ++j) {
    FpVec v(static_cast<size_t>(d), 0);
    bool live = false;
    for (int cc = 0; cc < d; ++cc) {
      u32 x = fp_mul(pick[static_cast<size_t>(j - lo) * d + cc], scale, rep.p);
      v[cc] = x;
      live = live || x != 0;
    }
    if (live) series_set(xi, j, v);
  }
  return xi;
}

EtaAbove eta_above(const Rep& rep, int c) {
  require_valid(rep);
  if (c <= 0) fail(ErrorKind::Mismatch, "eta_above needs a positive c");
  // Mirror of the reduction precondition: nonnegative degrees must stay
  // inside the lattice.
  for (const auto& [k, blk] : rep.a0.blocks)
    if (k.j >= 0 && k.i < 0)
      fail(ErrorKind::Mismatch, "generator does not keep the nonnegative lattice");
  EtaAbove out;
  if (bm_lower_triangular(rep.a0)) return out;
  out.applicable = true;
  const u32 p = rep.p;
  const int d = rep.d;
  AlgebraClosure cl = closed_words(p, d, rep.a0, kEtaWordLen);
  std::set<BlockKey> env = cl.support();
  // Diagonal translates only move envelope keys to larger rows, so row
  // minima over the envelope bound the whole algebra.
  int i_star = kDegreeWindow;
  int a = kDegreeWindow;
  for (const auto& k : env) {
    int lag = k.j - k.i;
    if (lag > 0) i_star = std::min(i_star, k.i);
    if (lag >= -c) a = std::min(a, k.i);
  }
  if (i_star == kDegreeWindow || a == kDegreeWindow)
    fail(ErrorKind::Budget, "witness search exhausted: no envelope key in reach (" +
                                std::to_string(env.size()) + " envelope keys)");
  int j_star = -kDegreeWindow;
  int blag = -kDegreeWindow;
  for (const auto& k : env) {
    int lag = k.j - k.i;
    if (lag > 0 && k.i <= i_star) j_star = std::max(j_star, i_star + lag);
    if (lag >= -c && k.i <= a) blag = std::max(blag, lag);
  }
  int b = a + blag;
  out.i_star = i_star;
  out.j_star = j_star;
  out.a = a;
  out.b = b;
  // Witness word: the first stored word carrying a block of the chosen lag
  // at a row we can translate up to a.
  int wl = -1, wk = -1, ws = 0;
  for (size_t L = 0; L < cl.layers.size() && wl < 0; ++L)
    for (size_t k = 0; k < cl.layers[L].size() && wl < 0; ++k)
      for (const auto& [key, blk] : cl.layers[L][k].blocks)
        if (key.j - key.i == blag && key.i <= a) {
          wl = static_cast<int>(L);
          wk = static_cast<int>(k);
          ws = a - key.i;
          break;
        }
  if (wl < 0)
    fail(ErrorKind::Budget, "witness search exhausted: envelope block of lag " +
                                std::to_string(blag) + " not found among stored words");
  BlockMatrix W = shift_conjugate(cl.layers[wl][wk], ws);
  for (int g : cl.factors[wl][wk]) out.witness += "A(t^" + std::to_string(g + ws) + ")";
  const MatFp& lead = W.blocks.at(BlockKey{a, b});
  int zc = first_live_column(lead);
  out.eta = series_shift(bm_apply(W, unit_series(p, d, zc, b)), -a);
  if (lo_bound(out.eta) < 0 || out.eta.c.find(0) == out.eta.c.end())
    fail(ErrorKind::Inconsistency, "candidate is not supported in degrees >= 0 with nonzero start");
  // (W' tau^sigma eta)_mu = 0 for every stored word, sigma <= c, mu < sigma.
  // Diagonal translates of the words are absorbed into sigma.
  int eta_hi = hi_deg(out.eta);
  for (const auto& layer : cl.layers)
    for (const auto& w : layer) {
      BlockSupport wsup = bm_support(w);
      int s_lo = wsup.j_min - eta_hi;
      int s_hi = std::min(c, wsup.j_max - lo_bound(out.eta));
      for (int sg = s_lo; sg <= s_hi; ++sg) {
        SeriesVector v = bm_apply(w, series_shift(out.eta, sg));
        for (const auto& [m, vec] : v.c)
          if (m < sg)
            fail(ErrorKind::Inconsistency,
                 "vanishing check failed at shift " + std::to_string(sg) + ", degree " +
                     std::to_string(m));
      }
    }
  return out;
}

std::optional<u32> functional_value(const ConstraintFamily& fam,
                                    const ConstraintFamily::Functional& fn,
                                    const SeriesVector& eta) {
  if (fn.word < 0 || fn.word >= static_cast<int>(fam.words.size()))
    fail(ErrorKind::Mismatch, "functional references a missing word");
  if (fn.coord < 0 || fn.coord >= fam.d) fail(ErrorKind::Mismatch, "functional coordinate out of range");
  SeriesVector v = bm_apply(fam.words[fn.word], series_shift(eta, fn.shift));
  if (!v.known_at(fn.row)) return std::nullopt;
  auto it = v.c.find(fn.row);
  if (it == v.c.end()) return 0u;
  return it->second[static_cast<size_t>(fn.coord)];
}

ConstraintFamily family_above(const Rep& rep, int c_max) {
  require_valid(rep);
  if (c_max <= 0) fail(ErrorKind::Mismatch, "family_above needs a positive level count");
  ConstraintFamily fam;
  fam.p = rep.p;
  fam.d = rep.d;
  AlgebraClosure cl = closed_words(rep.p, rep.d, rep.a0, kEtaWordLen);
  for (const auto& layer : cl.layers)
    for (const auto& w : layer) {
      int wi = static_cast<int>(fam.words.size());
      fam.words.push_back(w);
      std::set<int> rows;
      for (const auto& [k, blk] : w.blocks) rows.insert(k.i);
      if (rows.empty()) continue;
      for (int sg = *rows.begin() + 1; sg <= c_max; ++sg)
        for (int row : rows) {
          if (row >= sg) break;
          for (int coord = 0; coord < fam.d; ++coord)
            fam.levels[sg].push_back({wi, sg, row, coord});
        }
    }
  return fam;
}

ConstraintFamily family_general(const Rep& inner, int r_max) {
  require_valid(inner);
  if (!bm_lower_triangular(inner.a0))
    fail(ErrorKind::Mismatch, "general-branch family expects a lower-triangular rep");
  if (r_max <= 0) fail(ErrorKind::Mismatch, "family_general needs a positive level count");
  ConstraintFamily fam;
  fam.p = inner.p;
  fam.d = inner.d;
  fam.words.push_back(inner.a0);
  if (inner.a0.blocks.empty()) return fam;
  BlockSupport s = bm_support(inner.a0);
  std::set<int> rows;
  for (const auto& [k, blk] : inner.a0.blocks) rows.insert(k.i);
  for (int r = 1; r <= r_max; ++r) {
    std::vector<ConstraintFamily::Functional> lvl;
    for (int i : rows) {
      if (i <= -r || i >= r) continue;
      // A row entering the window brings its whole shift range; a row
      // already inside gains exactly the shift i - r + 1. Shifts past the
      // largest generator column act as zero on candidates supported in
      // nonnegative degrees and are not stored.
      int j_lo = i - r + 1;
      int j_hi = (std::abs(i) == r - 1) ? s.j_max : std::min(i - r + 1, s.j_max);
      for (int j = j_lo; j <= j_hi; ++j)
        for (int coord = 0; coord < fam.d; ++coord) lvl.push_back({0, j, i, coord});
    }
    if (!lvl.empty()) fam.levels[r] = std::move(lvl);
  }
  return fam;
}

SeriesVector refine_limit(const ConstraintFamily& fam, const std::map<int, SeriesVector>& candidates,
                          int target) {
  if (candidates.empty()) fail(ErrorKind::Stabilization, "no candidates supplied");
  if (target <= 0) fail(ErrorKind::Mismatch, "target precision must be positive");
  check_degree(target);
  const u32 p = fam.p;
  const int d = fam.d;
  int lo = 0;
  std::vector<const SeriesVector*> survivors;
  for (const auto& [n, cand] : candidates) {
    if (!cand.exact()) fail(ErrorKind::Mismatch, "candidates must be exact");
    if (cand.p != p || cand.d != d) fail(ErrorKind::Mismatch, "candidate shape disagrees with the family");
    if (cand.c.find(0) == cand.c.end())
      fail(ErrorKind::Mismatch, "candidate " + std::to_string(n) + " has zero constant coefficient");
    lo = std::min(lo, lo_bound(cand));
    survivors.push_back(&cand);
  }
  SeriesVector out = series_zero_mod(p, d, target);
  for (int m = lo; m < target; ++m) {
    FpVec chosen;
    if (survivors.size() == 1) {
      chosen = coeff_or_zero(*survivors.front(), m, d);
    } else {
      // Pigeonhole step: keep the lexicographically least coefficient value
      // occurring at least twice among the survivors.
      std::map<FpVec, int> count;
      for (const SeriesVector* sv : survivors) ++count[coeff_or_zero(*sv, m, d)];
      const FpVec* best = nullptr;
      for (const auto& [v, n] : count)
        if (n >= 2) {
          best = &v;
          break;
        }
      if (!best)
        fail(ErrorKind::Stabilization, "no coefficient shared by two candidates at degree " +
                                           std::to_string(m) + "; supply more candidates");
      chosen = *best;
      std::vector<const SeriesVector*> next;
      for (const SeriesVector* sv : survivors)
        if (coeff_or_zero(*sv, m, d) == chosen) next.push_back(sv);
      survivors = std::move(next);
    }
    if (!vec_is_zero(chosen)) series_set(out, m, chosen);
  }
  // The selected prefix must annihilate every stored functional it
  // determines, not only the levels its survivors came from.
  for (const auto& [lvl, fns] : fam.levels)
    for (const auto& fn : fns) {
      std::optional<u32> v = functional_value(fam, fn, out);
      if (v && *v != 0)
        fail(ErrorKind::Stabilization,
             "stabilized prefix violates the level-" + std::to_string(lvl) + " functional at row " +
                 std::to_string(fn.row) + ", shift " + std::to_string(fn.shift) +
                 "; supply more candidates");
    }
  return out;
}

DiagonalReport diagonal_check(const ReducedRep& rr, int window) {
  const Rep& in = rr.inner;
  if (!bm_lower_triangular(in.a0))
    fail(ErrorKind::Mismatch, "diagonal check expects a lower-triangular rep");
  if (window < 0) fail(ErrorKind::Mismatch, "window must be nonnegative");
  DiagonalReport out;
  out.exhaustive = true;
  const u32 p = in.p;
  const int dp = in.d;
  // Shift conjugates coincide with the generator along the diagonal, so the
  // window of generator diagonal blocks covers every phi(t^r).
  std::vector<MatFp> diag;
  std::vector<int> where;
  for (const auto& [k, blk] : in.a0.blocks)
    if (k.i == k.j && std::abs(k.i) <= window) {
      diag.push_back(blk);
      where.push_back(k.i);
    }
  MatFp id = MatFp::identity(p, dp);
  for (size_t x = 0; x < diag.size(); ++x) {
    MatFp m = mat_add(id, diag[x]);
    if (!is_unipotent(m)) {
      out.reason = "diagonal block at row " + std::to_string(where[x]) + " is not unipotent";
      return out;
    }
    if (!(mat_pow(m, p) == id)) {
      out.reason = "diagonal block at row " + std::to_string(where[x]) + " has order not dividing p";
      return out;
    }
    ++out.blocks_checked;
  }
  for (size_t x = 0; x < diag.size(); ++x)
    for (size_t y = x + 1; y < diag.size(); ++y)
      if (!(mat_mul(diag[x], diag[y]) == mat_mul(diag[y], diag[x]))) {
        out.reason = "diagonal blocks at rows " + std::to_string(where[x]) + " and " +
                     std::to_string(where[y]) + " do not commute";
        return out;
      }
  if (!diag.empty()) {
    try {
      joint_strict_triangularize(diag);
    } catch (const Error& e) {
      out.reason = e.what();
      return out;
    }
    // All products of dp diagonal blocks must vanish.
    std::vector<size_t> idx(static_cast<size_t>(dp), 0);
    for (;;) {
      MatFp prod = diag[idx[0]];
      for (int t = 1; t < dp; ++t) prod = mat_mul(prod, diag[idx[t]]);
      if (!prod.is_zero()) {
        std::string tuple;
        for (size_t t = 0; t < idx.size(); ++t)
          tuple += (t ? "," : "") + std::to_string(where[idx[t]]);
        out.reason = "product of diagonal blocks at rows (" + tuple + ") is nonzero";
        return out;
      }
      ++out.products_checked;
      int t = dp - 1;
      while (t >= 0 && ++idx[static_cast<size_t>(t)] == diag.size()) {
        idx[static_cast<size_t>(t)] = 0;
        --t;
      }
      if (t < 0) break;
      if (out.products_checked >= kDiagProductCap) {
        out.exhaustive = false;
        break;
      }
    }
  }
  out.pass = true;
  return out;
}

NilpotencyReport algebra_nilpotency(const ReducedRep& rr, int window, int max_len) {
  const Rep& in = rr.inner;
  require_valid(in);
  if (!bm_lower_triangular(in.a0))
    fail(ErrorKind::Mismatch, "nilpotency probe expects a lower-triangular rep");
  if (window < 0 || max_len < 1) fail(ErrorKind::Mismatch, "bad window or length budget");
  NilpotencyReport out;
  out.max_len = max_len;
  if (in.a0.blocks.empty()) {
    out.nilpotent_in_window = true;
    out.n = 1;
    return out;
  }
  try {
    AlgebraClosure cl = close_algebra(in.p, in.d, shifted_generators(in.a0, window), max_len);
    if (cl.budget_hit) {
      out.budget_hit = true;
      return out;
    }
    out.nilpotent_in_window = true;
    out.n = cl.vanish_len;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Budget) throw;
    out.budget_hit = true;
  }
  return out;
}

SeriesVector fixed_vector_nilpotent(const ReducedRep& rr, int n) {
  const Rep& in = rr.inner;
  require_valid(in);
  if (!bm_lower_triangular(in.a0))
    fail(ErrorKind::Mismatch, "nilpotent branch expects a lower-triangular rep");
  if (n < 1) fail(ErrorKind::Mismatch, "vanishing length must be positive");
  const u32 p = in.p;
  const int dp = in.d;
  SeriesVector xi;
  if (n == 1) {
    xi = unit_series(p, dp, 0, 0);
  } else {
    AlgebraClosure cl = closed_words(p, dp, in.a0, n - 1);
    if (static_cast<int>(cl.layers.size()) < n - 1 || cl.layers[static_cast<size_t>(n - 2)].empty())
      fail(ErrorKind::Inconsistency,
           "no nonzero product of length " + std::to_string(n - 1) + " despite the claimed bound");
    const BlockMatrix& B = cl.layers[static_cast<size_t>(n - 2)].front();
    const auto& [k0, blk0] = *B.blocks.begin();
    xi = bm_apply(B, unit_series(p, dp, first_live_column(blk0), k0.j));
  }
  if (series_known_zero(xi)) fail(ErrorKind::Inconsistency, "constructed vector is zero");
  if (auto bad = residual_violation(in.a0, xi))
    fail(ErrorKind::Inconsistency, "shift " + std::to_string(*bad) +
                                       " does not annihilate the constructed vector (window artifact)");
  return xi;
}

SeriesVector fixed_vector_general(const ReducedRep& rr, int r) {
  const Rep& in = rr.inner;
  require_valid(in);
  if (!bm_lower_triangular(in.a0))
    fail(ErrorKind::Mismatch, "general branch expects a lower-triangular rep");
  if (r < 1) fail(ErrorKind::Mismatch, "radius must be positive");
  const u32 p = in.p;
  const int dp = in.d;
  if (in.a0.blocks.empty())
    fail(ErrorKind::Branch, "products vanish at length 1; the nilpotent branch applies");
  // Rows below -a_r carry no block above the lag -r diagonal, for any
  // algebra element; the generator's own support bounds a_r.
  int abar = 0;
  for (const auto& [k, blk] : in.a0.blocks)
    if (k.j - k.i > -r) abar = std::max(abar, -k.i);
  const int q_min = r + abar;
  const int n_len = q_min * dp;
  int width = support_width(in.a0);
  AlgebraClosure cl =
      close_algebra(p, dp, shifted_generators(in.a0, std::max(1, (n_len - 1) * width)), n_len);
  if (!cl.budget_hit)
    fail(ErrorKind::Branch, "products vanish at length " + std::to_string(cl.vanish_len) +
                                "; the nilpotent branch applies");
  const BlockMatrix* b0 = nullptr;
  int deepest = kDegreeWindow;
  for (const auto& w : cl.layers[static_cast<size_t>(n_len - 1)]) {
    int ml = max_lag(w);
    deepest = std::min(deepest, ml);
    if (ml <= -q_min) {
      b0 = &w;
      break;
    }
  }
  if (!b0) {
    bool vacuous = true;
    for (const auto& [k, blk] : in.a0.blocks)
      if (k.i > -r && k.i < r) {
        vacuous = false;
        break;
      }
    // With no generator row inside the window every condition holds for any
    // candidate, so the normalized unit works.
    if (vacuous) return unit_series(p, dp, 0, 0);
    fail(ErrorKind::Budget,
         "no product of length " + std::to_string(n_len) + " with every lag <= " +
             std::to_string(-q_min) + "; deepest subdiagonal reached: " + std::to_string(-deepest));
  }
  // Translate a deepest block to row 0; the candidate then starts at
  // degree 0 with the block's first live column.
  int ml = max_lag(*b0);
  const int q = -ml;
  int row0 = 0;
  for (const auto& [k, blk] : b0->blocks)
    if (k.j - k.i == ml) {
      row0 = k.i;
      break;
    }
  BlockMatrix B = shift_conjugate(*b0, -row0);
  const MatFp& lead = B.blocks.at(BlockKey{0, -q});
  SeriesVector eta = bm_apply(B, unit_series(p, dp, first_live_column(lead), -q));
  if (lo_bound(eta) < 0 || eta.c.find(0) == eta.c.end())
    fail(ErrorKind::Inconsistency, "candidate is not supported in degrees >= 0 with nonzero start");
  // (A tau^j eta)_i = 0 for -r < i < r and j > i - r; shifts past the
  // largest generator column act as zero on eta.
  BlockSupport s = bm_support(in.a0);
  int eta_hi = hi_deg(eta);
  for (int j = std::max(-2 * r + 2, s.j_min - eta_hi); j <= s.j_max; ++j) {
    SeriesVector v = bm_apply(in.a0, series_shift(eta, j));
    for (int i = -r + 1; i <= r - 1; ++i) {
      if (j <= i - r) continue;
      if (v.c.find(i) != v.c.end())
        fail(ErrorKind::Inconsistency, "window condition fails at row " + std::to_string(i) +
                                           ", shift " + std::to_string(j));
    }
  }
  return eta;
}

namespace {

struct Conjugated {
  Rep rep;
  bool changed = false;
  BasisChange bc;
};

// Rewrites the rep over the invariant lattice when that lattice differs from
// the standard one. The conjugated generator is materialized column by
// column and independently checked to intertwine with the original.
Conjugated conjugate_rep(const Rep& rep) {
  Conjugated out;
  CompactOpenSubgroup V = invariant_subgroup(rep);
  if (cos_equal(V, standard_lattice(rep.p, rep.d))) {
    out.rep = rep;
    return out;
  }
  out.changed = true;
  out.bc = change_basis(V);
  BlockSupport s = bm_support(rep.a0);
  if (s.empty) {
    out.rep = rep;
    return out;
  }
  int b_lo = 0, b_hi = 0;
  for (const auto& bv : out.bc.tb.b) {
    b_lo = std::min(b_lo, lo_bound(bv));
    b_hi = std::max(b_hi, hi_deg(bv));
  }
  const int j_lo = s.j_min - b_hi;
  const int j_hi = s.j_max - b_lo;
  const int eval_n = j_hi + (b_hi - b_lo) + 8;
  std::map<std::pair<int, int>, SeriesVector> images;
  std::map<BlockKey, MatFp> acc;
  for (int j = j_lo; j <= j_hi; ++j)
    for (int k = 0; k < rep.d; ++k) {
      SeriesVector w = bm_apply(rep.a0, out.bc.fwd.eval(unit_series(rep.p, rep.d, k, j), eval_n));
      SeriesVector zc = out.bc.inv.eval(w, eval_n);
      if (!zc.exact())
        fail(ErrorKind::Precision, "conjugated generator is not exact over the invariant basis");
      images[{j, k}] = std::move(w);
      for (const auto& [i, vec] : zc.c)
        for (int rr = 0; rr < rep.d; ++rr)
          if (vec[static_cast<size_t>(rr)]) {
            auto ins = acc.try_emplace(BlockKey{i, j}, MatFp(rep.p, rep.d, rep.d));
            ins.first->second.at(rr, k) = vec[static_cast<size_t>(rr)];
          }
    }
  BlockMatrix ap = bm_zero(rep.p, rep.d);
  for (const auto& [key, m] : acc)
    if (!m.is_zero()) bm_set(ap, key.i, key.j, m);
  // Outside the swept columns both sides vanish: the basis images stay in
  // the generator's column support only for swept degrees.
  for (int j = j_lo; j <= j_hi; ++j)
    for (int k = 0; k < rep.d; ++k) {
      SeriesVector lhs = out.bc.fwd.eval(bm_apply(ap, unit_series(rep.p, rep.d, k, j)), eval_n);
      if (!series_eq(lhs, images[{j, k}]))
        fail(ErrorKind::Inconsistency, "change of basis does not intertwine the generator");
    }
  Rep rp = make_rep(rep.p, rep.d, ap);
  validate(rp);
  if (rp.state != Rep::State::Valid)
    fail(ErrorKind::Inconsistency, "conjugated rep fails validation: " + rp.reason);
  out.rep = std::move(rp);
  return out;
}

}  // namespace

FixedVectorResult solve(const Rep& rep, const SolveOptions& opt) {
  FixedVectorResult res;
  run_stage("validate", [&] {
    require_valid(rep);
    return 0;
  });
  if (opt.precision < 1) fail(ErrorKind::Mismatch, "solve: target precision must be positive");
  Conjugated cj = run_stage("change_basis", [&] { return conjugate_rep(rep); });
  res.trace.push_back(cj.changed ? "change_basis: rewrote the rep over the invariant lattice"
                                 : "change_basis: standard lattice already invariant");
  ReducedRep rr = run_stage("u0_reduce", [&] { return u0_reduce(cj.rep, opt.window); });
  res.trace.push_back("u0_reduce: module rank " + std::to_string(rr.d_prime) + " in window " +
                      std::to_string(rr.window));
  DiagonalReport dc = run_stage("diagonal_check", [&] { return diagonal_check(rr, opt.window); });
  if (!dc.pass) fail(ErrorKind::Inconsistency, "diagonal_check: " + dc.reason);
  res.trace.push_back("diagonal_check: " + std::to_string(dc.blocks_checked) +
                      " diagonal blocks unipotent, " + std::to_string(dc.products_checked) +
                      " products vanish");
  NilpotencyReport nil =
      run_stage("algebra_nilpotency", [&] { return algebra_nilpotency(rr, opt.window, opt.max_len); });
  SeriesVector zp;
  if (nil.nilpotent_in_window) {
    res.trace.push_back("algebra_nilpotency: products vanish at length " + std::to_string(*nil.n));
    zp = run_stage("fixed_vector_nilpotent", [&] { return fixed_vector_nilpotent(rr, *nil.n); });
    res.trace.push_back("fixed_vector_nilpotent: built from a length-" + std::to_string(*nil.n - 1) +
                        " word");
  } else {
    res.trace.push_back("algebra_nilpotency: inconclusive in budget; trying the nilpotent branch first");
    bool done = false;
    try {
      AlgebraClosure probe = closed_words(rr.inner.p, rr.inner.d, rr.inner.a0, opt.max_len);
      if (!probe.budget_hit) {
        zp = fixed_vector_nilpotent(rr, probe.vanish_len);
        res.trace.push_back("nilpotent fallback: products vanish at length " +
                            std::to_string(probe.vanish_len));
        done = true;
      }
    } catch (const Error&) {
    }
    if (!done) {
      std::map<int, SeriesVector> cands;
      for (int lvl = 1; lvl <= opt.refine_levels; ++lvl)
        cands[lvl] = run_stage("fixed_vector_general", [&] { return fixed_vector_general(rr, lvl); });
      ConstraintFamily fam =
          run_stage("family_general", [&] { return family_general(rr.inner, opt.refine_levels); });
      zp = run_stage("refine_limit", [&] { return refine_limit(fam, cands, opt.precision); });
      res.trace.push_back("general branch: refined " + std::to_string(opt.refine_levels) +
                          " levels to precision " + std::to_string(opt.precision));
    }
  }
  SeriesVector xi = run_stage("theta_apply", [&] { return theta_apply(rr, zp); });
  if (cj.changed) xi = run_stage("map_back", [&] { return cj.bc.fwd.eval(xi, opt.precision); });
  if (series_known_zero(xi)) fail(ErrorKind::Inconsistency, "pipeline produced the zero vector");
  res.xi = xi;
  res.exact = xi.exact();
  run_stage("residuals", [&] {
    BlockSupport s = bm_support(rep.a0);
    std::set<int> shifts;
    for (int r = -opt.residual_span; r <= opt.residual_span; ++r) shifts.insert(r);
    if (!s.empty && !xi.c.empty()) {
      int lo = xi.c.begin()->first;
      int hi = xi.exact() ? xi.c.rbegin()->first : *xi.prec - 1;
      for (int r = lo - s.j_max; r <= hi - s.j_min; ++r) shifts.insert(r);
    }
    for (int r : shifts) {
      SeriesVector v = bm_apply(shift_conjugate(rep.a0, r), xi);
      ResidualEntry e;
      e.r = r;
      e.pass = series_known_zero(v);
      if (!v.exact()) e.checked_through = *v.prec;
      res.residuals.push_back(e);
      if (!e.pass)
        fail(ErrorKind::Inconsistency, "residual at shift " + std::to_string(r) + " is nonzero");
    }
    return 0;
  });
  if (opt.oracle_lo < opt.oracle_hi) {
    std::optional<SeriesVector> ow =
        run_stage("oracle", [&] { return oracle_fixed_vector(rep, opt.oracle_lo, opt.oracle_hi); });
    res.oracle_checked = true;
    res.oracle_found = ow.has_value();
    res.oracle_pass = !ow.has_value() || !residual_violation(rep.a0, *ow).has_value();
    res.trace.push_back(res.oracle_found
                            ? std::string("oracle: window vector found; cross-check ") +
                                  (res.oracle_pass ? "passed" : "FAILED")
                            : "oracle: no fixed vector in the window");
  }
  return res;
}

}  // namespace fpt
