#include "fpt/endo.hpp"

#include <algorithm>

#include "fpt/error.hpp"

namespace fpt {

namespace {

// Shared block oracle: read one output coefficient column per input unit.
std::function<MatFp(int, int)> block_from_eval(
    const std::function<SeriesVector(const SeriesVector&, int)>& eval, u32 p, int d) {
  return [eval, p, d](int i, int j) {
    MatFp b(p, d, d);
    for (int c = 0; c < d; ++c) {
      SeriesVector img = eval(unit_series(p, d, c, j), i + 1);
      FpVec col = series_at(img, i);
      for (int r = 0; r < d; ++r) b.at(r, c) = col[static_cast<size_t>(r)];
    }
    return b;
  };
}

}  // namespace

LazyEndo endo_from_blocks(const BlockMatrix& a) {
  LazyEndo e;
  e.p = a.p;
  e.d = a.d;
  e.tag = "blocks";
  e.eval = [a](const SeriesVector& z, int) { return bm_apply(a, z); };
  e.block = [a](int i, int j) { return bm_block(a, i, j); };
  return e;
}

BlockMatrix lazy_window(const LazyEndo& a, int i_lo, int i_hi, int j_lo, int j_hi) {
  BlockMatrix out = bm_zero(a.p, a.d);
  for (int i = i_lo; i <= i_hi; ++i)
    for (int j = j_lo; j <= j_hi; ++j) {
      MatFp b = a.block(i, j);
      if (!b.is_zero()) bm_set(out, i, j, std::move(b));
    }
  return out;
}

LazyEndo lazy_compose(const LazyEndo& f, int delta_min_f, const LazyEndo& g) {
  if (f.p != g.p || f.d != g.d)
    fail(ErrorKind::Mismatch, "composing endomorphisms over different moduli or ranks");
  LazyEndo e;
  e.p = f.p;
  e.d = f.d;
  e.tag = "compose";
  auto fe = f.eval, ge = g.eval;
  e.eval = [fe, ge, delta_min_f](const SeriesVector& z, int n) {
    return fe(ge(z, n - delta_min_f), n);
  };
  e.block = block_from_eval(e.eval, e.p, e.d);
  return e;
}

LazyEndo make_endo(const TidyBasis& tb, const VectorSeq& seq) {
  if (!seq.at || !seq.cutoff)
    fail(ErrorKind::Invalid, "image sequence and its degree certificate are both required");
  const u32 p = tb.V.p;
  const int d = tb.V.d;
  LazyEndo e;
  e.p = p;
  e.d = d;
  e.tag = "make_endo";
  e.eval = [tb, seq, p, d](const SeriesVector& z, int n_target) -> SeriesVector {
    if (z.p != p || z.d != d) fail(ErrorKind::Mismatch, "vector does not match the endomorphism");
    check_degree(n_target);
    // Peel enough layers that every term the certificate cannot discard is
    // collected: indices n < cutoff(n_target - 1) live in layers <= j_budget.
    int j_budget = floor_div(seq.cutoff(n_target - 1) - 1, d);
    if (!z.c.empty()) j_budget = std::max(j_budget, z.c.rbegin()->first + tb.V.K + 1);
    Expansion ex = basis_expand(tb, z, j_budget);
    SeriesVector out = series_zero(p, d);
    for (const auto& [j, coeff] : ex.coeff)
      for (int k = 0; k < d; ++k)
        if (coeff[static_cast<size_t>(k)])
          out = series_add(out, series_scale(seq.at(k + j * d), coeff[static_cast<size_t>(k)]));
    if (ex.exact) return out;

    // The unexpanded remainder lies in shift^next(V), so its image only uses
    // indices n >= next*d.  Find the deepest degree the certificate clears.
    const i64 tail = i64(ex.next) * d;
    auto cleared = [&seq, tail](int deg) { return seq.cutoff(deg) <= tail; };
    int lo = -kDegreeWindow, hi = n_target - 1;
    if (!cleared(lo))
      fail(ErrorKind::Precision, "input is not determined deeply enough to evaluate the image");
    if (!cleared(hi)) {
      while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        (cleared(mid) ? lo : hi) = mid;
      }
      hi = lo;
    }
    // Spot check of the certificate at the cut: a known coefficient at or
    // below the cleared degree contradicts it.
    for (int n = 0; n < d; ++n) {
      SeriesVector w = seq.at(static_cast<int>(tail) + n);
      if (!w.c.empty() && w.c.begin()->first <= hi)
        fail(ErrorKind::Invalid, "degree certificate violated at index " +
                                     std::to_string(tail + n) + ": support reaches degree " +
                                     std::to_string(w.c.begin()->first));
    }
    return series_truncate(out, hi + 1);
  };
  e.block = block_from_eval(e.eval, p, d);
  return e;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

MReport check_m_conditions(const LazyEndo& a, int i_lo, int i_hi, int j_lo, int j_hi,
                           const TailWitness& wit) {
  if (!wit.row_bound || !wit.col_floor)
    fail(ErrorKind::Invalid, "tail witness must provide row and column bound functions");
  MReport rep;
  // Blocks of the window are read once and shared by all three scans.
  std::map<BlockKey, bool> nonzero;
  auto is_nonzero = [&](int i, int j) {
    BlockKey k{i, j};
    auto it = nonzero.find(k);
    if (it == nonzero.end()) it = nonzero.emplace(k, !a.block(i, j).is_zero()).first;
    return it->second;
  };

  bool tested = false;
  for (int i = i_lo; i <= i_hi && rep.m1 != Verdict::Fail; ++i) {
    int jb = wit.row_bound(i);
    for (int j = std::max(j_lo, jb + 1); j <= j_hi; ++j) {
      tested = true;
      if (is_nonzero(i, j)) {
        rep.m1 = Verdict::Fail;
        rep.m1_fail = BlockKey{i, j};
        break;
      }
    }
  }
  if (rep.m1 != Verdict::Fail) rep.m1 = tested ? Verdict::Pass : Verdict::Inconclusive;

  tested = false;
  for (int j = j_lo; j <= j_hi && rep.m2 != Verdict::Fail; ++j) {
    int ib = wit.col_floor(j);
    for (int i = i_lo; i <= std::min(i_hi, ib - 1); ++i) {
      tested = true;
      if (is_nonzero(i, j)) {
        rep.m2 = Verdict::Fail;
        rep.m2_fail = BlockKey{i, j};
        break;
      }
    }
  }
  if (rep.m2 != Verdict::Fail) rep.m2 = tested ? Verdict::Pass : Verdict::Inconclusive;

  tested = false;
  for (int i = i_lo; i <= std::min(i_hi, wit.corner_i - 1) && rep.m3 != Verdict::Fail; ++i)
    for (int j = std::max(j_lo, wit.corner_j + 1); j <= j_hi; ++j) {
      tested = true;
      if (is_nonzero(i, j)) {
        rep.m3 = Verdict::Fail;
        rep.m3_fail = BlockKey{i, j};
        break;
      }
    }
  if (rep.m3 != Verdict::Fail) rep.m3 = tested ? Verdict::Pass : Verdict::Inconclusive;
  return rep;
}

MReport check_m_conditions(const BlockMatrix&) {
  MReport rep;
  rep.m1 = rep.m2 = rep.m3 = Verdict::Pass;
  return rep;
}

BasisChange change_basis(const CompactOpenSubgroup& V) {
  BasisChange bc;
  bc.tb = complement_basis(V);
  const u32 p = V.p;
  const int d = V.d;
  const int K = V.K;
  TidyBasis std_tb = complement_basis(standard_lattice(p, d));

  // Forward: shift^j(e_k) -> shift^j(b_k).  Every b_k lies in V, so its
  // support starts at -K or later and the shifted image at j - K or later.
  auto b = bc.tb.b;
  VectorSeq fwd_seq{[b, d](int n) {
                      int j = floor_div(n, d);
                      return series_shift(b[static_cast<size_t>(n - j * d)], j);
                    },
                    [K, d](int target) { return (target + K + 1) * d; }};
  bc.fwd = make_endo(std_tb, fwd_seq);
  bc.fwd.tag = "basis_fwd";

  // Inverse: shift^j(b_k) -> shift^j(e_k).
  VectorSeq inv_seq{[p, d](int n) {
                      int j = floor_div(n, d);
                      return unit_series(p, d, n - j * d, j);
                    },
                    [d](int target) { return (target + 1) * d; }};
  bc.inv = make_endo(bc.tb, inv_seq);
  bc.inv.tag = "basis_inv";
  return bc;
}

}  // namespace fpt
