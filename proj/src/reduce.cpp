#include "fpt/reduce.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "fpt/algebra.hpp"
#include "fpt/error.hpp"

namespace fpt {

// Lattice preservation for every nonnegative shift of the generator: blocks
// with j >= 0 need i >= 0 and blocks with j < 0 need i >= j.  The family of
// such supports is closed under products and sums, so it covers every
// phi(f) - Id with f of nonnegative support.
static void require_lattice_preserving(const Rep& rep) {
  for (const auto& [k, m] : rep.a0.blocks) {
    (void)m;
    bool ok = k.j >= 0 ? k.i >= 0 : k.i >= k.j;
    if (!ok)
      fail(ErrorKind::Membership,
           "reduce: generator block at (" + std::to_string(k.i) + ", " + std::to_string(k.j) +
               ") pushes lattice vectors out; reduce after invariant_subgroup and change_basis");
  }
}

// Greedy expansion over the generators, lowest degree first.  The lowest
// coefficient of any element of the generated span is a combination of the
// leading vectors alone, and those are independent, so each step cancels it
// uniquely.  Coordinates may come out at negative degrees; staying
// nonnegative is exactly membership in the reduced member space.
static SeriesVector module_expand(const ReducedRep& rr, SeriesVector w, int deg_cap,
                                  bool require_exact) {
  MatFp lead(rr.p, rr.d, rr.d_prime);
  for (int k = 0; k < rr.d_prime; ++k) {
    const FpVec& lv = rr.gens[static_cast<size_t>(k)].c.begin()->second;
    for (int r = 0; r < rr.d; ++r) lead.at(r, k) = lv[static_cast<size_t>(r)];
  }
  SeriesVector out = series_zero(rr.p, rr.d_prime);
  while (!w.c.empty()) {
    int m = w.c.begin()->first;
    if (m >= deg_cap) break;
    std::optional<FpVec> c = solve_linear(lead, w.c.begin()->second);
    if (!c)
      fail(ErrorKind::Membership,
           "module expansion: coefficient at degree " + std::to_string(m) +
               " is outside the generated span");
    for (int k = 0; k < rr.d_prime; ++k) {
      u32 ck = (*c)[static_cast<size_t>(k)];
      if (ck == 0) continue;
      series_add_to(out, m - rr.lead_deg[static_cast<size_t>(k)], [&] {
        FpVec e(static_cast<size_t>(rr.d_prime), 0);
        e[static_cast<size_t>(k)] = ck;
        return e;
      }());
      w = series_sub(w, series_scale(series_shift(rr.gens[static_cast<size_t>(k)],
                                                  m - rr.lead_deg[static_cast<size_t>(k)]),
                                     ck));
    }
    if (!w.c.empty() && w.c.begin()->first <= m)
      fail(ErrorKind::Inconsistency, "module expansion did not make progress");
  }
  if (require_exact && !w.c.empty())
    fail(ErrorKind::Membership, "module expansion: remainder at degree " +
                                    std::to_string(w.c.begin()->first) + " and beyond");
  return out;
}

ReducedRep u0_reduce(const Rep& rep, int window) {
  require_valid(rep);
  if (window < 2 || window > 64) fail(ErrorKind::Mismatch, "reduce: window must be in [2, 64]");
  require_lattice_preserving(rep);

  ReducedRep rr;
  rr.p = rep.p;
  rr.d = rep.d;
  rr.window = window;
  const int W = window;
  const int dim = rep.d * W;  // member coordinate (j, c) at index j*d + c

  // negative output degrees of closure words give the membership conditions
  std::vector<FpVec> cond;
  int vlen = 1;
  if (!rep.a0.blocks.empty()) {
    BlockSupport s = bm_support(rep.a0);
    int width = std::max({s.i_max - s.j_min, s.j_max - s.i_min, 0});
    vlen = zero_pattern(rep, 0, 0).vanish_len;  // translate invariant
    int slack = (vlen - 1) * width;
    int lo = -(s.j_max + slack);
    int hi = (W - 1 - s.j_min) + slack;
    std::vector<BlockMatrix> gens;
    for (int r = lo; r <= hi; ++r) gens.push_back(shift_conjugate(rep.a0, r));
    AlgebraClosure cl = close_algebra(rep.p, rep.d, gens, vlen);
    if (cl.budget_hit) fail(ErrorKind::Inconsistency, "reduce: closure did not vanish");

    for (const auto& layer : cl.layers)
      for (const BlockMatrix& word : layer) {
        auto it = word.blocks.begin();
        while (it != word.blocks.end()) {
          int i = it->first.i;
          auto end = it;
          bool complete = true;
          std::vector<std::pair<int, const MatFp*>> parts;
          while (end != word.blocks.end() && end->first.i == i) {
            if (end->first.j >= W) complete = false;       // reads past the window
            else if (end->first.j >= 0) parts.emplace_back(end->first.j, &end->second);
            ++end;
          }
          if (i < 0 && complete && !parts.empty()) {
            for (int r = 0; r < rep.d; ++r) {
              FpVec row(static_cast<size_t>(dim), 0);
              bool nonzero = false;
              for (const auto& [j, m] : parts)
                for (int c = 0; c < rep.d; ++c) {
                  u32 v = m->at(r, c);
                  row[static_cast<size_t>(j * rep.d + c)] = v;
                  nonzero |= v != 0;
                }
              if (nonzero) cond.push_back(std::move(row));
            }
          }
          it = end;
        }
      }
  }

  std::vector<FpVec> members;
  if (cond.empty()) {
    for (int idx = 0; idx < dim; ++idx) {
      FpVec e(static_cast<size_t>(dim), 0);
      e[static_cast<size_t>(idx)] = 1;
      members.push_back(std::move(e));
    }
  } else {
    members = kernel_basis(rows_from_vecs(rep.p, dim, cond));
    if (members.empty())
      fail(ErrorKind::Window, "reduce: window exhausted, no member vectors survive");
  }
  MatFp sol = echelon_form(rows_from_vecs(rep.p, dim, members)).rref;

  // module generators: one per new leading direction, ascending degree
  MatFp lead_span(rep.p, 0, rep.d);
  for (int r = 0; r < sol.rows; ++r) {
    int pivot = 0;
    while (pivot < dim && sol.at(r, pivot) == 0) ++pivot;
    if (pivot == dim) continue;
    int deg = pivot / rep.d;
    FpVec lv(static_cast<size_t>(rep.d), 0);
    for (int c = 0; c < rep.d; ++c) lv[static_cast<size_t>(c)] = sol.at(r, deg * rep.d + c);
    if (in_row_space(lead_span, lv)) continue;
    lead_span = echelon_form(stack_rows(lead_span, rows_from_vecs(rep.p, rep.d, {lv}))).rref;
    SeriesVector u = series_zero(rep.p, rep.d);
    for (int j = deg; j < W; ++j) {
      FpVec coef(static_cast<size_t>(rep.d), 0);
      for (int c = 0; c < rep.d; ++c) coef[static_cast<size_t>(c)] = sol.at(r, j * rep.d + c);
      series_set(u, j, coef);
    }
    rr.gens.push_back(std::move(u));
    rr.lead_deg.push_back(deg);
  }
  rr.d_prime = static_cast<int>(rr.gens.size());
  if (rr.d_prime == 0) fail(ErrorKind::Window, "reduce: window exhausted, no member vectors survive");

  // conjugated generator, column blocks assembled by module expansion
  std::map<BlockKey, MatFp> blocks;
  if (!rep.a0.blocks.empty()) {
    BlockSupport s = bm_support(rep.a0);
    for (int k = 0; k < rr.d_prime; ++k) {
      const SeriesVector& u = rr.gens[static_cast<size_t>(k)];
      int top = u.c.rbegin()->first;
      for (int j = s.j_min - top; j <= s.j_max - rr.lead_deg[static_cast<size_t>(k)]; ++j) {
        SeriesVector img = bm_apply(rep.a0, series_shift(u, j));
        if (img.c.empty()) continue;
        SeriesVector ex = [&] {
          try {
            return module_expand(rr, img, 4 * W + 8, true);
          } catch (const Error& e) {
            if (e.kind() == ErrorKind::Membership)
              fail(ErrorKind::Window,
                   std::string("reduce: conjugated generator does not close in the window (") +
                       e.what() + ")");
            throw;
          }
        }();
        for (const auto& [m, vec] : ex.c) {
          BlockKey key{m, j};
          auto ins = blocks.try_emplace(key, MatFp(rep.p, rr.d_prime, rr.d_prime));
          for (int r = 0; r < rr.d_prime; ++r)
            ins.first->second.at(r, k) = vec[static_cast<size_t>(r)];
        }
      }
    }
  }
  BlockMatrix a0p = bm_zero(rep.p, rr.d_prime);
  for (auto& [key, m] : blocks) bm_set(a0p, key.i, key.j, m);
  for (const auto& [key, m] : a0p.blocks) {
    (void)m;
    if (key.i < key.j)
      fail(ErrorKind::Window, "reduce: conjugated block at (" + std::to_string(key.i) + ", " +
                                  std::to_string(key.j) + ") sticks above the diagonal");
  }

  rr.inner = make_rep(rep.p, rr.d_prime, a0p);
  ValidationReport vr = validate(rr.inner);
  if (!vr.valid)
    fail(ErrorKind::Window, "reduce: conjugated rep is not closed in the window: " + vr.reason);
  return rr;
}

SeriesVector theta_apply(const ReducedRep& rr, const SeriesVector& zp) {
  if (zp.p != rr.p || zp.d != rr.d_prime)
    fail(ErrorKind::Mismatch, "theta: coefficient vector has the wrong shape");
  SeriesVector out = series_zero(rr.p, rr.d);
  for (const auto& [m, vec] : zp.c)
    for (int k = 0; k < rr.d_prime; ++k)
      if (vec[static_cast<size_t>(k)] != 0)
        out = series_add(out, series_scale(series_shift(rr.gens[static_cast<size_t>(k)], m),
                                           vec[static_cast<size_t>(k)]));
  if (zp.prec) out = series_truncate(out, *zp.prec + rr.lead_deg.front());
  return out;
}

SeriesVector theta_expand(const ReducedRep& rr, const SeriesVector& z) {
  if (z.p != rr.p || z.d != rr.d)
    fail(ErrorKind::Mismatch, "theta: ambient vector has the wrong shape");
  int cap = z.prec ? *z.prec : kDegreeWindow;
  SeriesVector out = module_expand(rr, z, cap, !z.prec.has_value());
  if (z.prec) out = series_truncate(out, *z.prec - rr.lead_deg.back());
  return out;
}

}  // namespace fpt
