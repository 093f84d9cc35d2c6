#include "fpt/subgroup.hpp"

#include <sstream>

namespace fpt {

int q_index(int deg, int coord, int K, int d) { return (deg + K) * d + coord; }

FpVec q_coords(const SeriesVector& z, int K, u32 p, int d) {
  if (z.p != p || z.d != d) fail(ErrorKind::Mismatch, "q_coords: shape mismatch");
  if (!z.known_at(K - 1))
    fail(ErrorKind::Precision, "class modulo t^" + std::to_string(K) +
                                   " needs precision " + std::to_string(K));
  FpVec v(static_cast<size_t>(2 * K * d), 0);
  for (const auto& [deg, coef] : z.c) {
    if (deg >= K) break;
    if (deg < -K)
      fail(ErrorKind::Membership,
           "vector has support at degree " + std::to_string(deg) + " below -" + std::to_string(K));
    for (int c = 0; c < d; ++c) v[q_index(deg, c, K, d)] = coef[c];
  }
  return v;
}

SeriesVector q_lift(const FpVec& coords, int K, u32 p, int d) {
  if (static_cast<int>(coords.size()) != 2 * K * d)
    fail(ErrorKind::Mismatch, "q_lift: coordinate length mismatch");
  SeriesVector z = series_zero(p, d);
  for (int deg = -K; deg < K; ++deg) {
    FpVec coef(static_cast<size_t>(d), 0);
    bool nz = false;
    for (int c = 0; c < d; ++c) {
      coef[c] = coords[q_index(deg, c, K, d)];
      nz = nz || coef[c];
    }
    if (nz) series_set(z, deg, std::move(coef));
  }
  return z;
}

static CompactOpenSubgroup make_cos(u32 p, int d, int K, const MatFp& rows) {
  check_modulus(p);
  if (d <= 0) fail(ErrorKind::Mismatch, "subgroup dimension must be positive");
  if (K < 1) fail(ErrorKind::Mismatch, "subgroup depth must be at least 1");
  check_degree(K);
  if (rows.cols != 2 * K * d) fail(ErrorKind::Mismatch, "subgroup basis has wrong width");
  Echelon e = echelon_form(rows);
  CompactOpenSubgroup v;
  v.p = p;
  v.d = d;
  v.K = K;
  v.basis = MatFp(p, e.rank, rows.cols);
  for (int i = 0; i < e.rank; ++i)
    for (int j = 0; j < rows.cols; ++j) v.basis.at(i, j) = e.rref.at(i, j);
  return v;
}

// Rows for the unit classes e_c t^deg, deg in [deg_lo, deg_hi).
static MatFp unit_rows(u32 p, int d, int K, int deg_lo, int deg_hi) {
  int n = std::max(0, deg_hi - deg_lo) * d;
  MatFp m(p, n, 2 * K * d);
  int r = 0;
  for (int deg = deg_lo; deg < deg_hi; ++deg)
    for (int c = 0; c < d; ++c) m.at(r++, q_index(deg, c, K, d)) = 1;
  return m;
}

CompactOpenSubgroup standard_lattice(u32 p, int d) {
  return make_cos(p, d, 1, unit_rows(p, d, 1, 0, 1));
}

CompactOpenSubgroup shifted_lattice(u32 p, int d, int r) {
  int K = std::max(std::abs(r), 1);
  return make_cos(p, d, K, unit_rows(p, d, K, r, K));
}

CompactOpenSubgroup subgroup_from_coords(u32 p, int d, int K, const MatFp& rows) {
  return make_cos(p, d, K, rows);
}

CompactOpenSubgroup subgroup_from_subspace(u32 p, int d, int K,
                                           const std::vector<SeriesVector>& spanning) {
  std::vector<FpVec> rows;
  for (const SeriesVector& z : spanning) rows.push_back(q_coords(z, K, p, d));
  return make_cos(p, d, K, rows_from_vecs(p, 2 * K * d, rows));
}

CompactOpenSubgroup from_generators(u32 p, int d, const std::vector<SeriesVector>& gens, int K) {
  std::vector<FpVec> rows;
  for (const SeriesVector& g : gens) {
    if (g.prec && *g.prec < K)
      fail(ErrorKind::Precision, "generator precision below the subgroup depth");
    // Shifts of g that are nonzero modulo shift^K(lat).
    for (int j = 0; lo_bound(g) + j < K; ++j) rows.push_back(q_coords(series_shift(g, j), K, p, d));
  }
  return make_cos(p, d, K, rows_from_vecs(p, 2 * K * d, rows));
}

CompactOpenSubgroup cos_embed(const CompactOpenSubgroup& V, int K2) {
  if (K2 < V.K) fail(ErrorKind::Mismatch, "cos_embed: depth may only grow");
  if (K2 == V.K) return V;
  int d = V.d;
  MatFp rows(V.p, V.basis.rows, 2 * K2 * d);
  for (int r = 0; r < V.basis.rows; ++r)
    for (int deg = -V.K; deg < V.K; ++deg)
      for (int c = 0; c < d; ++c)
        rows.at(r, q_index(deg, c, K2, d)) = V.basis.at(r, q_index(deg, c, V.K, d));
  return make_cos(V.p, d, K2, stack_rows(rows, unit_rows(V.p, d, K2, V.K, K2)));
}

CompactOpenSubgroup cos_tighten(const CompactOpenSubgroup& V) {
  CompactOpenSubgroup cur = V;
  while (cur.K > 1) {
    int K = cur.K, d = cur.d;
    // Shrinking to depth K-1 requires support above degree -K ...
    bool ok = true;
    for (int r = 0; r < cur.basis.rows && ok; ++r)
      for (int c = 0; c < d; ++c)
        if (cur.basis.at(r, q_index(-K, c, K, d))) { ok = false; break; }
    // ... and all unit classes of degree K-1 inside W.
    if (ok) {
      MatFp units = unit_rows(cur.p, d, K, K - 1, K);
      for (int r = 0; r < units.rows && ok; ++r) {
        FpVec row(units.a.begin() + static_cast<size_t>(r) * units.cols,
                  units.a.begin() + static_cast<size_t>(r + 1) * units.cols);
        ok = in_row_space(cur.basis, row);
      }
    }
    if (!ok) break;
    MatFp rows(cur.p, cur.basis.rows, 2 * (K - 1) * d);
    for (int r = 0; r < cur.basis.rows; ++r)
      for (int deg = -(K - 1); deg < K - 1; ++deg)
        for (int c = 0; c < d; ++c)
          rows.at(r, q_index(deg, c, K - 1, d)) = cur.basis.at(r, q_index(deg, c, K, d));
    cur = make_cos(cur.p, d, K - 1, rows);
  }
  return cur;
}

static void check_cos_compatible(const CompactOpenSubgroup& a, const CompactOpenSubgroup& b) {
  if (a.p != b.p || a.d != b.d) fail(ErrorKind::Mismatch, "subgroups over different spaces");
}

bool cos_member(const CompactOpenSubgroup& V, const SeriesVector& z) {
  if (z.p != V.p || z.d != V.d) fail(ErrorKind::Mismatch, "cos_member: shape mismatch");
  if (!z.known_at(V.K - 1))
    fail(ErrorKind::Precision, "membership at depth " + std::to_string(V.K) +
                                   " needs precision " + std::to_string(V.K));
  if (!z.c.empty() && z.c.begin()->first < -V.K) return false;
  return in_row_space(V.basis, q_coords(z, V.K, V.p, V.d));
}

bool cos_contains(const CompactOpenSubgroup& U, const CompactOpenSubgroup& V) {
  check_cos_compatible(U, V);
  int K = std::max(U.K, V.K);
  CompactOpenSubgroup ue = cos_embed(U, K), ve = cos_embed(V, K);
  for (int r = 0; r < ve.basis.rows; ++r) {
    FpVec row(ve.basis.a.begin() + static_cast<size_t>(r) * ve.basis.cols,
              ve.basis.a.begin() + static_cast<size_t>(r + 1) * ve.basis.cols);
    if (!in_row_space(ue.basis, row)) return false;
  }
  return true;
}

bool cos_equal(const CompactOpenSubgroup& U, const CompactOpenSubgroup& V) {
  check_cos_compatible(U, V);
  int K = std::max(U.K, V.K);
  return cos_embed(U, K).basis == cos_embed(V, K).basis;
}

CompactOpenSubgroup cos_intersect(const CompactOpenSubgroup& U, const CompactOpenSubgroup& V) {
  check_cos_compatible(U, V);
  int K = std::max(U.K, V.K);
  CompactOpenSubgroup ue = cos_embed(U, K), ve = cos_embed(V, K);
  // x lies in both spans iff it is annihilated by both annihilators.
  MatFp ann_u = rows_from_vecs(U.p, ue.q_dim(), kernel_basis(ue.basis));
  MatFp ann_v = rows_from_vecs(U.p, ue.q_dim(), kernel_basis(ve.basis));
  std::vector<FpVec> inter = kernel_basis(stack_rows(ann_u, ann_v));
  return make_cos(U.p, U.d, K, rows_from_vecs(U.p, ue.q_dim(), inter));
}

// Rows of V.basis shifted by r in degree, at depth K + |r| (before
// tightening).
static CompactOpenSubgroup shift_cos(const CompactOpenSubgroup& V, int r) {
  int K2 = V.K + std::abs(r), d = V.d;
  MatFp rows(V.p, V.basis.rows, 2 * K2 * d);
  for (int row = 0; row < V.basis.rows; ++row)
    for (int deg = -V.K; deg < V.K; ++deg)
      for (int c = 0; c < d; ++c)
        rows.at(row, q_index(deg + r, c, K2, d)) = V.basis.at(row, q_index(deg, c, V.K, d));
  // shift^r of the tail shift^K(lat) is visible in Q_{K2} up to degree K2.
  return make_cos(V.p, d, K2, stack_rows(rows, unit_rows(V.p, d, K2, V.K + r, K2)));
}

CompactOpenSubgroup tau_image(const CompactOpenSubgroup& V) {
  return cos_tighten(shift_cos(V, 1));
}

CompactOpenSubgroup tau_preimage(const CompactOpenSubgroup& V) {
  return cos_tighten(shift_cos(V, -1));
}

bool is_tidy(const CompactOpenSubgroup& V) { return cos_contains(V, tau_image(V)); }

int log_index(const CompactOpenSubgroup& U, const CompactOpenSubgroup& V) {
  if (!cos_contains(U, V))
    fail(ErrorKind::Membership, "log_index: second subgroup not contained in the first");
  int K = std::max(U.K, V.K);
  return cos_embed(U, K).dim() - cos_embed(V, K).dim();
}

TidyBasis tidy_basis_from(const CompactOpenSubgroup& V, const std::vector<SeriesVector>& b) {
  CompactOpenSubgroup tv = tau_image(V);
  if (!cos_contains(V, tv))
    fail(ErrorKind::Membership, "tidy basis: subgroup is not shift invariant");
  if (static_cast<int>(b.size()) != V.d)
    fail(ErrorKind::Mismatch, "tidy basis: expected " + std::to_string(V.d) + " vectors");
  int K1 = V.K + 1;
  CompactOpenSubgroup tv1 = cos_embed(tv, K1);
  MatFp stacked = tv1.basis;
  for (const SeriesVector& v : b) {
    if (!cos_member(V, v))
      fail(ErrorKind::Membership, "tidy basis: representative not in the subgroup");
    stacked = stack_rows(stacked, rows_from_vecs(V.p, 2 * K1 * V.d, {q_coords(v, K1, V.p, V.d)}));
  }
  if (mat_rank(stacked) != tv1.dim() + V.d)
    fail(ErrorKind::Membership,
         "tidy basis: representatives dependent modulo the shifted subgroup");

  TidyBasis tb;
  tb.V = V;
  tb.b = b;
  // Precomputed system for layer peeling: columns are the classes of the b_k
  // followed by a basis of shift(V), all in Q_{K1}.
  int cols = V.d + tv1.basis.rows;
  MatFp m(V.p, 2 * K1 * V.d, cols);
  for (int k = 0; k < V.d; ++k) {
    FpVec col = q_coords(b[static_cast<size_t>(k)], K1, V.p, V.d);
    for (size_t i = 0; i < col.size(); ++i) m.at(static_cast<int>(i), k) = col[i];
  }
  for (int r = 0; r < tv1.basis.rows; ++r)
    for (int j = 0; j < tv1.basis.cols; ++j) m.at(j, V.d + r) = tv1.basis.at(r, j);
  tb.expand_mat = m;
  return tb;
}

TidyBasis complement_basis(const CompactOpenSubgroup& V) {
  CompactOpenSubgroup tv = tau_image(V);
  if (!cos_contains(V, tv))
    fail(ErrorKind::Membership, "complement_basis: subgroup is not tidy");
  int K = std::max(V.K, tv.K);
  CompactOpenSubgroup ve = cos_embed(V, K), tve = cos_embed(tv, K);
  std::vector<SeriesVector> b;
  MatFp have = tve.basis;
  for (int r = 0; r < ve.basis.rows; ++r) {
    FpVec row(ve.basis.a.begin() + static_cast<size_t>(r) * ve.basis.cols,
              ve.basis.a.begin() + static_cast<size_t>(r + 1) * ve.basis.cols);
    MatFp trial = stack_rows(have, rows_from_vecs(V.p, ve.q_dim(), {row}));
    if (mat_rank(trial) > mat_rank(have)) {
      have = trial;
      b.push_back(q_lift(row, K, V.p, V.d));
    }
  }
  if (static_cast<int>(b.size()) != V.d)
    fail(ErrorKind::Inconsistency, "complement of the shifted subgroup has dimension " +
                                       std::to_string(b.size()) + ", expected " +
                                       std::to_string(V.d));
  return tidy_basis_from(V, b);
}

int layer_of(const CompactOpenSubgroup& V, const SeriesVector& z) {
  if (z.c.empty()) {
    if (z.exact()) fail(ErrorKind::Mismatch, "layer of the zero vector is undefined");
    fail(ErrorKind::Precision, "layer of a vector with no known coefficients");
  }
  int lo = lo_bound(z);
  int j = lo - V.K;  // shift^{-j} z has valuation V.K, so it lies in V
  while (cos_member(V, series_shift(z, -(j + 1)))) {
    ++j;
    if (j > lo + V.K)
      fail(ErrorKind::Inconsistency, "layer search left the possible range");
  }
  return j;
}

Expansion basis_expand(const TidyBasis& tb, const SeriesVector& z, int j_max) {
  const CompactOpenSubgroup& V = tb.V;
  Expansion out;
  out.remainder = z;
  if (z.exact() && z.c.empty()) {
    out.exact = true;
    return out;
  }
  int K1 = V.K + 1;
  if (z.c.empty() && z.prec) {
    // No known terms: the vector lies in shift^m(V) for m = prec - K.
    out.j0 = out.next = *z.prec - V.K;
    return out;
  }
  out.j0 = layer_of(V, z);
  out.next = out.j0;
  SeriesVector cur = z;
  for (int j = out.j0; j <= j_max; ++j) {
    if (cur.exact() && cur.c.empty()) {
      out.exact = true;
      break;
    }
    if (cur.prec && j + K1 > *cur.prec) break;  // next layer not determined
    FpVec rhs = q_coords(series_shift(cur, -j), K1, V.p, V.d);
    auto sol = solve_linear(tb.expand_mat, rhs);
    if (!sol)
      fail(ErrorKind::Inconsistency, "layer " + std::to_string(j) +
                                         " is not spanned by the complement basis");
    FpVec n(sol->begin(), sol->begin() + V.d);
    if (!vec_is_zero(n)) {
      out.coeff[j] = n;
      SeriesVector step = series_zero(V.p, V.d);
      for (int k = 0; k < V.d; ++k)
        step = series_add(step, series_scale(series_shift(tb.b[k], j), n[k]));
      cur = series_sub(cur, step);
    }
    out.next = j + 1;
    out.remainder = cur;
  }
  if (cur.exact() && cur.c.empty()) out.exact = true;
  out.remainder = cur;
  return out;
}

SeriesVector expansion_value(const TidyBasis& tb, const Expansion& e) {
  SeriesVector acc = series_zero(tb.V.p, tb.V.d);
  for (const auto& [j, n] : e.coeff)
    for (int k = 0; k < tb.V.d; ++k)
      acc = series_add(acc, series_scale(series_shift(tb.b[k], j), n[k]));
  return acc;
}

std::string cos_to_string(const CompactOpenSubgroup& V) {
  std::ostringstream os;
  os << "depth " << V.K << ", dim " << V.dim() << "/" << V.q_dim();
  return os.str();
}

}  // namespace fpt
