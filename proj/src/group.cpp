#include "fpt/group.hpp"

#include <algorithm>
#include <vector>

#include "fpt/error.hpp"

namespace fpt {

namespace {

void require_same(const SDElement& x, const SDElement& y) {
  if (x.rep == nullptr || x.rep != y.rep)
    fail(ErrorKind::Mismatch, "sd: elements live over different reps");
}

// Largest amount by which a block reads above the degree it writes.
int max_lag(const BlockMatrix& a) {
  int m = 0;
  for (const auto& [k, blk] : a.blocks) m = std::max(m, k.j - k.i);
  return m;
}

}  // namespace

SDElement sd_identity(const Rep& rep) {
  return {&rep, series_zero(rep.p, rep.d), series_zero(rep.p, 1)};
}

SDElement sd_make(const Rep& rep, SeriesVector z, SeriesVector f) {
  if (z.p != rep.p || f.p != rep.p || z.d != rep.d || f.d != 1)
    fail(ErrorKind::Mismatch, "sd_make: component shape does not match the rep");
  return {&rep, std::move(z), std::move(f)};
}

SDElement sd_mul(const SDElement& x, const SDElement& y) {
  require_same(x, y);
  return {x.rep, series_add(x.z, phi_apply(*x.rep, x.f, y.z)), series_add(x.f, y.f)};
}

SDElement sd_inv(const SDElement& x) {
  if (x.rep == nullptr) fail(ErrorKind::Mismatch, "sd_inv: element has no ambient rep");
  SeriesVector nf = series_neg(x.f);
  return {x.rep, series_neg(phi_apply(*x.rep, nf, x.z)), std::move(nf)};
}

SDElement sd_commutator(const SDElement& x, const SDElement& y) {
  return sd_mul(sd_mul(sd_mul(x, y), sd_inv(x)), sd_inv(y));
}

SDElement contraction_auto(const SDElement& x) {
  if (x.rep == nullptr) fail(ErrorKind::Mismatch, "contraction_auto: element has no ambient rep");
  return {x.rep, series_shift(x.z, 1), series_shift(x.f, 1)};
}

bool sd_is_identity(const SDElement& x) {
  return series_known_zero(x.z) && series_known_zero(x.f);
}

bool sd_eq_mod(const SDElement& x, const SDElement& y, int prec) {
  require_same(x, y);
  return series_eq_mod(x.z, y.z, prec) && series_eq_mod(x.f, y.f, prec);
}

std::string sd_to_string(const SDElement& x) {
  return "(" + series_to_string(x.z) + "; " + series_to_string(x.f) + ")";
}

CentralReport central_certificate(const Rep& rep, const SeriesVector& xi) {
  require_valid(rep);
  if (xi.p != rep.p || xi.d != rep.d)
    fail(ErrorKind::Mismatch, "central_certificate: xi shape does not match the rep");
  if (series_known_zero(xi))
    fail(ErrorKind::Mismatch, "central_certificate: xi must be nonzero");

  CentralReport out;
  SDElement x = sd_make(rep, xi, series_zero(rep.p, 1));

  // A commutator with (0, t^r) has normal part -(phi(t^r) - Id) xi, nonzero
  // at most where a shifted block column meets the support of xi; sweep that
  // range plus a demonstration margin around 0.
  int rlo = -4, rhi = 4;
  BlockSupport s = bm_support(rep.a0);
  if (!s.empty && !xi.c.empty()) {
    int lo = xi.c.begin()->first;
    int hi = xi.exact() ? xi.c.rbegin()->first : *xi.prec - 1;
    rlo = std::min(rlo, lo - s.j_max);
    rhi = std::max(rhi, hi - s.j_min);
  }
  for (int r = rlo; r <= rhi; ++r) {
    SDElement y = sd_make(rep, series_zero(rep.p, rep.d), unit_series(rep.p, 1, 0, r));
    ++out.checked;
    if (!sd_is_identity(sd_commutator(x, y))) {
      out.witness = "(0, t^" + std::to_string(r) + ")";
      return out;
    }
  }
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < rep.d; ++k) {
      SDElement y = sd_make(rep, unit_series(rep.p, rep.d, k, j), series_zero(rep.p, 1));
      ++out.checked;
      if (!sd_is_identity(sd_commutator(x, y))) {
        out.witness = "(e_" + std::to_string(k + 1) + " t^" + std::to_string(j) + ", 0)";
        return out;
      }
    }
  out.central = true;
  return out;
}

ClassReport nilpotency_class(const Rep& rep, int precision, int max_class) {
  require_valid(rep);
  if (precision < 1 || max_class < 1)
    fail(ErrorKind::Mismatch, "nilpotency_class: precision and max_class must be positive");
  for (const auto& [k, blk] : rep.a0.blocks)
    if (k.j >= 0 && k.i < 0)
      fail(ErrorKind::Mismatch,
           "nilpotency_class: generator does not preserve the lattice; normalize first");

  ClassReport out;
  out.precision = precision;
  const u32 p = rep.p;
  const int d = rep.d;
  const int lag = max_lag(rep.a0);
  // Each layer is computed to `lag` fewer sound degrees than the one before;
  // the padding keeps every verdict degree exactly determined.
  const int w = precision + (max_class + 1) * lag;

  // Twist components of commutators cancel, so from the second layer on the
  // filtration sits in the normal part and each layer is the span of the
  // previous one's images under the effective phi(t^r) - Id.  Products of
  // several such operators stay inside the span because each image is again
  // a lattice vector of the layer below.
  BlockSupport s = bm_support(rep.a0);
  std::vector<BlockMatrix> shifts;
  if (!s.empty)
    for (int r = 0; r + s.j_min < w; ++r) shifts.push_back(shift_conjugate(rep.a0, r));

  auto to_row = [&](const SeriesVector& z) {
    FpVec row(static_cast<size_t>(w) * d, 0);
    for (const auto& [deg, v] : z.c) {
      if (deg < 0) fail(ErrorKind::Inconsistency, "nilpotency_class: filtration left the lattice");
      if (deg >= w) continue;
      for (int c = 0; c < d; ++c) row[static_cast<size_t>(deg) * d + c] = v[c];
    }
    return row;
  };
  auto to_series = [&](const MatFp& rref, int i, int prec) {
    SeriesVector z = series_zero_mod(p, d, prec);
    for (int deg = 0; deg < std::min(w, prec); ++deg) {
      FpVec v(d, 0);
      for (int c = 0; c < d; ++c) v[c] = rref.at(i, deg * d + c);
      if (!vec_is_zero(v)) series_set(z, deg, std::move(v));
    }
    return z;
  };

  int layer_prec = w;
  std::vector<SeriesVector> basis;
  {
    std::vector<FpVec> rows;
    for (const auto& a : shifts)
      for (int j = 0; j < w; ++j)
        for (int k = 0; k < d; ++k) {
          SeriesVector v = series_truncate(bm_apply(a, unit_series(p, d, k, j)), w);
          if (!series_known_zero(v)) rows.push_back(to_row(v));
        }
    Echelon e = echelon_form(rows_from_vecs(p, w * d, rows));
    for (int i = 0; i < e.rank; ++i) basis.push_back(to_series(e.rref, i, layer_prec));
  }

  auto trivial = [&](const std::vector<SeriesVector>& b) {
    for (const auto& v : b)
      if (!series_known_zero(series_truncate(v, precision))) return false;
    return true;
  };

  for (int m = 2; m <= max_class + 1; ++m) {
    out.layer_dims.push_back(static_cast<int>(basis.size()));
    if (trivial(basis)) {
      out.bounded = true;
      out.k = m - 1;
      out.summary =
          "class <= " + std::to_string(out.k) + " at precision " + std::to_string(precision);
      return out;
    }
    if (m == max_class + 1) break;
    int next_prec = layer_prec - lag;
    std::vector<FpVec> next;
    for (const auto& a : shifts)
      for (const auto& v : basis) {
        SeriesVector u = series_truncate(bm_apply(a, v), next_prec);
        if (!series_known_zero(u)) next.push_back(to_row(u));
      }
    Echelon e = echelon_form(rows_from_vecs(p, w * d, next));
    basis.clear();
    for (int i = 0; i < e.rank; ++i) basis.push_back(to_series(e.rref, i, next_prec));
    layer_prec = next_prec;
  }

  out.bounded = false;
  out.k = max_class;
  out.summary = "class >= " + std::to_string(max_class + 1) + " at precision " +
                std::to_string(precision);
  return out;
}

}  // namespace fpt
