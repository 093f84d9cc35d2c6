#include "fpt/rep.hpp"

#include <algorithm>
#include <sstream>

#include "fpt/error.hpp"

namespace fpt {

Rep make_rep(u32 p, int d, BlockMatrix a0) {
  check_modulus(p);
  if (d <= 0) fail(ErrorKind::Mismatch, "rep: dimension must be positive");
  if (!a0.blocks.empty() && (a0.p != p || a0.d != d))
    fail(ErrorKind::Mismatch, "rep: generator does not match p, d");
  Rep rep;
  rep.p = p;
  rep.d = d;
  rep.a0 = std::move(a0);
  rep.a0.p = p;
  rep.a0.d = d;
  return rep;
}

static std::string key_str(const BlockKey& k) {
  return "(" + std::to_string(k.i) + ", " + std::to_string(k.j) + ")";
}

ValidationReport validate(Rep& rep) {
  ValidationReport out;
  BlockMatrix ord = unipotent_pow(rep.a0, rep.p);
  if (!ord.is_zero()) {
    out.reason = "generator does not have order dividing " + std::to_string(rep.p) +
                 ": residual block at " + key_str(ord.blocks.begin()->first);
    rep.state = Rep::State::Invalid;
    rep.reason = out.reason;
    return out;
  }
  BlockSupport s = bm_support(rep.a0);
  int range = 0;
  if (!s.empty) range = std::max({s.i_max - s.j_min, s.j_max - s.i_min, 0});
  out.comm_lo = -range;
  out.comm_hi = range;
  for (int r = -range; r <= range; ++r) {
    if (r == 0) continue;
    BlockMatrix c = bm_commutator(rep.a0, shift_conjugate(rep.a0, r));
    if (!c.is_zero()) {
      out.reason = "generator does not commute with its shift by " + std::to_string(r) +
                   ": commutator block at " + key_str(c.blocks.begin()->first);
      rep.state = Rep::State::Invalid;
      rep.reason = out.reason;
      return out;
    }
  }
  out.valid = true;
  rep.state = Rep::State::Valid;
  rep.reason.clear();
  return out;
}

Rep validated_rep(u32 p, int d, BlockMatrix a0) {
  Rep rep = make_rep(p, d, std::move(a0));
  ValidationReport r = validate(rep);
  if (!r.valid) fail(ErrorKind::Invalid, "rep: " + r.reason);
  return rep;
}

void require_valid(const Rep& rep) {
  if (rep.state == Rep::State::Valid) return;
  if (rep.state == Rep::State::Invalid)
    fail(ErrorKind::Invalid, "rep is invalid: " + rep.reason);
  fail(ErrorKind::Invalid, "rep has not been validated");
}

BlockMatrix phi_minus_id(const Rep& rep, const SeriesVector& f) {
  require_valid(rep);
  if (f.p != rep.p || f.d != 1)
    fail(ErrorKind::Mismatch, "phi: scalar argument over the same field expected");
  if (!f.exact())
    fail(ErrorKind::Precision, "phi: matrix of a truncated scalar is not determined");
  BlockMatrix acc = bm_zero(rep.p, rep.d);
  for (const auto& [deg, coeff] : f.c) {
    // validated factors commute, so the composition order is free
    acc = unipotent_compose(acc, unipotent_pow(shift_conjugate(rep.a0, deg), coeff[0]));
  }
  return acc;
}

SeriesVector phi_apply(const Rep& rep, const SeriesVector& f, const SeriesVector& z) {
  require_valid(rep);
  if (f.p != rep.p || f.d != 1)
    fail(ErrorKind::Mismatch, "phi: scalar argument over the same field expected");
  if (z.p != rep.p || z.d != rep.d)
    fail(ErrorKind::Mismatch, "phi: vector argument does not match the rep");
  if (rep.a0.blocks.empty()) return z;  // the trivial action, exact for any tail of f
  if (f.exact()) return unipotent_apply(phi_minus_id(rep, f), z);
  if (z.c.empty() && z.exact()) return z;
  SeriesVector head = f;
  head.prec.reset();
  BlockMatrix known = phi_minus_id(rep, head);
  // the unknown factors of phi(f) move degrees up by at least i_min + prec;
  // composing with the known part can pull that down by its delta
  int cap = bm_support(rep.a0).i_min + *f.prec + std::min(0, bm_delta_min(known));
  if (cap <= -kDegreeWindow)
    fail(ErrorKind::Precision, "phi: scalar is truncated too shallow to apply");
  SeriesVector out = unipotent_apply(known, z);
  return series_truncate(out, std::min(cap, kDegreeWindow));
}

ZeroPattern zero_pattern(const Rep& rep, int max_m, int i_hi, int max_len, int max_rank) {
  require_valid(rep);
  if (max_m < 0 || i_hi < 0) fail(ErrorKind::Mismatch, "zero pattern: negative window");
  ZeroPattern zp;
  zp.p = rep.p;
  zp.d = rep.d;
  zp.a.assign(static_cast<size_t>(max_m) + 1, 0);
  for (int i = 0; i <= i_hi; ++i) zp.b[i] = 0;
  if (rep.a0.blocks.empty()) {
    zp.complete = true;
    zp.vanish_len = 1;
    return zp;
  }
  BlockSupport s = bm_support(rep.a0);
  int width = std::max({s.i_max - s.j_min, s.j_max - s.i_min, 0});
  int r_max = std::max(width, 1);
  AlgebraClosure cl;
  for (;;) {
    cl = close_algebra(rep.p, rep.d, shifted_generators(rep.a0, r_max), max_len, max_rank);
    if (cl.budget_hit)
      fail(ErrorKind::Budget, "zero pattern: products did not vanish within the length budget");
    // any word over all shifts is a diagonal translate of one whose
    // consecutive shifts differ by at most width
    int need = std::max(1, (cl.vanish_len - 1) * width);
    if (r_max >= need) break;
    r_max = need;
  }
  zp.r_max = r_max;
  zp.complete = true;
  zp.vanish_len = cl.vanish_len;
  zp.envelope = cl.support();

  // rows: a[m] is the largest row cutoff such that translates by s >= m of
  // envelope blocks with column lag j - i > -m all sit at rows >= a[m]
  int prev = 0;
  for (int m = 0; m <= max_m; ++m) {
    int raw = kDegreeWindow;
    for (const BlockKey& k : zp.envelope)
      if (k.j > k.i - m) raw = std::min(raw, k.i + m);
    int am = std::min({prev, raw, 0});
    zp.a[static_cast<size_t>(m)] = am;
    prev = am;
  }

  // columns: b[i] is the furthest lag j - i reachable at or above row i by
  // any translate s >= 0, i.e. a running maximum over envelope rows <= i
  if (!zp.envelope.empty()) {
    int run = kDegreeWindow;
    for (const BlockKey& k : zp.envelope) run = std::min(run, k.j - k.i);
    std::map<int, int> row_lag;
    for (const BlockKey& k : zp.envelope) {
      auto it = row_lag.find(k.i);
      if (it == row_lag.end()) row_lag.emplace(k.i, k.j - k.i);
      else it->second = std::max(it->second, k.j - k.i);
    }
    auto it = row_lag.begin();
    for (int i = std::min(0, row_lag.begin()->first); i <= i_hi; ++i) {
      while (it != row_lag.end() && it->first <= i) {
        run = std::max(run, it->second);
        ++it;
      }
      if (i >= 0) zp.b[i] = run;
    }
  }
  return zp;
}

// Exact image (I + m)(V). Precondition: (I + m)^p = I, which holds for every
// phi(f) - Id of a validated rep.
static CompactOpenSubgroup image_subgroup(const CompactOpenSubgroup& V, const BlockMatrix& m) {
  if (m.is_zero()) return V;
  BlockMatrix minv = unipotent_pow(m, V.p - 1);
  int dm = std::min(bm_delta_min(m), 0);
  int di = std::min(bm_delta_min(minv), 0);
  // tau^{K2} lat pulls back into V under the inverse, so it lies in the image
  int K2 = V.K + std::max(-dm, -di);
  // beyond depth J the map is trivial modulo tau^{K2} lat
  int J = K2 - dm;
  std::vector<SeriesVector> gens;
  for (int r = 0; r < V.basis.rows; ++r) {
    FpVec row(static_cast<size_t>(V.basis.cols));
    for (int c = 0; c < V.basis.cols; ++c) row[static_cast<size_t>(c)] = V.basis.at(r, c);
    gens.push_back(unipotent_apply(m, q_lift(row, V.K, V.p, V.d)));
  }
  for (int j = V.K; j < J; ++j)
    for (int c = 0; c < V.d; ++c)
      gens.push_back(unipotent_apply(m, unit_series(V.p, V.d, c, j)));
  // plain span: the image of a subgroup under one map need not be shift
  // invariant, so the module closure of from_generators would inflate it
  return subgroup_from_subspace(V.p, V.d, K2, gens);
}

CompactOpenSubgroup invariant_subgroup(const Rep& rep) {
  require_valid(rep);
  CompactOpenSubgroup V = standard_lattice(rep.p, rep.d);
  if (rep.a0.blocks.empty()) return V;
  BlockSupport s = bm_support(rep.a0);
  // shifts beyond 2K - i_min map V into tau^K lat on both sides and cannot
  // move it, so only the low shifts need intersecting or checking
  auto shift_bound = [&s](const CompactOpenSubgroup& W) {
    return std::max(0, 2 * W.K - s.i_min);
  };
  for (int round = 0; round < 64; ++round) {
    CompactOpenSubgroup next = V;
    int r_hi = shift_bound(V);
    for (int r = 0; r < r_hi; ++r)
      next = cos_intersect(next, image_subgroup(V, shift_conjugate(rep.a0, r)));
    next = cos_tighten(next);
    if (!cos_equal(next, V)) {
      if (next.K > 64)
        fail(ErrorKind::Stabilization, "invariant subgroup: iteration exceeded depth budget");
      V = next;
      continue;
    }
    // a fixed point is invariant: images contain V and preserve index
    for (int guard = 0; !cos_contains(V, tau_image(V)); ++guard) {
      if (guard >= 64)
        fail(ErrorKind::Stabilization, "invariant subgroup: shift tidying did not stabilize");
      V = cos_tighten(cos_intersect(V, tau_preimage(V)));
    }
    int rv = shift_bound(V);
    for (int r = 0; r < rv; ++r)
      if (!cos_equal(image_subgroup(V, shift_conjugate(rep.a0, r)), V))
        fail(ErrorKind::Stabilization,
             "invariant subgroup: image mismatch at shift " + std::to_string(r));
    return V;
  }
  fail(ErrorKind::Stabilization, "invariant subgroup: iteration exceeded round budget");
}

std::string rep_to_string(const Rep& rep) {
  std::ostringstream os;
  os << "rep p=" << rep.p << " d=" << rep.d << " ";
  switch (rep.state) {
    case Rep::State::Unchecked: os << "unchecked"; break;
    case Rep::State::Valid: os << "valid"; break;
    case Rep::State::Invalid: os << "invalid (" << rep.reason << ")"; break;
  }
  os << "\n" << bm_to_string(rep.a0);
  return os.str();
}

}  // namespace fpt
