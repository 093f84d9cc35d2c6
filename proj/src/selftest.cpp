// Acceptance suite behind `selftest` and the standalone acceptance binary.
// Every check is exact (no tolerances) and runs on fixed seeds, so the
// printed report is byte-stable from run to run.
#include "fpt/selftest.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

#include "fpt/endo.hpp"
#include "fpt/error.hpp"
#include "fpt/gen.hpp"
#include "fpt/group.hpp"
#include "fpt/solver.hpp"

namespace fpt {

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(u64 seed) : eng(seed) {}
  u32 below(u32 n) {
    u64 lim = ~u64{0} - ~u64{0} % n;
    u64 v;
    do {
      v = eng();
    } while (v >= lim);
    return static_cast<u32>(v % n);
  }
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<u32>(hi - lo + 1))); }
};

u32 pick_p(Rng& rng) {
  const u32 ps[] = {2, 3, 5};
  return ps[rng.below(3)];
}

// Exact vector with coefficients drawn on every degree in [lo, hi].
SeriesVector random_series(Rng& rng, u32 p, int d, int lo, int hi) {
  SeriesVector z = series_zero(p, d);
  for (int n = lo; n <= hi; ++n) {
    FpVec v(static_cast<size_t>(d), 0);
    for (u32& x : v) x = rng.below(p);
    series_set(z, n, std::move(v));
  }
  return z;
}

// Finite-support block matrix with `count` random blocks in [-span, span]^2,
// never zero (composition certificates need a nonzero factor).
BlockMatrix random_blocks(Rng& rng, u32 p, int d, int count, int span) {
  BlockMatrix a = bm_zero(p, d);
  for (int t = 0; t < count; ++t) {
    MatFp m(p, d, d);
    for (u32& v : m.a) v = rng.below(p);
    bm_set(a, rng.range(-span, span), rng.range(-span, span), std::move(m));
  }
  if (a.is_zero()) {
    MatFp m(p, d, d);
    m.at(0, 0) = 1;
    bm_set(a, 0, 0, std::move(m));
  }
  return a;
}

CompactOpenSubgroup random_tidy(Rng& rng, u32 p, int d, int K) {
  std::vector<SeriesVector> gens;
  int n = rng.range(1, d + 1);
  for (int i = 0; i < n; ++i) gens.push_back(random_series(rng, p, d, -(K - 1), K - 1));
  return from_generators(p, d, gens, K);
}

// Nonzero exact tail supported in [n, n + 4]; added above a truncation point
// it must never show through below the claimed output precision.
SeriesVector random_tail(Rng& rng, u32 p, int d, int n) {
  SeriesVector w = random_series(rng, p, d, n, n + 4);
  if (series_known_zero(w)) {
    FpVec v(static_cast<size_t>(d), 0);
    v[0] = 1;
    series_set(w, n, std::move(v));
  }
  return w;
}

// Exact equality against an exact claim, coefficientwise below prec against
// a truncated one.
bool agree_below(const SeriesVector& full, const SeriesVector& claim) {
  return claim.exact() ? series_eq(full, claim) : series_eq_mod(full, claim, *claim.prec);
}

const std::vector<Rep>& rep_pool() {
  static const std::vector<Rep> pool = [] {
    std::vector<Rep> v;
    for (const NamedInstance& inst : shipped_instances()) v.push_back(inst.rep);
    return v;
  }();
  return pool;
}

SolveOptions suite_options() {
  SolveOptions opt;
  opt.precision = 32;
  opt.oracle_lo = -8;
  opt.oracle_hi = 8;
  return opt;
}

// Solve results are shared between the solver and nilpotency checks.
const FixedVectorResult& solved(const NamedInstance& inst) {
  static std::map<std::string, FixedVectorResult> cache;
  auto it = cache.find(inst.name);
  if (it == cache.end()) it = cache.emplace(inst.name, solve(inst.rep, suite_options())).first;
  return it->second;
}

// 1. Evaluating a composition of finite block maps agrees with evaluating
// the single product map, exactly, and the lazy composition exposes the
// product's blocks.
bool check_composition(std::string& msg) {
  Rng rng(101);
  for (int t = 0; t < 200; ++t) {
    u32 p = pick_p(rng);
    int d = rng.range(1, 3);
    BlockMatrix a = random_blocks(rng, p, d, rng.range(1, 4), 4);
    BlockMatrix b = random_blocks(rng, p, d, rng.range(1, 4), 4);
    BlockMatrix ab = bm_compose(a, b);
    SeriesVector z = random_series(rng, p, d, -8, 8);
    SeriesVector nested = bm_apply(a, bm_apply(b, z));
    if (!series_eq(nested, bm_apply(ab, z))) {
      msg = "nested evaluation differs from product evaluation on pair " + std::to_string(t);
      return false;
    }
    LazyEndo lab = lazy_compose(endo_from_blocks(a), bm_delta_min(a), endo_from_blocks(b));
    if (!series_eq_mod(lab.eval(z, 9), nested, 9)) {
      msg = "lazy composition differs from the product below degree 9 on pair " + std::to_string(t);
      return false;
    }
    if (t % 10 == 0 && !(lazy_window(lab, -8, 8, -8, 8) == bm_window(ab, -8, 8, -8, 8))) {
      msg = "lazy block window differs from the product blocks on pair " + std::to_string(t);
      return false;
    }
  }
  msg = "200 random pairs, p in {2,3,5}, d <= 3: evaluations agree exactly on [-8, 8]";
  return true;
}

// Exhibits p^d pairwise distinct cosets of shift(V) in V by enumerating the
// complement basis combinations; log_index bounds the count from above.
bool verify_index(const CompactOpenSubgroup& V) {
  CompactOpenSubgroup tV = tau_image(V);
  if (!cos_contains(V, tV)) return false;
  if (log_index(V, tV) != V.d) return false;
  TidyBasis tb = complement_basis(V);
  u64 total = 1;
  for (int k = 0; k < V.d; ++k) total *= V.p;
  for (u64 code = 1; code < total; ++code) {
    u64 c = code;
    SeriesVector x = series_zero(V.p, V.d);
    for (int k = 0; k < V.d; ++k) {
      u32 ck = static_cast<u32>(c % V.p);
      c /= V.p;
      if (ck) x = series_add(x, series_scale(tb.b[static_cast<size_t>(k)], ck));
    }
    if (!cos_member(V, x) || cos_member(tV, x)) return false;
  }
  return true;
}

// 2. [V : shift(V)] = p^d for the standard lattice and for random tidy V.
bool check_index_law(std::string& msg) {
  for (u32 p : {2u, 3u})
    for (int d = 1; d <= 3; ++d)
      if (!verify_index(standard_lattice(p, d))) {
        msg = "standard lattice p = " + std::to_string(p) + ", d = " + std::to_string(d);
        return false;
      }
  Rng rng(202);
  for (int t = 0; t < 20; ++t) {
    u32 p = rng.below(2) ? 3 : 2;
    int d = rng.range(1, 3);
    CompactOpenSubgroup V = random_tidy(rng, p, d, rng.range(1, 3));
    if (!verify_index(V)) {
      msg = "random tidy subgroup " + std::to_string(t) + " (p = " + std::to_string(p) +
            ", d = " + std::to_string(d) + ")";
      return false;
    }
  }
  msg = "index p^d for 6 standard lattices and 20 random tidy subgroups, cosets enumerated";
  return true;
}

// 3. The basis-change automorphism carries the standard lattice into V,
// undoes itself mod t^32, and commutes with the degree shift.
bool check_change_of_basis(std::string& msg) {
  Rng rng(303);
  for (int t = 0; t < 20; ++t) {
    u32 p = pick_p(rng);
    int d = rng.range(1, 3);
    int K = rng.range(1, 3);
    CompactOpenSubgroup V = random_tidy(rng, p, d, K);
    BasisChange bc = change_basis(V);
    for (int v = 0; v < 50; ++v) {
      SeriesVector z = random_series(rng, p, d, 0, K + 4);
      if (series_known_zero(z)) series_set(z, 0, random_tail(rng, p, d, 0).c.begin()->second);
      SeriesVector w = bc.fwd.eval(z, 1);
      if (!w.exact()) {
        msg = "forward image of an exact lattice vector came back truncated";
        return false;
      }
      if (!cos_member(V, w)) {
        msg = "forward image left V on subgroup " + std::to_string(t);
        return false;
      }
      if (v < 5) {
        if (!series_eq_mod(bc.inv.eval(w, 32), z, 32)) {
          msg = "inverse does not undo the basis change mod t^32 on subgroup " + std::to_string(t);
          return false;
        }
        if (!series_eq(bc.fwd.eval(series_shift(z, 1), 1), series_shift(w, 1))) {
          msg = "basis change does not commute with the shift on subgroup " + std::to_string(t);
          return false;
        }
      }
    }
  }
  msg = "20 subgroups, 50 lattice vectors each land in V; inverse and shift identities hold mod t^32";
  return true;
}

// 4. Twisting the scalar argument by t^r conjugates every block by r.
bool check_shift_law(std::string& msg) {
  Rng rng(404);
  const auto& pool = rep_pool();
  for (int t = 0; t < 50; ++t) {
    const Rep& rep = pool[rng.below(static_cast<u32>(pool.size()))];
    SeriesVector f = random_series(rng, rep.p, 1, -3, 3);
    int r = rng.range(-4, 4);
    BlockMatrix lhs = phi_minus_id(rep, series_shift(f, r));
    BlockMatrix rhs = shift_conjugate(phi_minus_id(rep, f), r);
    if (!(lhs == rhs)) {
      msg = "triple " + std::to_string(t) + " (r = " + std::to_string(r) + ") differs";
      return false;
    }
  }
  msg = "50 random (rep, f, r): blocks of the t^r twist are the r-conjugated blocks";
  return true;
}

// 5. Expansion over a module basis is a bijection on coefficient tables:
// rebuilding a vector from random coefficients through level 15 and
// re-expanding it returns the same table with zero remainder.
bool check_basis_expansion(std::string& msg) {
  Rng rng(505);
  for (int t = 0; t < 100; ++t) {
    u32 p = pick_p(rng);
    int d = rng.range(1, 3);
    CompactOpenSubgroup V = random_tidy(rng, p, d, rng.range(1, 2));
    TidyBasis tb = complement_basis(V);
    std::vector<FpVec> n(16, FpVec(static_cast<size_t>(d), 0));
    bool any = false;
    for (auto& row : n)
      for (u32& x : row) {
        x = rng.below(p);
        any = any || x;
      }
    if (!any) n[rng.below(16)][rng.below(static_cast<u32>(d))] = 1 + rng.below(p - 1);
    SeriesVector z = series_zero(p, d);
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < d; ++k)
        if (n[static_cast<size_t>(j)][static_cast<size_t>(k)])
          z = series_add(z, series_scale(series_shift(tb.b[static_cast<size_t>(k)], j),
                                         n[static_cast<size_t>(j)][static_cast<size_t>(k)]));
    Expansion e = basis_expand(tb, z, 16);
    if (!e.exact || !series_known_zero(e.remainder)) {
      msg = "expansion of a level-15 combination did not terminate (trial " + std::to_string(t) + ")";
      return false;
    }
    for (const auto& kv : e.coeff)
      if (kv.first < 0 || kv.first > 15) {
        msg = "expansion reported a layer outside [0, 15]";
        return false;
      }
    for (int j = 0; j < 16; ++j) {
      FpVec got(static_cast<size_t>(d), 0);
      auto it = e.coeff.find(j);
      if (it != e.coeff.end()) got = it->second;
      if (got != n[static_cast<size_t>(j)]) {
        msg = "recovered coefficients differ at layer " + std::to_string(j) + " (trial " +
              std::to_string(t) + ")";
        return false;
      }
    }
    if (!series_eq(expansion_value(tb, e), z)) {
      msg = "expansion value differs from the input (trial " + std::to_string(t) + ")";
      return false;
    }
  }
  msg = "100 coefficient tables through level 16: rebuild then expand is the identity, remainder 0";
  return true;
}

// Independent residual sweep: every shift conjugate whose support can meet
// the known part of xi must annihilate it.
bool residuals_vanish(const Rep& rep, const SeriesVector& xi) {
  if (rep.a0.is_zero()) return true;
  BlockSupport s = bm_support(rep.a0);
  int lo = lo_bound(xi);
  int hi = xi.exact() ? (xi.c.empty() ? lo : xi.c.rbegin()->first) : *xi.prec;
  for (int r = lo - s.j_max; r <= hi - s.j_min; ++r)
    if (!series_known_zero(bm_apply(shift_conjugate(rep.a0, r), xi))) return false;
  return true;
}

// 6. On the shipped suite the solver returns a nonzero fixed vector whose
// residuals vanish, and the window oracle agrees one exists in [-8, 8).
bool check_solver_vs_oracle(std::string& msg) {
  const auto& suite = shipped_instances();
  if (suite.size() < 12) {
    msg = "instance suite shrank below 12";
    return false;
  }
  for (const NamedInstance& inst : suite) {
    const FixedVectorResult& res = solved(inst);
    if (series_known_zero(res.xi)) {
      msg = inst.name + ": returned vector is zero";
      return false;
    }
    if (!res.oracle_checked || !res.oracle_found || !res.oracle_pass) {
      msg = inst.name + ": oracle disagreement on [-8, 8)";
      return false;
    }
    for (const ResidualEntry& e : res.residuals)
      if (!e.pass) {
        msg = inst.name + ": residual at r = " + std::to_string(e.r) + " failed";
        return false;
      }
    if (!residuals_vanish(inst.rep, res.xi)) {
      msg = inst.name + ": independent residual sweep found a nonzero";
      return false;
    }
  }
  msg = std::to_string(suite.size()) +
        " instances: nonzero xi, residuals vanish exactly or mod t^32, oracle concurs on [-8, 8)";
  return true;
}

// 7. For lower triangular generators, every product of d shift conjugates
// has zero diagonal blocks throughout |i| <= 8.
bool check_diagonal_products(std::string& msg) {
  int used = 0;
  u64 products = 0;
  for (const NamedInstance& inst : shipped_instances()) {
    const BlockMatrix& a0 = inst.rep.a0;
    if (a0.is_zero() || !bm_lower_triangular(a0)) continue;
    ++used;
    const int d = inst.rep.d;
    std::vector<BlockMatrix> gens;
    for (int r = -8; r <= 8; ++r) gens.push_back(shift_conjugate(a0, r));
    std::vector<size_t> idx(static_cast<size_t>(d), 0);
    for (;;) {
      BlockMatrix w = gens[idx[0]];
      for (int k = 1; k < d && !w.is_zero(); ++k) w = bm_compose(w, gens[idx[static_cast<size_t>(k)]]);
      ++products;
      for (const auto& kv : w.blocks)  // stored blocks are nonzero by invariant
        if (kv.first.i == kv.first.j && kv.first.i >= -8 && kv.first.i <= 8) {
          msg = inst.name + ": nonzero diagonal block at i = " + std::to_string(kv.first.i);
          return false;
        }
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == gens.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  if (used == 0) {
    msg = "no lower triangular instance in the suite";
    return false;
  }
  msg = std::to_string(used) + " lower triangular instances, " + std::to_string(products) +
        " length-d products over shifts [-8, 8]: all diagonal blocks in |i| <= 8 vanish";
  return true;
}

// 8. Every shipped instance is nilpotent of class at most d + 1 at precision
// 16 (the one-block subdiagonal instance exactly 2), and every solver output
// is certified central.
bool check_nilpotency(std::string& msg) {
  bool saw_e2 = false;
  for (const NamedInstance& inst : shipped_instances()) {
    const Rep& rep = inst.rep;
    // Generators reaching negative rows are conjugated back into the lattice
    // first; the filtration needs lattice vectors to stay lattice vectors.
    Rep use = rep;
    BlockSupport s = bm_support(rep.a0);
    if (!s.empty && s.i_min < 0) use = validated_rep(rep.p, rep.d, shift_conjugate(rep.a0, -s.i_min));
    ClassReport cr = nilpotency_class(use, 16, rep.d + 1);
    if (!cr.bounded || cr.k > rep.d + 1) {
      msg = inst.name + ": " + cr.summary;
      return false;
    }
    if (inst.name == "e2") {
      saw_e2 = true;
      if (cr.k != 2) {
        msg = "e2 class is " + std::to_string(cr.k) + ", expected exactly 2";
        return false;
      }
    }
    CentralReport cc = central_certificate(rep, solved(inst).xi);
    if (!cc.central) {
      msg = inst.name + ": solver output not central, witness " + cc.witness;
      return false;
    }
  }
  if (!saw_e2) {
    msg = "e2 missing from the suite";
    return false;
  }
  msg = "all classes bounded by d + 1 at precision 16, e2 exactly 2; every solver output central";
  return true;
}

// 9. Tail perturbation: changing an input only at or above its truncation
// point never changes the output below the claimed output precision.
bool check_precision(std::string& msg) {
  Rng rng(909);
  const auto& pool = rep_pool();

  for (int t = 0; t < 200; ++t) {
    u32 p = pick_p(rng);
    int d = rng.range(1, 3);
    BlockMatrix a = random_blocks(rng, p, d, rng.range(1, 4), 3);
    int cut = rng.range(0, 8);
    SeriesVector z = random_series(rng, p, d, -4, cut + 4);
    SeriesVector z2 = series_add(z, random_tail(rng, p, d, cut));
    SeriesVector claim = bm_apply(a, series_truncate(z, cut));
    if (!agree_below(bm_apply(a, z), claim) || !agree_below(bm_apply(a, z2), claim)) {
      msg = "bm_apply leaked a tail below its claimed precision (trial " + std::to_string(t) + ")";
      return false;
    }
  }

  for (int t = 0; t < 200; ++t) {
    const Rep& rep = pool[rng.below(static_cast<u32>(pool.size()))];
    SeriesVector f = random_series(rng, rep.p, 1, -3, 6);
    SeriesVector z = random_series(rng, rep.p, rep.d, -3, 8);
    int cut = rng.range(0, 6);
    SeriesVector claim, full, pert;
    if (t % 2 == 0) {
      claim = phi_apply(rep, series_truncate(f, cut), z);
      full = phi_apply(rep, f, z);
      pert = phi_apply(rep, series_add(f, random_tail(rng, rep.p, 1, cut)), z);
    } else {
      claim = phi_apply(rep, f, series_truncate(z, cut));
      full = phi_apply(rep, f, z);
      pert = phi_apply(rep, f, series_add(z, random_tail(rng, rep.p, rep.d, cut)));
    }
    if (!agree_below(full, claim) || !agree_below(pert, claim)) {
      msg = "phi_apply leaked a tail below its claimed precision (trial " + std::to_string(t) + ")";
      return false;
    }
  }

  for (int t = 0; t < 200; ++t) {
    const Rep& rep = pool[rng.below(static_cast<u32>(pool.size()))];
    const u32 p = rep.p;
    const int d = rep.d;
    SeriesVector comp[4] = {random_series(rng, p, d, -3, 8), random_series(rng, p, 1, -3, 8),
                            random_series(rng, p, d, -3, 8), random_series(rng, p, 1, -3, 8)};
    const int dims[4] = {d, 1, d, 1};
    int cut = rng.range(0, 6);
    size_t which = static_cast<size_t>(t % 4);
    SeriesVector full[4], pert[4], trunc[4];
    for (size_t k = 0; k < 4; ++k) full[k] = pert[k] = trunc[k] = comp[k];
    pert[which] = series_add(comp[which], random_tail(rng, p, dims[which], cut));
    trunc[which] = series_truncate(comp[which], cut);
    auto mul = [&rep](SeriesVector* c) {
      return sd_mul(sd_make(rep, c[0], c[1]), sd_make(rep, c[2], c[3]));
    };
    SDElement claim = mul(trunc), a = mul(full), b = mul(pert);
    if (!agree_below(a.z, claim.z) || !agree_below(a.f, claim.f) ||
        !agree_below(b.z, claim.z) || !agree_below(b.f, claim.f)) {
      msg = "sd_mul leaked a tail below its claimed precision (trial " + std::to_string(t) + ")";
      return false;
    }
  }

  msg = "200 trials each for bm_apply, phi_apply, sd_mul: nothing below the claimed precision moved";
  return true;
}

}  // namespace

int run_selftest(std::ostream& out) {
  struct CheckEntry {
    const char* name;
    bool (*fn)(std::string&);
  };
  static const CheckEntry checks[] = {
      {"composition-product", check_composition},
      {"lattice-shift-index", check_index_law},
      {"change-of-basis", check_change_of_basis},
      {"twist-shift-law", check_shift_law},
      {"basis-expansion", check_basis_expansion},
      {"solver-vs-oracle", check_solver_vs_oracle},
      {"diagonal-products", check_diagonal_products},
      {"nilpotency-bound", check_nilpotency},
      {"precision-soundness", check_precision},
  };
  int failures = 0;
  for (const CheckEntry& c : checks) {
    std::string msg;
    bool ok = false;
    try {
      ok = c.fn(msg);
    } catch (const std::exception& e) {
      msg = e.what();
    }
    out << (ok ? "pass " : "FAIL ") << c.name << ": " << msg << "\n";
    if (!ok) ++failures;
  }
  if (failures == 0)
    out << "all 9 checks passed\n";
  else
    out << failures << " of 9 checks failed\n";
  return failures;
}

}  // namespace fpt
