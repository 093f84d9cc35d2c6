#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "fpt/error.hpp"
#include "fpt/group.hpp"
#include "fpt/rep.hpp"
#include "fpt/solver.hpp"
#include "helpers.hpp"

using namespace fpt;
using fpt_test::Rng;
using fpt_test::elem_mat;
using fpt_test::single_block;
using fpt_test::throws_kind;

namespace {

Rep e2_rep() { return validated_rep(2, 2, single_block(2, 2, 1, 0, elem_mat(2, 2, 0, 1))); }

Rep above_diag_rep() { return validated_rep(2, 2, single_block(2, 2, 0, 1, elem_mat(2, 2, 0, 1))); }

Rep trivial_rep(u32 p, int d) { return validated_rep(p, d, bm_zero(p, d)); }

SeriesVector random_poly(Rng& rng, u32 p, int d, int lo, int hi) {
  SeriesVector z = series_zero(p, d);
  for (int deg = lo; deg <= hi; ++deg) {
    FpVec v(d, 0);
    for (int c = 0; c < d; ++c) v[c] = rng.below(p);
    if (!vec_is_zero(v)) series_add_to(z, deg, v);
  }
  return z;
}

SDElement random_element(Rng& rng, const Rep& rep) {
  return sd_make(rep, random_poly(rng, rep.p, rep.d, -2, 6), random_poly(rng, rep.p, 1, -2, 6));
}

}  // namespace

TEST_CASE("sd_mul with the identity and inside the normal part") {
  Rep rep = e2_rep();
  Rng rng(71);
  for (int t = 0; t < 10; ++t) {
    SDElement x = random_element(rng, rep);
    CHECK(sd_eq_mod(sd_mul(x, sd_identity(rep)), x, 12));
    CHECK(sd_eq_mod(sd_mul(sd_identity(rep), x), x, 12));
    SeriesVector z1 = random_poly(rng, 2, 2, 0, 5);
    SeriesVector z2 = random_poly(rng, 2, 2, 0, 5);
    SDElement a = sd_make(rep, z1, series_zero(2, 1));
    SDElement b = sd_make(rep, z2, series_zero(2, 1));
    SDElement ab = sd_mul(a, b);
    CHECK(series_eq(ab.z, series_add(z1, z2)));
    CHECK(series_known_zero(ab.f));
  }
}

TEST_CASE("twist conjugation acts as phi") {
  Rep rep = e2_rep();
  Rng rng(72);
  for (int t = 0; t < 10; ++t) {
    SeriesVector f = random_poly(rng, 2, 1, -1, 4);
    SeriesVector z = random_poly(rng, 2, 2, -1, 4);
    SDElement tw = sd_make(rep, series_zero(2, 2), f);
    SDElement nz = sd_make(rep, z, series_zero(2, 1));
    SDElement c = sd_mul(sd_mul(tw, nz), sd_inv(tw));
    CHECK(series_eq(c.z, phi_apply(rep, f, z)));
    CHECK(series_known_zero(c.f));
  }
}

TEST_CASE("sd_inv inverts") {
  Rep rep = e2_rep();
  CHECK(sd_is_identity(sd_inv(sd_identity(rep))));
  SeriesVector z = unit_series(2, 2, 1, 3);
  SDElement nz = sd_make(rep, z, series_zero(2, 1));
  CHECK(series_eq(sd_inv(nz).z, series_neg(z)));
  Rng rng(73);
  for (int t = 0; t < 20; ++t) {
    SDElement x = random_element(rng, rep);
    CHECK(sd_is_identity(sd_mul(x, sd_inv(x))));
    CHECK(sd_is_identity(sd_mul(sd_inv(x), x)));
  }
}

TEST_CASE("group axioms on random triples") {
  Rep rep = e2_rep();
  Rng rng(74);
  for (int t = 0; t < 15; ++t) {
    SDElement x = random_element(rng, rep);
    SDElement y = random_element(rng, rep);
    SDElement z = random_element(rng, rep);
    CHECK(sd_eq_mod(sd_mul(sd_mul(x, y), z), sd_mul(x, sd_mul(y, z)), 10));
  }
}

TEST_CASE("sd_commutator basics") {
  Rep rep = e2_rep();
  Rng rng(75);
  for (int t = 0; t < 10; ++t) {
    SDElement x = random_element(rng, rep);
    CHECK(sd_is_identity(sd_commutator(x, x)));
    SDElement a = sd_make(rep, random_poly(rng, 2, 2, 0, 5), series_zero(2, 1));
    SDElement b = sd_make(rep, random_poly(rng, 2, 2, 0, 5), series_zero(2, 1));
    CHECK(sd_is_identity(sd_commutator(a, b)));
    SeriesVector f = random_poly(rng, 2, 1, 0, 4);
    SeriesVector z = random_poly(rng, 2, 2, 0, 4);
    SDElement c = sd_commutator(sd_make(rep, series_zero(2, 2), f),
                                sd_make(rep, z, series_zero(2, 1)));
    CHECK(series_eq(c.z, series_sub(phi_apply(rep, f, z), z)));
    CHECK(series_known_zero(c.f));
  }
}

TEST_CASE("sd operations reject mixed reps") {
  Rep r1 = e2_rep();
  Rep r2 = e2_rep();
  CHECK(throws_kind([&] { sd_mul(sd_identity(r1), sd_identity(r2)); }, ErrorKind::Mismatch));
  CHECK(throws_kind([&] { sd_make(r1, series_zero(2, 1), series_zero(2, 1)); },
                    ErrorKind::Mismatch));
}

TEST_CASE("contraction_auto is a contractive automorphism") {
  Rep rep = e2_rep();
  CHECK(sd_is_identity(contraction_auto(sd_identity(rep))));
  SDElement e1 = sd_make(rep, unit_series(2, 2, 0, 0), series_zero(2, 1));
  CHECK(series_eq(contraction_auto(e1).z, unit_series(2, 2, 0, 1)));
  Rng rng(76);
  for (int t = 0; t < 15; ++t) {
    SDElement x = random_element(rng, rep);
    SDElement y = random_element(rng, rep);
    CHECK(sd_eq_mod(contraction_auto(sd_mul(x, y)),
                    sd_mul(contraction_auto(x), contraction_auto(y)), 10));
  }
  SDElement x = sd_make(rep, unit_series(2, 2, 1, -3), unit_series(2, 1, 0, -2));
  int zlo = lo_bound(x.z), flo = lo_bound(x.f);
  for (int it = 0; it < 20; ++it) {
    x = contraction_auto(x);
    CHECK(lo_bound(x.z) == zlo + 1);
    CHECK(lo_bound(x.f) == flo + 1);
    zlo = lo_bound(x.z);
    flo = lo_bound(x.f);
  }
}

TEST_CASE("central_certificate accepts every vector of the trivial rep") {
  Rep rep = trivial_rep(3, 2);
  Rng rng(77);
  for (int t = 0; t < 5; ++t) {
    SeriesVector xi = random_poly(rng, 3, 2, -2, 4);
    if (series_known_zero(xi)) continue;
    CentralReport rp = central_certificate(rep, xi);
    CHECK(rp.central);
  }
}

TEST_CASE("central_certificate on the lower-triangular model") {
  Rep rep = e2_rep();
  CentralReport good = central_certificate(rep, unit_series(2, 2, 0, 0));
  CHECK(good.central);
  CHECK(good.checked == 17);  // twists -4..4, lattice units j < 4
  CentralReport bad = central_certificate(rep, unit_series(2, 2, 1, 0));
  CHECK(!bad.central);
  CHECK(bad.witness == "(0, t^0)");
  CHECK(bad.checked == 5);
}

TEST_CASE("central_certificate rejects a zero vector") {
  CHECK(throws_kind([&] { central_certificate(e2_rep(), series_zero(2, 2)); },
                    ErrorKind::Mismatch));
}

TEST_CASE("solver outputs are central") {
  std::vector<Rep> reps;
  reps.push_back(trivial_rep(2, 2));
  reps.push_back(e2_rep());
  reps.push_back(above_diag_rep());
  reps.push_back(validated_rep(2, 2, single_block(2, 2, -1, 0, elem_mat(2, 2, 0, 1))));
  for (const Rep& rep : reps) {
    FixedVectorResult res = solve(rep);
    CentralReport rp = central_certificate(rep, res.xi);
    CHECK(rp.central);
  }
}

TEST_CASE("nilpotency_class of the trivial rep is 1") {
  for (int n : {4, 16}) {
    ClassReport rp = nilpotency_class(trivial_rep(2, 2), n, 6);
    CHECK(rp.bounded);
    CHECK(rp.k == 1);
    CHECK(rp.layer_dims == std::vector<int>{0});
    CHECK(rp.summary == "class <= 1 at precision " + std::to_string(n));
  }
}

TEST_CASE("nilpotency_class of the lower-triangular model is exactly 2") {
  ClassReport rp = nilpotency_class(e2_rep(), 16, 6);
  CHECK(rp.bounded);
  CHECK(rp.k == 2);
  CHECK(rp.layer_dims == std::vector<int>{15, 0});
  CHECK(rp.summary == "class <= 2 at precision 16");
}

TEST_CASE("nilpotency_class of the above-diagonal model is 2") {
  ClassReport rp = nilpotency_class(above_diag_rep(), 16, 6);
  CHECK(rp.bounded);
  CHECK(rp.k == 2);
  CHECK(rp.layer_dims.back() == 0);
}

TEST_CASE("nilpotency_class reports an exceeded class budget") {
  ClassReport rp = nilpotency_class(e2_rep(), 16, 1);
  CHECK(!rp.bounded);
  CHECK(rp.k == 1);
  CHECK(rp.summary == "class >= 2 at precision 16");
}

TEST_CASE("nilpotency_class sees persistent layers on a crafted generator") {
  Rep rep;
  rep.p = 2;
  rep.d = 2;
  rep.a0 = bm_zero(2, 2);
  bm_set(rep.a0, 1, 0, elem_mat(2, 2, 0, 1));
  bm_set(rep.a0, 2, 1, elem_mat(2, 2, 1, 0));
  rep.state = Rep::State::Valid;
  ClassReport rp = nilpotency_class(rep, 8, 5);
  CHECK(!rp.bounded);
  CHECK(rp.summary == "class >= 6 at precision 8");
  for (int dim : rp.layer_dims) CHECK(dim > 0);
}

TEST_CASE("nilpotency_class refuses non-lattice-preserving generators") {
  Rep rep = validated_rep(2, 2, single_block(2, 2, -1, 0, elem_mat(2, 2, 0, 1)));
  CHECK(throws_kind([&] { nilpotency_class(rep, 8, 4); }, ErrorKind::Mismatch));
  CHECK(throws_kind([&] { nilpotency_class(e2_rep(), 0, 4); }, ErrorKind::Mismatch));
}

TEST_CASE("every valid one-dimensional rep over small support has class at most 2") {
  // Degenerate length-2 case: sweep all scalar generators supported in a
  // fixed five-key window.
  std::vector<BlockKey> keys = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 1}};
  int valid_count = 0;
  for (int mask = 0; mask < 32; ++mask) {
    BlockMatrix a0 = bm_zero(2, 1);
    for (size_t i = 0; i < keys.size(); ++i)
      if (mask & (1 << i)) bm_set(a0, keys[i].i, keys[i].j, MatFp::identity(2, 1));
    Rep rep = make_rep(2, 1, std::move(a0));
    if (!validate(rep).valid) continue;
    ++valid_count;
    ClassReport rp = nilpotency_class(rep, 8, 4);
    CHECK(rp.bounded);
    CHECK(rp.k <= 2);
  }
  CHECK(valid_count >= 1);
}
