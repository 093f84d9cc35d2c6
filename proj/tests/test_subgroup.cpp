#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fpt/subgroup.hpp"
#include "helpers.hpp"

using namespace fpt;
using fpt_test::Rng;

namespace {

SeriesVector mono(u32 p, int d, int coord, int deg) { return unit_series(p, d, coord, deg); }

CompactOpenSubgroup random_subgroup(Rng& rng, u32 p, int d, int K) {
  std::vector<SeriesVector> span;
  int n = rng.range(1, 2 * K * d);
  for (int i = 0; i < n; ++i) span.push_back(fpt_test::random_series(rng, p, d, -K, K - 1));
  return subgroup_from_subspace(p, d, K, span);
}

}  // namespace

using fpt_test::random_tidy;

TEST_CASE("quotient coordinates round trip") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    u32 p = (t % 2) ? 3 : 2;
    int d = rng.range(1, 3), K = rng.range(1, 3);
    SeriesVector z = fpt_test::random_series(rng, p, d, -K, K - 1);
    FpVec coords = q_coords(z, K, p, d);
    CHECK(static_cast<int>(coords.size()) == 2 * K * d);
    CHECK(series_eq(q_lift(coords, K, p, d), z));
  }
  // Degrees at or above K are quotiented away; support below -K is an error.
  SeriesVector z = mono(2, 1, 0, 5);
  CHECK(vec_is_zero(q_coords(z, 2, 2, 1)));
  CHECK(fpt_test::throws_kind([&] { q_coords(mono(2, 1, 0, -3), 2, 2, 1); },
                              ErrorKind::Membership));
  CHECK(fpt_test::throws_kind([&] { q_coords(series_zero_mod(2, 1, 1), 2, 2, 1); },
                              ErrorKind::Precision));
}

TEST_CASE("standard and shifted lattices") {
  for (u32 p : {2u, 3u}) {
    for (int r : {-2, 0, 3}) {
      CompactOpenSubgroup v = shifted_lattice(p, 2, r);
      for (int n = -4; n <= 5; ++n)
        for (int c = 0; c < 2; ++c) CHECK(cos_member(v, mono(p, 2, c, n)) == (n >= r));
      CHECK(is_tidy(v));
    }
    CHECK(cos_equal(shifted_lattice(p, 2, 0), standard_lattice(p, 2)));
    CHECK(cos_equal(tau_image(standard_lattice(p, 2)), shifted_lattice(p, 2, 1)));
    CHECK(cos_equal(tau_preimage(standard_lattice(p, 2)), shifted_lattice(p, 2, -1)));
    CHECK(log_index(standard_lattice(p, 2), shifted_lattice(p, 2, 2)) == 4);
    CHECK(log_index(shifted_lattice(p, 2, -1), shifted_lattice(p, 2, 2)) == 6);
    CHECK(fpt_test::throws_kind(
        [&] { log_index(shifted_lattice(p, 2, 2), standard_lattice(p, 2)); },
        ErrorKind::Membership));
  }
}

TEST_CASE("all depth-1 pullbacks over F_2, d = 1") {
  // Q_1 has coordinates (degree -1, degree 0). Expected tidiness computed by
  // hand for each subspace.
  struct Case {
    std::vector<FpVec> rows;
    bool tidy;
  };
  std::vector<Case> cases = {
      {{}, true},              // shift(lat)
      {{{1, 0}}, false},       // span t^-1
      {{{0, 1}}, true},        // lat
      {{{1, 1}}, false},       // span t^-1 + 1
      {{{1, 0}, {0, 1}}, true} // shift^{-1}(lat)
  };
  for (const auto& cs : cases) {
    CompactOpenSubgroup v =
        subgroup_from_coords(2, 1, 1, rows_from_vecs(2, 2, cs.rows));
    CHECK(is_tidy(v) == cs.tidy);
    // Membership matches the class condition, ignoring tails.
    for (u32 a = 0; a < 2; ++a)
      for (u32 b = 0; b < 2; ++b) {
        SeriesVector z = series_zero(2, 1);
        series_set(z, -1, FpVec{a});
        series_set(z, 0, FpVec{b});
        series_set(z, 2, FpVec{1});  // tail inside shift(lat)
        FpVec cls{a, b};
        bool want = false;
        // brute force span of the rows
        for (u32 m = 0; m < (1u << cs.rows.size()); ++m) {
          FpVec acc{0, 0};
          for (size_t i = 0; i < cs.rows.size(); ++i)
            if (m & (1u << i)) acc = vec_add(acc, cs.rows[i], 2);
          if (acc == cls) want = true;
        }
        CHECK(cos_member(v, z) == want);
      }
  }
}

TEST_CASE("membership and index against exhaustive enumeration") {
  // All 16 classes of Q_2 for p = 2, d = 1: membership in a random subspace
  // pullback agrees with brute-force enumeration of the row span.
  Rng rng(38);
  for (int t = 0; t < 10; ++t) {
    CompactOpenSubgroup v = random_subgroup(rng, 2, 1, 2);
    int r = v.basis.rows;
    for (u32 code = 0; code < 16; ++code) {
      FpVec cls{code & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1};
      SeriesVector z = q_lift(cls, 2, 2, 1);
      series_set(z, 3, FpVec{1});  // tail below the quotient depth
      bool want = false;
      for (u32 m = 0; m < (1u << r) && !want; ++m) {
        FpVec acc(4, 0);
        for (int i = 0; i < r; ++i)
          if (m & (1u << i)) {
            FpVec row(v.basis.a.begin() + i * 4, v.basis.a.begin() + (i + 1) * 4);
            acc = vec_add(acc, row, 2);
          }
        want = acc == cls;
      }
      CHECK(cos_member(v, z) == want);
    }
  }

  // Index of the doubly shifted lattice by coset counting: the four
  // degree-(0,1) polynomials are pairwise inequivalent and cover everything.
  CompactOpenSubgroup lat = standard_lattice(2, 1);
  CompactOpenSubgroup t2 = tau_image(tau_image(lat));
  CHECK(log_index(lat, t2) == 2);
  std::vector<SeriesVector> reps;
  for (u32 a = 0; a < 2; ++a)
    for (u32 b = 0; b < 2; ++b) {
      SeriesVector z = series_zero(2, 1);
      series_set(z, 0, FpVec{a});
      series_set(z, 1, FpVec{b});
      reps.push_back(z);
    }
  for (size_t i = 0; i < reps.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      CHECK_FALSE(cos_member(t2, series_sub(reps[i], reps[j])));
  for (int s = 0; s < 20; ++s) {
    SeriesVector z = fpt_test::random_series(rng, 2, 1, 0, 4);
    int hits = 0;
    for (const SeriesVector& rep : reps)
      if (cos_member(t2, series_sub(z, rep))) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("module generated by vectors") {
  // d = 1: the module generated by t^-1 at depth 2 is shift^-1(lat).
  CompactOpenSubgroup v = from_generators(2, 1, {mono(2, 1, 0, -1)}, 2);
  CHECK(cos_equal(v, shifted_lattice(2, 1, -1)));

  // d = 2: module generated by (1,1).
  SeriesVector g = series_zero(2, 2);
  series_set(g, 0, FpVec{1, 1});
  CompactOpenSubgroup w = from_generators(2, 2, {g}, 2);
  CHECK(cos_member(w, g));
  CHECK(cos_member(w, series_shift(g, 1)));
  CHECK_FALSE(cos_member(w, mono(2, 2, 0, 0)));
  CHECK_FALSE(cos_member(w, mono(2, 2, 1, 1)));
  CHECK(cos_member(w, mono(2, 2, 0, 2)));  // inside shift^2(lat)
  CHECK(is_tidy(w));
  CHECK(log_index(w, tau_image(w)) == 2);

  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    u32 p = (t % 3 == 0) ? 2 : (t % 3 == 1) ? 3 : 5;
    int d = rng.range(1, 3);
    CompactOpenSubgroup v2 = random_tidy(rng, p, d, 3);
    CHECK(is_tidy(v2));
    CHECK(log_index(v2, tau_image(v2)) == d);
  }
}

TEST_CASE("shift image and preimage invert each other") {
  Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    u32 p = (t % 2) ? 2 : 3;
    int d = rng.range(1, 2);
    CompactOpenSubgroup v = random_subgroup(rng, p, d, 2);
    CHECK(cos_equal(tau_preimage(tau_image(v)), v));
    CHECK(cos_equal(tau_image(tau_preimage(v)), v));
    SeriesVector z = fpt_test::random_series(rng, p, d, -2, 2);
    CHECK(cos_member(tau_image(v), series_shift(z, 1)) == cos_member(v, z));
  }
}

TEST_CASE("containment, equality, intersection") {
  Rng rng(34);
  for (int t = 0; t < 20; ++t) {
    u32 p = (t % 2) ? 2 : 3;
    int d = rng.range(1, 2);
    CompactOpenSubgroup u = random_subgroup(rng, p, d, 2);
    CompactOpenSubgroup v = random_subgroup(rng, p, d, 2);
    CompactOpenSubgroup w = cos_intersect(u, v);
    CHECK(cos_contains(u, w));
    CHECK(cos_contains(v, w));
    // Membership oracle on a sample.
    for (int s = 0; s < 12; ++s) {
      SeriesVector z = fpt_test::random_series(rng, p, d, -2, 2);
      CHECK(cos_member(w, z) == (cos_member(u, z) && cos_member(v, z)));
    }
    CHECK(cos_contains(u, v) == cos_equal(cos_intersect(u, v), v));
    // Representation depth does not matter.
    CHECK(cos_equal(cos_embed(v, 4), v));
    CHECK(cos_equal(cos_tighten(cos_embed(v, 4)), v));
  }
  CHECK(cos_tighten(cos_embed(standard_lattice(3, 2), 3)).K == 1);
}

TEST_CASE("complement basis generates the subgroup") {
  // For the standard lattice the complement representatives are the units.
  TidyBasis tb = complement_basis(standard_lattice(3, 2));
  REQUIRE(tb.b.size() == 2);
  CHECK(series_eq(tb.b[0], mono(3, 2, 0, 0)));
  CHECK(series_eq(tb.b[1], mono(3, 2, 1, 0)));

  Rng rng(35);
  for (int t = 0; t < 15; ++t) {
    u32 p = (t % 2) ? 2 : 3;
    int d = rng.range(1, 3);
    CompactOpenSubgroup v = random_tidy(rng, p, d, 3);
    TidyBasis tb2 = complement_basis(v);
    REQUIRE(static_cast<int>(tb2.b.size()) == d);
    for (const SeriesVector& b : tb2.b) CHECK(cos_member(v, b));
    CHECK(cos_equal(from_generators(p, d, tb2.b, v.K), v));
  }

  // Non-tidy subgroups are rejected.
  CompactOpenSubgroup bad = subgroup_from_coords(2, 1, 1, rows_from_vecs(2, 2, {{1, 0}}));
  CHECK(fpt_test::throws_kind([&] { complement_basis(bad); }, ErrorKind::Membership));
}

TEST_CASE("layer_of") {
  CompactOpenSubgroup lat = standard_lattice(2, 2);
  CHECK(layer_of(lat, mono(2, 2, 0, 3)) == 3);
  SeriesVector z = series_add(mono(2, 2, 0, 3), mono(2, 2, 1, 5));
  CHECK(layer_of(lat, z) == 3);
  CHECK(layer_of(shifted_lattice(2, 2, -2), mono(2, 2, 0, 3)) == 5);

  SeriesVector g = series_zero(2, 2);
  series_set(g, 0, FpVec{1, 1});
  CompactOpenSubgroup w = from_generators(2, 2, {g}, 2);
  CHECK(layer_of(w, g) == 0);
  CHECK(layer_of(w, series_shift(g, 2)) == 2);
  CHECK(layer_of(w, mono(2, 2, 0, 2)) == 0);  // in shift^2(lat) part, not in shift(w)...

  CHECK(fpt_test::throws_kind([&] { layer_of(lat, series_zero(2, 2)); }, ErrorKind::Mismatch));
  CHECK(fpt_test::throws_kind([&] { layer_of(lat, series_zero_mod(2, 2, 5)); },
                              ErrorKind::Precision));
  CHECK(fpt_test::throws_kind([&] { layer_of(w, series_truncate(g, 1)); },
                              ErrorKind::Precision));
}

TEST_CASE("expansion round trip") {
  Rng rng(36);
  for (int t = 0; t < 15; ++t) {
    u32 p = (t % 2) ? 2 : 5;
    int d = rng.range(1, 3);
    CompactOpenSubgroup v = random_tidy(rng, p, d, 3);
    TidyBasis tb = complement_basis(v);
    // Random finite module combination of the basis.
    SeriesVector z = series_zero(p, d);
    for (int j = -2; j <= 4; ++j)
      for (int k = 0; k < d; ++k)
        z = series_add(z, series_scale(series_shift(tb.b[k], j), rng.below(p)));
    if (z.c.empty()) continue;
    Expansion e = basis_expand(tb, z, 30);
    CHECK(e.exact);
    CHECK(series_eq(expansion_value(tb, e), z));
    CHECK(e.j0 == layer_of(v, z));
    REQUIRE(!e.coeff.empty());
    CHECK(e.coeff.begin()->first == e.j0);

    // A truncation expands to a prefix of the same coefficients, and the
    // remainder sits in shift^next(V).
    SeriesVector zt = series_truncate(z, 4);
    Expansion et = basis_expand(tb, zt, 30);
    CHECK_FALSE(et.exact);
    for (const auto& [j, n] : et.coeff) CHECK(e.coeff.at(j) == n);
    CHECK(et.next + v.K <= 4);
    CompactOpenSubgroup w = v;
    for (int s = 0; s < et.next; ++s) w = tau_image(w);
    for (int s = 0; s > et.next; --s) w = tau_preimage(w);
    CHECK(cos_member(w, et.remainder));
  }
}

TEST_CASE("expansion of a vector with no known terms") {
  TidyBasis tb = complement_basis(standard_lattice(3, 2));
  SeriesVector z = series_zero_mod(3, 2, 7);
  Expansion e = basis_expand(tb, z, 30);
  CHECK_FALSE(e.exact);
  CHECK(e.coeff.empty());
  CHECK(e.j0 == 6);
  CHECK(e.next == 6);
}

TEST_CASE("expansion of coefficients over the standard lattice") {
  TidyBasis tb = complement_basis(standard_lattice(5, 2));
  SeriesVector z = series_zero(5, 2);
  series_set(z, -1, FpVec{2, 0});
  series_set(z, 3, FpVec{1, 4});
  Expansion e = basis_expand(tb, z, 10);
  CHECK(e.exact);
  CHECK(e.j0 == -1);
  CHECK(e.coeff.at(-1) == FpVec{2, 0});
  CHECK(e.coeff.at(3) == FpVec{1, 4});
  CHECK(e.coeff.size() == 2);
}

TEST_CASE("expansions need not terminate: budget stop") {
  // Complement representative 1 + t of lat/shift(lat) over F_2: expanding the
  // constant 1 gives coefficient 1 at every layer.
  CompactOpenSubgroup lat = standard_lattice(2, 1);
  SeriesVector b = series_zero(2, 1);
  series_set(b, 0, FpVec{1});
  series_set(b, 1, FpVec{1});
  TidyBasis tb = tidy_basis_from(lat, {b});

  Expansion e = basis_expand(tb, unit_series(2, 1, 0, 0), 5);
  CHECK_FALSE(e.exact);
  CHECK(e.j0 == 0);
  CHECK(e.next == 6);
  for (int j = 0; j <= 5; ++j) CHECK(e.coeff.at(j) == FpVec{1});
  CHECK(series_eq(e.remainder, mono(2, 1, 0, 6)));
}

TEST_CASE("tidy basis input validation") {
  CompactOpenSubgroup lat = standard_lattice(3, 2);
  SeriesVector e0 = unit_series(3, 2, 0, 0), e1 = unit_series(3, 2, 1, 0);
  TidyBasis tb = tidy_basis_from(lat, {e0, e1});
  CHECK(tb.expand_mat.rows == 2 * 2 * 2);  // 2*K1*d with K1 = 2

  // Wrong count.
  CHECK(fpt_test::throws_kind([&] { tidy_basis_from(lat, {e0}); }, ErrorKind::Mismatch));
  // Representative outside the subgroup.
  CHECK(fpt_test::throws_kind([&] { tidy_basis_from(lat, {series_shift(e0, -1), e1}); },
                              ErrorKind::Membership));
  // Dependent modulo the shifted subgroup: t*e0 is in shift(lat).
  CHECK(fpt_test::throws_kind([&] { tidy_basis_from(lat, {e0, series_shift(e0, 1)}); },
                              ErrorKind::Membership));
}
