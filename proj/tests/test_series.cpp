#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fpt/series.hpp"
#include "helpers.hpp"

using namespace fpt;
using fpt_test::Rng;

TEST_CASE("construction, set, at") {
  SeriesVector z = unit_series(3, 2, 1, -4);
  CHECK(series_at(z, -4) == FpVec{0, 1});
  CHECK(series_at(z, 0) == FpVec{0, 0});
  CHECK(lo_bound(z) == -4);
  CHECK(z.exact());

  series_set(z, 2, FpVec{4, 5});  // reduced mod 3
  CHECK(series_at(z, 2) == FpVec{1, 2});
  series_set(z, 2, FpVec{3, 6});  // zero vector erases the entry
  CHECK(z.c.count(2) == 0);
  CHECK(series_at(z, 2) == FpVec{0, 0});

  CHECK(fpt_test::throws_kind([&] { series_set(z, 0, FpVec{1}); }, ErrorKind::Mismatch));
  CHECK(fpt_test::throws_kind([] { unit_series(3, 2, 2, 0); }, ErrorKind::Mismatch));

  SeriesVector t = series_zero_mod(5, 1, 3);
  series_set(t, 2, FpVec{1});
  CHECK(fpt_test::throws_kind([&] { series_set(t, 3, FpVec{1}); }, ErrorKind::Precision));
  CHECK(fpt_test::throws_kind([&] { series_at(t, 3); }, ErrorKind::Precision));
  CHECK(series_at(t, 2) == FpVec{1});
}

TEST_CASE("module laws and precision propagation") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    u32 p = (trial % 2) ? 3 : 5;
    int d = rng.range(1, 3);
    SeriesVector a = fpt_test::random_series(rng, p, d, -3, 4);
    SeriesVector b = fpt_test::random_series(rng, p, d, -2, 6);
    CHECK(series_eq(series_add(a, b), series_add(b, a)));
    CHECK(series_eq(series_sub(a, a), series_zero(p, d)));
    CHECK(series_eq(series_add(a, series_neg(a)), series_zero(p, d)));
    CHECK(series_eq(series_scale(a, p - 1), series_neg(a)));
    CHECK(series_eq(series_scale(a, 0), series_zero(p, d)));

    SeriesVector at = series_truncate(a, 2);
    SeriesVector bt = series_truncate(b, 4);
    SeriesVector s = series_add(at, bt);
    REQUIRE(s.prec.has_value());
    CHECK(*s.prec == 2);
    CHECK(series_eq_mod(s, series_add(a, b), 2));
    CHECK(fpt_test::throws_kind([&] { series_at(s, 2); }, ErrorKind::Precision));
    CHECK(fpt_test::throws_kind([&] { series_eq(s, a); }, ErrorKind::Precision));
    CHECK(fpt_test::throws_kind([&] { series_eq_mod(s, a, 3); }, ErrorKind::Precision));
  }
}

TEST_CASE("shift") {
  Rng rng(12);
  SeriesVector a = fpt_test::random_series(rng, 5, 2, -3, 3);
  SeriesVector s = series_shift(a, 4);
  CHECK(lo_bound(s) == lo_bound(a) + 4);
  for (int n = -3; n <= 3; ++n) CHECK(series_at(s, n + 4) == series_at(a, n));
  CHECK(series_eq(series_shift(s, -4), a));
  CHECK(series_eq(series_shift(series_shift(a, 7), -2), series_shift(a, 5)));

  // Shift distributes over addition.
  SeriesVector b = fpt_test::random_series(rng, 5, 2, -1, 5);
  CHECK(series_eq(series_shift(series_add(a, b), 3),
                  series_add(series_shift(a, 3), series_shift(b, 3))));

  // Precision moves with the element.
  SeriesVector t = series_truncate(a, 1);
  CHECK(*series_shift(t, 10).prec == 11);

  CHECK(fpt_test::throws_kind([&] { series_shift(a, kDegreeWindow); }, ErrorKind::Window));
}

TEST_CASE("truncate") {
  Rng rng(13);
  SeriesVector a = fpt_test::random_series(rng, 3, 2, -2, 5);
  SeriesVector t = series_truncate(a, 3);
  CHECK(*t.prec == 3);
  CHECK(t.c.rbegin()->first < 3);
  CHECK(series_eq_mod(t, a, 3));
  // Tightening is monotone; loosening is a no-op.
  CHECK(*series_truncate(t, 1).prec == 1);
  CHECK(*series_truncate(t, 10).prec == 3);
}

TEST_CASE("lo_bound and known_zero") {
  CHECK(lo_bound(series_zero(2, 1)) == kDegreeWindow);
  CHECK(series_known_zero(series_zero(2, 1)));
  CHECK(lo_bound(series_zero_mod(2, 1, -5)) == -5);
  CHECK(series_known_zero(series_zero_mod(2, 1, -5)));
  CHECK_FALSE(series_known_zero(unit_series(2, 1, 0, 3)));
}

TEST_CASE("rendering") {
  SeriesVector z = unit_series(3, 2, 0, -1);
  series_add_to(z, 2, FpVec{1, 2});
  CHECK(series_to_string(z) == "(1,0)t^-1 + (1,2)t^2");
  CHECK(series_to_string(series_truncate(z, 1)) == "(1,0)t^-1 + O(t^1)");
  CHECK(series_to_string(series_zero(3, 2)) == "0");
}

TEST_CASE("moduli and dimension mismatches") {
  SeriesVector a = unit_series(3, 2, 0, 0);
  SeriesVector b = unit_series(5, 2, 0, 0);
  SeriesVector c = unit_series(3, 1, 0, 0);
  CHECK(fpt_test::throws_kind([&] { series_add(a, b); }, ErrorKind::Mismatch));
  CHECK(fpt_test::throws_kind([&] { series_add(a, c); }, ErrorKind::Mismatch));
}
