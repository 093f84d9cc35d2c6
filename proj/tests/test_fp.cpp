#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fpt/fp.hpp"
#include "helpers.hpp"

using namespace fpt;
using fpt_test::Rng;

TEST_CASE("modulus validation") {
  CHECK_NOTHROW(check_modulus(2));
  CHECK_NOTHROW(check_modulus(3));
  CHECK_NOTHROW(check_modulus(5));
  CHECK_NOTHROW(check_modulus(65521));  // largest prime below 2^16
  for (u32 bad : {0u, 1u, 4u, 6u, 9u, 91u, 65536u, 65537u})
    CHECK(fpt_test::throws_kind([&] { check_modulus(bad); }, ErrorKind::Invalid));
}

TEST_CASE("scalar arithmetic matches integer arithmetic") {
  for (u32 p : {2u, 3u, 5u, 7u}) {
    for (u32 a = 0; a < p; ++a)
      for (u32 b = 0; b < p; ++b) {
        CHECK(fp_add(a, b, p) == (a + b) % p);
        CHECK(fp_sub(a, b, p) == (a + p - b) % p);
        CHECK(fp_mul(a, b, p) == (a * b) % p);
        CHECK(fp_add(a, fp_neg(a, p), p) == 0);
      }
    for (u32 a = 1; a < p; ++a) CHECK(fp_mul(a, fp_inv(a, p), p) == 1);
  }
  CHECK(fp_mul(65520, 65520, 65521) == 1);  // (-1)^2
  CHECK_THROWS_AS(fp_inv(0, 5), Error);
}

TEST_CASE("fp_pow agrees with repeated multiplication") {
  Rng rng(101);
  for (int t = 0; t < 50; ++t) {
    u32 p = (t % 2) ? 5 : 65521;
    u32 a = rng.below(p);
    u32 e = rng.below(40);
    u32 want = 1;
    for (u32 i = 0; i < e; ++i) want = fp_mul(want, a, p);
    CHECK(fp_pow(a, e, p) == want);
  }
}

TEST_CASE("FpScalar rejects mixed moduli") {
  FpScalar a(3, 2), b(5, 2);
  CHECK(fpt_test::throws_kind([&] { a + b; }, ErrorKind::Mismatch));
  CHECK(fpt_test::throws_kind([&] { a - b; }, ErrorKind::Mismatch));
  CHECK(fpt_test::throws_kind([&] { a * b; }, ErrorKind::Mismatch));
  CHECK((FpScalar(7, 3) * FpScalar(7, 5)).v == 1);
  CHECK(FpScalar(7, 3).inv().v == 5);
}

TEST_CASE("matrix multiplication: frozen product and exhaustive associativity") {
  MatFp x(7, 2, 2), y(7, 2, 2);
  x.a = {1, 2, 3, 4};
  y.a = {5, 6, 7, 0};
  MatFp want(7, 2, 2);
  want.a = {5, 6, 1, 4};  // [[19,6],[43,18]] mod 7
  CHECK(mat_mul(x, y) == want);

  // All 2x2 matrices over F_2: associativity and identity laws.
  std::vector<MatFp> all;
  for (int bits = 0; bits < 16; ++bits) {
    MatFp m(2, 2, 2);
    for (int k = 0; k < 4; ++k) m.a[k] = (bits >> k) & 1;
    all.push_back(m);
  }
  MatFp id = MatFp::identity(2, 2);
  for (const auto& a : all) {
    CHECK(mat_mul(a, id) == a);
    CHECK(mat_mul(id, a) == a);
    for (const auto& b : all)
      for (const auto& c : all)
        CHECK(mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c)));
  }
}

TEST_CASE("matrix ring laws on random samples") {
  Rng rng(202);
  for (int t = 0; t < 30; ++t) {
    u32 p = (t % 3 == 0) ? 2 : (t % 3 == 1) ? 3 : 5;
    int n = rng.range(1, 4);
    MatFp a = fpt_test::random_mat(rng, p, n, n);
    MatFp b = fpt_test::random_mat(rng, p, n, n);
    MatFp c = fpt_test::random_mat(rng, p, n, n);
    CHECK(mat_mul(a, mat_add(b, c)) == mat_add(mat_mul(a, b), mat_mul(a, c)));
    CHECK(mat_add(a, mat_neg(a)).is_zero());
    CHECK(mat_sub(a, b) == mat_add(a, mat_neg(b)));
    CHECK(transpose(transpose(a)) == a);
    CHECK(transpose(mat_mul(a, b)) == mat_mul(transpose(b), transpose(a)));
    FpVec v = fpt_test::random_vec(rng, p, n);
    CHECK(mat_vec(mat_mul(a, b), v) == mat_vec(a, mat_vec(b, v)));
  }
}

TEST_CASE("shape and modulus mismatches raise Mismatch") {
  MatFp a(3, 2, 2), b(3, 3, 2), c(5, 2, 2);
  CHECK_THROWS_AS(mat_add(a, b), Error);
  CHECK_THROWS_AS(mat_mul(a, b), Error);
  CHECK_THROWS_AS(mat_add(a, c), Error);
  CHECK_THROWS_AS(mat_vec(a, FpVec{1, 2, 3}), Error);
  CHECK_THROWS_AS(mat_pow(b, 2), Error);
}

TEST_CASE("echelon form: frozen example and structural properties") {
  // [[1,2,1],[2,4,0],[0,0,1]] mod 5 -> pivots in columns 0 and 2, rank 2,
  // rref [[1,2,0],[0,0,1],[0,0,0]].
  MatFp m(5, 3, 3);
  m.a = {1, 2, 1, 2, 4, 0, 0, 0, 1};
  Echelon e = echelon_form(m);
  CHECK(e.rank == 2);
  CHECK(e.pivots == std::vector<int>{0, 2});
  MatFp want(5, 3, 3);
  want.a = {1, 2, 0, 0, 0, 1, 0, 0, 0};
  CHECK(e.rref == want);

  Rng rng(303);
  for (int t = 0; t < 40; ++t) {
    u32 p = (t % 2) ? 3 : 2;
    int r = rng.range(1, 5), c = rng.range(1, 5);
    MatFp a = fpt_test::random_mat(rng, p, r, c);
    Echelon e1 = echelon_form(a);
    // Pivot columns strictly increase and carry unit pivots.
    for (size_t i = 0; i < e1.pivots.size(); ++i) {
      if (i) CHECK(e1.pivots[i] > e1.pivots[i - 1]);
      CHECK(e1.rref.at(static_cast<int>(i), e1.pivots[i]) == 1);
    }
    CHECK(echelon_form(e1.rref).rref == e1.rref);
    CHECK(mat_rank(a) == mat_rank(transpose(a)));
    // rank-nullity, and every kernel vector annihilates the matrix.
    auto ker = kernel_basis(a);
    CHECK(static_cast<int>(ker.size()) + e1.rank == c);
    for (const auto& v : ker) {
      FpVec out = mat_vec(a, v);
      for (u32 x : out) CHECK(x == 0);
    }
    CHECK(kernel_basis(a) == ker);  // deterministic
  }
}

TEST_CASE("solve_linear finds solutions and detects inconsistency") {
  Rng rng(404);
  for (int t = 0; t < 40; ++t) {
    u32 p = (t % 2) ? 5 : 2;
    int r = rng.range(1, 4), c = rng.range(1, 4);
    MatFp a = fpt_test::random_mat(rng, p, r, c);
    FpVec x = fpt_test::random_vec(rng, p, c);
    FpVec b = mat_vec(a, x);
    auto got = solve_linear(a, b);
    REQUIRE(got.has_value());
    CHECK(mat_vec(a, *got) == b);
  }
  MatFp a(3, 2, 1);
  a.a = {1, 1};
  CHECK_FALSE(solve_linear(a, FpVec{1, 2}).has_value());
  CHECK(solve_linear(a, FpVec{2, 2}).has_value());
}

TEST_CASE("mat_inverse") {
  Rng rng(505);
  for (int t = 0; t < 25; ++t) {
    u32 p = (t % 2) ? 3 : 7;
    int n = rng.range(1, 4);
    MatFp g = fpt_test::random_invertible(rng, p, n);
    CHECK(mat_mul(g, mat_inverse(g)) == MatFp::identity(p, n));
    CHECK(mat_mul(mat_inverse(g), g) == MatFp::identity(p, n));
  }
  MatFp s(2, 2, 2);
  s.a = {1, 1, 1, 1};
  CHECK(fpt_test::throws_kind([&] { mat_inverse(s); }, ErrorKind::Inconsistency));
}

TEST_CASE("nilpotency and unipotency predicates") {
  MatFp n(3, 2, 2);
  n.a = {0, 1, 0, 0};
  CHECK(is_nilpotent(n));
  CHECK_FALSE(is_nilpotent(MatFp::identity(3, 2)));
  CHECK(is_unipotent(mat_add(MatFp::identity(3, 2), n)));

  // diag(2, 1) mod 3: (a - I)^2 = diag(1, 0) != 0, so not unipotent.
  MatFp d(3, 2, 2);
  d.a = {2, 0, 0, 1};
  MatFp shifted = mat_sub(d, MatFp::identity(3, 2));
  MatFp sq = mat_mul(shifted, shifted);
  MatFp sq_want(3, 2, 2);
  sq_want.a = {1, 0, 0, 0};
  CHECK(sq == sq_want);
  CHECK_FALSE(is_unipotent(d));
  // ... although d^2 = I makes <d> a finite group.
  CHECK(mat_mul(d, d) == MatFp::identity(3, 2));
}

TEST_CASE("joint strict triangularization of commuting nilpotents") {
  Rng rng(606);
  for (int t = 0; t < 25; ++t) {
    u32 p = (t % 3 == 0) ? 2 : (t % 3 == 1) ? 3 : 5;
    int n = rng.range(2, 4);
    // Commuting family: polynomials in one nilpotent matrix.
    MatFp base = fpt_test::random_nilpotent(rng, p, n);
    std::vector<MatFp> fam{base, mat_mul(base, base),
                           mat_scale(base, 1 + rng.below(p - 1))};
    MatFp pm = joint_strict_triangularize(fam);
    MatFp pinv = mat_inverse(pm);
    for (const auto& m : fam) CHECK(is_strictly_upper(mat_mul(pinv, mat_mul(m, pm))));
  }

  // Two independent shift blocks commute.
  MatFp a(2, 4, 4), b(2, 4, 4);
  a.at(0, 1) = 1;
  b.at(2, 3) = 1;
  MatFp pm = joint_strict_triangularize({a, b});
  MatFp pinv = mat_inverse(pm);
  CHECK(is_strictly_upper(mat_mul(pinv, mat_mul(a, pm))));
  CHECK(is_strictly_upper(mat_mul(pinv, mat_mul(b, pm))));

  // Non-commuting nilpotents are rejected with the pair named.
  MatFp e01(2, 2, 2), e10(2, 2, 2);
  e01.at(0, 1) = 1;
  e10.at(1, 0) = 1;
  try {
    joint_strict_triangularize({e01, e10});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Invalid);
    CHECK(std::string(e.what()).find("0 and 1") != std::string::npos);
  }
  try {
    joint_strict_triangularize({e01, MatFp::identity(2, 2)});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Invalid);
    CHECK(std::string(e.what()).find("matrix 1 is not nilpotent") != std::string::npos);
  }
}

TEST_CASE("is_strictly_upper") {
  MatFp m(2, 3, 3);
  m.at(0, 1) = 1;
  m.at(0, 2) = 1;
  m.at(1, 2) = 1;
  CHECK(is_strictly_upper(m));
  m.at(1, 1) = 1;
  CHECK_FALSE(is_strictly_upper(m));
}
