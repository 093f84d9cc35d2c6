#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpt/error.hpp"

namespace fpt {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Moduli are primes p with 2 <= p < 2^16, so products fit comfortably in u64.
bool is_prime_u32(u32 n);
void check_modulus(u32 p);

inline u32 fp_add(u32 a, u32 b, u32 p) { return (a + b) % p; }
inline u32 fp_sub(u32 a, u32 b, u32 p) { return (a + p - b % p) % p; }
inline u32 fp_mul(u32 a, u32 b, u32 p) { return static_cast<u32>((u64(a) * b) % p); }
inline u32 fp_neg(u32 a, u32 p) { return (p - a % p) % p; }
u32 fp_pow(u32 a, u64 e, u32 p);
u32 fp_inv(u32 a, u32 p);  // errors on a == 0

// Division rounding toward -inf / +inf for any sign of a, b > 0.
inline int floor_div(int a, int b) { return a / b - ((a % b != 0 && (a < 0) != (b < 0)) ? 1 : 0); }
inline int ceil_div(int a, int b) { return floor_div(a + b - 1, b); }

// Scalar in F_p carrying its modulus; mixing moduli raises Mismatch.
struct FpScalar {
  u32 p;
  u32 v;

  FpScalar(u32 p_, u64 value) : p(p_), v(static_cast<u32>(value % p_)) { check_modulus(p_); }
  FpScalar operator+(const FpScalar& o) const { return with(fp_add(v, same(o).v, p)); }
  FpScalar operator-(const FpScalar& o) const { return with(fp_sub(v, same(o).v, p)); }
  FpScalar operator*(const FpScalar& o) const { return with(fp_mul(v, same(o).v, p)); }
  FpScalar inv() const { return with(fp_inv(v, p)); }
  FpScalar neg() const { return with(fp_neg(v, p)); }
  bool operator==(const FpScalar& o) const { return p == o.p && v == o.v; }

 private:
  FpScalar with(u32 value) const { FpScalar r(*this); r.v = value; return r; }
  const FpScalar& same(const FpScalar& o) const;
};

using FpVec = std::vector<u32>;

FpVec vec_add(const FpVec& a, const FpVec& b, u32 p);
FpVec vec_sub(const FpVec& a, const FpVec& b, u32 p);
FpVec vec_neg(const FpVec& a, u32 p);
FpVec vec_scale(const FpVec& a, u32 c, u32 p);
bool vec_is_zero(const FpVec& a);

// Dense matrix over F_p, row major. Deterministic throughout: the elimination
// pivot is always the first row with a nonzero entry in the current column.
struct MatFp {
  u32 p = 2;
  int rows = 0;
  int cols = 0;
  std::vector<u32> a;

  MatFp() = default;
  MatFp(u32 p_, int r, int c);
  static MatFp identity(u32 p, int n);

  u32& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  u32 at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  bool is_zero() const;
  bool operator==(const MatFp& o) const { return p == o.p && rows == o.rows && cols == o.cols && a == o.a; }
};

MatFp mat_add(const MatFp& x, const MatFp& y);
MatFp mat_sub(const MatFp& x, const MatFp& y);
MatFp mat_neg(const MatFp& x);
MatFp mat_scale(const MatFp& x, u32 c);
MatFp mat_mul(const MatFp& x, const MatFp& y);
MatFp mat_pow(const MatFp& x, u64 e);
MatFp transpose(const MatFp& x);
FpVec mat_vec(const MatFp& x, const FpVec& v);

// Row echelon data. pivots[r] = column of the pivot in row r of rref.
struct Echelon {
  MatFp rref;
  std::vector<int> pivots;
  int rank = 0;
};
Echelon echelon_form(const MatFp& m);
int mat_rank(const MatFp& m);

// Basis of {v : m v = 0}. One vector per free column, in column order, with a 1
// in the free position; reproducible for identical input.
std::vector<FpVec> kernel_basis(const MatFp& m);

// Matrix whose rows are the given vectors (all of length cols).
MatFp rows_from_vecs(u32 p, int cols, const std::vector<FpVec>& vs);
MatFp stack_rows(const MatFp& top, const MatFp& bottom);

// Remainder of v after subtracting multiples of the rows of an echelon
// matrix (each nonzero row must have a leading 1).
FpVec reduce_against(const MatFp& ech, FpVec v);
bool in_row_space(const MatFp& ech, const FpVec& v);

// One solution of m x = b, or nullopt when inconsistent.
std::optional<FpVec> solve_linear(const MatFp& m, const FpVec& b);

// Inverse of a square matrix; errors (Inconsistency) when singular.
MatFp mat_inverse(const MatFp& m);

bool is_nilpotent(const MatFp& m);
// True iff (a - I)^n = 0 for n = a.rows.
bool is_unipotent(const MatFp& a);

// For pairwise commuting nilpotent matrices, returns an invertible P whose
// columns are adapted to the iterated common-kernel flag, so every
// P^{-1} m P is strictly upper triangular. Errors name the offending pair or
// matrix when the preconditions fail.
MatFp joint_strict_triangularize(const std::vector<MatFp>& mats);

bool is_strictly_upper(const MatFp& m);

std::string mat_to_string(const MatFp& m);

}  // namespace fpt
