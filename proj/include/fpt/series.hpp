#pragma once

#include <map>
#include <optional>
#include <string>

#include "fpt/fp.hpp"

namespace fpt {

// Every degree index must stay inside (-kDegreeWindow, kDegreeWindow); the
// bound is far beyond any useful working precision and exists to catch
// runaway shifts.
constexpr int kDegreeWindow = 1 << 20;
void check_degree(int n);

// Vector of formal Laurent series over F_p, coefficient sparse.
// prec == nullopt: exact Laurent polynomial vector, zero outside the stored
// support. prec == N: coefficients are known exactly for degrees < N and
// unknown from N on. Stored coefficients are nonzero vectors with degree
// below prec.
struct SeriesVector {
  u32 p = 2;
  int d = 0;
  std::optional<int> prec;
  std::map<int, FpVec> c;

  bool exact() const { return !prec.has_value(); }
  bool known_at(int n) const { return exact() || n < *prec; }
};

SeriesVector series_zero(u32 p, int d);
SeriesVector series_zero_mod(u32 p, int d, int prec);
// e_coord t^deg (coord is 0-based)
SeriesVector unit_series(u32 p, int d, int coord, int deg);

// Overwrites the coefficient of t^deg; Precision error when deg is outside
// the known range.
void series_set(SeriesVector& z, int deg, FpVec v);
void series_add_to(SeriesVector& z, int deg, const FpVec& v);

// Coefficient of t^deg; Precision error when unknown.
FpVec series_at(const SeriesVector& z, int deg);

// Smallest supported degree. When the known part is zero this is prec for a
// truncated vector (the true valuation is at least that) and kDegreeWindow
// for an exact zero.
int lo_bound(const SeriesVector& z);

// True when no nonzero coefficient exists in the known range.
bool series_known_zero(const SeriesVector& z);

SeriesVector series_add(const SeriesVector& a, const SeriesVector& b);
SeriesVector series_sub(const SeriesVector& a, const SeriesVector& b);
SeriesVector series_neg(const SeriesVector& a);
SeriesVector series_scale(const SeriesVector& a, u32 s);
// Multiplication by t^r.
SeriesVector series_shift(const SeriesVector& a, int r);
// Caps the precision at prec (no-op when already coarser).
SeriesVector series_truncate(const SeriesVector& a, int prec);

// Exact equality; Precision error when either side is truncated.
bool series_eq(const SeriesVector& a, const SeriesVector& b);
// Equality of all coefficients of degree < prec; Precision error when either
// side is not known that far.
bool series_eq_mod(const SeriesVector& a, const SeriesVector& b, int prec);

std::string series_to_string(const SeriesVector& z);

}  // namespace fpt
