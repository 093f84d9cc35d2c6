#include "fpt/series.hpp"

#include <sstream>

namespace fpt {

void check_degree(int n) {
  if (n <= -kDegreeWindow || n >= kDegreeWindow)
    fail(ErrorKind::Window, "degree " + std::to_string(n) + " outside the working window");
}

SeriesVector series_zero(u32 p, int d) {
  check_modulus(p);
  if (d <= 0) fail(ErrorKind::Mismatch, "series dimension must be positive");
  SeriesVector z;
  z.p = p;
  z.d = d;
  return z;
}

SeriesVector series_zero_mod(u32 p, int d, int prec) {
  check_degree(prec);
  SeriesVector z = series_zero(p, d);
  z.prec = prec;
  return z;
}

SeriesVector unit_series(u32 p, int d, int coord, int deg) {
  SeriesVector z = series_zero(p, d);
  if (coord < 0 || coord >= d) fail(ErrorKind::Mismatch, "unit coordinate out of range");
  FpVec v(static_cast<size_t>(d), 0);
  v[coord] = 1;
  series_set(z, deg, std::move(v));
  return z;
}

void series_set(SeriesVector& z, int deg, FpVec v) {
  check_degree(deg);
  if (static_cast<int>(v.size()) != z.d)
    fail(ErrorKind::Mismatch, "coefficient length " + std::to_string(v.size()) +
                                  " does not match dimension " + std::to_string(z.d));
  if (!z.known_at(deg))
    fail(ErrorKind::Precision, "writing coefficient of t^" + std::to_string(deg) +
                                   " beyond precision " + std::to_string(*z.prec));
  for (u32& x : v) x %= z.p;
  if (vec_is_zero(v))
    z.c.erase(deg);
  else
    z.c[deg] = std::move(v);
}

void series_add_to(SeriesVector& z, int deg, const FpVec& v) {
  auto it = z.c.find(deg);
  if (it == z.c.end()) {
    series_set(z, deg, v);
  } else {
    series_set(z, deg, vec_add(it->second, v, z.p));
  }
}

FpVec series_at(const SeriesVector& z, int deg) {
  if (!z.known_at(deg))
    fail(ErrorKind::Precision, "coefficient of t^" + std::to_string(deg) +
                                   " unknown at precision " + std::to_string(*z.prec));
  auto it = z.c.find(deg);
  if (it != z.c.end()) return it->second;
  return FpVec(static_cast<size_t>(z.d), 0);
}

int lo_bound(const SeriesVector& z) {
  if (!z.c.empty()) return z.c.begin()->first;
  return z.exact() ? kDegreeWindow : *z.prec;
}

bool series_known_zero(const SeriesVector& z) { return z.c.empty(); }

static void check_compatible(const SeriesVector& a, const SeriesVector& b) {
  if (a.p != b.p) fail(ErrorKind::Mismatch, "series moduli differ");
  if (a.d != b.d) fail(ErrorKind::Mismatch, "series dimensions differ");
}

static std::optional<int> min_prec(const std::optional<int>& a, const std::optional<int>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

SeriesVector series_add(const SeriesVector& a, const SeriesVector& b) {
  check_compatible(a, b);
  SeriesVector r = series_zero(a.p, a.d);
  r.prec = min_prec(a.prec, b.prec);
  for (const auto& [deg, v] : a.c)
    if (r.known_at(deg)) r.c[deg] = v;
  for (const auto& [deg, v] : b.c) {
    if (!r.known_at(deg)) continue;
    auto it = r.c.find(deg);
    if (it == r.c.end()) {
      r.c[deg] = v;
    } else {
      it->second = vec_add(it->second, v, r.p);
      if (vec_is_zero(it->second)) r.c.erase(it);
    }
  }
  return r;
}

SeriesVector series_neg(const SeriesVector& a) {
  SeriesVector r = a;
  for (auto& [deg, v] : r.c) v = vec_neg(v, r.p);
  return r;
}

SeriesVector series_sub(const SeriesVector& a, const SeriesVector& b) {
  return series_add(a, series_neg(b));
}

SeriesVector series_scale(const SeriesVector& a, u32 s) {
  s %= a.p;
  SeriesVector r = series_zero(a.p, a.d);
  r.prec = a.prec;
  if (s == 0) return r;
  for (const auto& [deg, v] : a.c) r.c[deg] = vec_scale(v, s, a.p);
  return r;
}

SeriesVector series_shift(const SeriesVector& a, int r) {
  SeriesVector out = series_zero(a.p, a.d);
  if (a.prec) {
    check_degree(*a.prec + r);
    out.prec = *a.prec + r;
  }
  for (const auto& [deg, v] : a.c) {
    check_degree(deg + r);
    out.c[deg + r] = v;
  }
  return out;
}

SeriesVector series_truncate(const SeriesVector& a, int prec) {
  check_degree(prec);
  if (a.prec && *a.prec <= prec) return a;
  SeriesVector r = a;
  r.prec = prec;
  r.c.erase(r.c.lower_bound(prec), r.c.end());
  return r;
}

bool series_eq(const SeriesVector& a, const SeriesVector& b) {
  check_compatible(a, b);
  if (!a.exact() || !b.exact())
    fail(ErrorKind::Precision, "exact comparison of truncated series");
  return a.c == b.c;
}

bool series_eq_mod(const SeriesVector& a, const SeriesVector& b, int prec) {
  check_compatible(a, b);
  if (!a.known_at(prec - 1) || !b.known_at(prec - 1))
    fail(ErrorKind::Precision, "comparison modulo t^" + std::to_string(prec) +
                                   " exceeds the known precision");
  auto ae = a.c.lower_bound(prec), be = b.c.lower_bound(prec);
  return std::equal(a.c.begin(), ae, b.c.begin(), be);
}

std::string series_to_string(const SeriesVector& z) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [deg, v] : z.c) {
    if (!first) os << " + ";
    first = false;
    os << "(";
    for (int k = 0; k < z.d; ++k) {
      if (k) os << ",";
      os << v[k];
    }
    os << ")t^" << deg;
  }
  if (first) os << "0";
  if (z.prec) os << " + O(t^" << *z.prec << ")";
  return os.str();
}

}  // namespace fpt
