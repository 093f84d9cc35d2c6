#pragma once

#include <map>
#include <string>
#include <vector>

#include "fpt/series.hpp"

namespace fpt {

// Compact open subgroup of F_p((t))^d, represented at depth K >= 0 by the
// subspace W of the 2Kd-dimensional quotient Q_K = shift^{-K}(lat)/shift^K(lat)
// it fills: the subgroup is the full preimage of W, so it always sits between
// shift^K(lat) and shift^{-K}(lat), where lat = F_p[[t]]^d. `basis` holds a
// row echelon basis of W; coordinates of Q_K are ordered by (degree,
// coordinate) with degree running over [-K, K).
struct CompactOpenSubgroup {
  u32 p = 2;
  int d = 0;
  int K = 1;
  MatFp basis;  // rows: reduced echelon basis of W, 2Kd columns

  int q_dim() const { return 2 * K * d; }
  int dim() const { return basis.rows; }
};

// Index of (degree, coordinate) in Q_K coordinates.
int q_index(int deg, int coord, int K, int d);
// Class of z in Q_K. Needs z known modulo shift^K(lat) (prec >= K or exact);
// degrees >= K are quotiented away. Membership error when z has support
// below -K.
FpVec q_coords(const SeriesVector& z, int K, u32 p, int d);
// Exact polynomial vector with the given Q_K coordinates.
SeriesVector q_lift(const FpVec& coords, int K, u32 p, int d);

CompactOpenSubgroup standard_lattice(u32 p, int d);
// shift^r of the standard lattice.
CompactOpenSubgroup shifted_lattice(u32 p, int d, int r);
// Preimage of the span of the classes of `spanning` (no closure under the
// shift is taken).
CompactOpenSubgroup subgroup_from_subspace(u32 p, int d, int K,
                                           const std::vector<SeriesVector>& spanning);
// Same, with the subspace given directly by coordinate rows.
CompactOpenSubgroup subgroup_from_coords(u32 p, int d, int K, const MatFp& rows);
// Smallest subgroup containing all shift^j(g), j >= 0, at depth K: the
// F_p[[t]]-module generated by the generators, plus shift^K(lat). Always
// tidy.
CompactOpenSubgroup from_generators(u32 p, int d, const std::vector<SeriesVector>& gens, int K);

// Same subgroup re-represented at a depth K2 >= K.
CompactOpenSubgroup cos_embed(const CompactOpenSubgroup& V, int K2);
// Same subgroup at the smallest possible depth.
CompactOpenSubgroup cos_tighten(const CompactOpenSubgroup& V);

// Decidable thanks to the subgroup being open: only z mod shift^K(lat)
// matters. Precision error when z is not known that far.
bool cos_member(const CompactOpenSubgroup& V, const SeriesVector& z);
bool cos_contains(const CompactOpenSubgroup& U, const CompactOpenSubgroup& V);  // V subset of U
bool cos_equal(const CompactOpenSubgroup& U, const CompactOpenSubgroup& V);
CompactOpenSubgroup cos_intersect(const CompactOpenSubgroup& U, const CompactOpenSubgroup& V);

CompactOpenSubgroup tau_image(const CompactOpenSubgroup& V);     // shift(V)
CompactOpenSubgroup tau_preimage(const CompactOpenSubgroup& V);  // shift^{-1}(V)
// True when shift(V) is contained in V; such a V is an F_p[[t]]-lattice.
bool is_tidy(const CompactOpenSubgroup& V);

// e with [U : V] = p^e; Membership error unless V is contained in U.
int log_index(const CompactOpenSubgroup& U, const CompactOpenSubgroup& V);

// A tidy subgroup together with exact representatives b_1..b_d of a basis of
// V / shift(V). The b_k form a module basis: V is the direct sum of the
// F_p[[t]] b_k. expand_mat is the precomputed solve matrix used by
// basis_expand.
struct TidyBasis {
  CompactOpenSubgroup V;
  std::vector<SeriesVector> b;
  MatFp expand_mat;
};
TidyBasis complement_basis(const CompactOpenSubgroup& V);
// Packages caller-supplied representatives after checking that they lie in V
// and are independent modulo shift(V).
TidyBasis tidy_basis_from(const CompactOpenSubgroup& V, const std::vector<SeriesVector>& b);

// Largest j with z in shift^j(V). Mismatch error for an exact zero;
// Precision error when the answer is not determined by the known part.
int layer_of(const CompactOpenSubgroup& V, const SeriesVector& z);

// z = sum over stored (j, k) of coeff[j][k] shift^j(b_k) + remainder, with
// remainder in shift^next(V). Peeling runs from the layer of z up to j_max,
// stopping early when the remainder is exactly zero (exact == true) or when
// the precision of z does not determine the next layer. An expansion need
// not terminate even for polynomial input; j_max is the working budget.
struct Expansion {
  int j0 = 0;
  int next = 0;  // first unpeeled layer
  std::map<int, FpVec> coeff;
  bool exact = false;
  SeriesVector remainder;
};
Expansion basis_expand(const TidyBasis& tb, const SeriesVector& z, int j_max);
// Sum of the stored layers (always exact).
SeriesVector expansion_value(const TidyBasis& tb, const Expansion& e);

std::string cos_to_string(const CompactOpenSubgroup& V);

}  // namespace fpt
