#pragma once

#include <vector>

#include "fpt/rep.hpp"
#include "fpt/series.hpp"

namespace fpt {

// Lattice-membership reduction of a rep.  The member space collects the
// vectors of the standard lattice that every image phi(f), including
// negative shifts of f, keeps inside the lattice.  It is a module over the
// nonnegative-degree scalars of full rank d_prime, and rewriting the rep in
// a module basis makes every image lower triangular.
struct ReducedRep {
  u32 p = 0;
  int d = 0;        // ambient dimension
  int d_prime = 0;  // module rank detected in the window
  int window = 0;   // member coordinates inspected: degrees [0, window)
  std::vector<SeriesVector> gens;  // module generators, ascending leading degree
  std::vector<int> lead_deg;
  Rep inner;  // d_prime-dimensional rep of the conjugated action
};

// Requires a validated rep whose blocks keep nonnegative degrees inside the
// lattice (run invariant_subgroup + change_basis first otherwise).  The
// member space is solved from the vanishing of negative output degrees
// across an exact closure of shifted generator words; conditions reading
// past the window are dropped, so the computed space over-approximates the
// projection of the true one.  Throws ErrorKind::Window when the window is
// too small to carry the construction.
ReducedRep u0_reduce(const Rep& rep, int window);

// theta: coefficients in the module basis -> ambient vector.  Exact for
// exact input; truncated input keeps its sound precision.
SeriesVector theta_apply(const ReducedRep& rr, const SeriesVector& zp);

// Inverse direction: expands an ambient vector over the generators, allowing
// negative shifts (the full Laurent span).  Coordinates all nonnegative is
// exactly membership in the member space.  Throws ErrorKind::Membership when
// z is outside even the Laurent span (possible only when d_prime < d).
SeriesVector theta_expand(const ReducedRep& rr, const SeriesVector& z);

}  // namespace fpt
