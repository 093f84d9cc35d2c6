#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fpt/algebra.hpp"
#include "fpt/block.hpp"
#include "fpt/subgroup.hpp"

namespace fpt {

// A representation of the additive group of scalar Laurent series by
// automorphisms of the vector module, pinned down by the image of the
// constant 1.  We store that image as a0 = phi(1) - Id, so a0 is a block
// matrix and phi(t^r) - Id = shift_conjugate(a0, r).
struct Rep {
  u32 p = 0;
  int d = 0;
  BlockMatrix a0;

  enum class State { Unchecked, Valid, Invalid };
  State state = State::Unchecked;
  std::string reason;  // populated when state == Invalid
};

Rep make_rep(u32 p, int d, BlockMatrix a0);

struct ValidationReport {
  bool valid = false;
  std::string reason;
  // Range of shifts r for which [a0, shift_conjugate(a0, r)] was checked.
  int comm_lo = 0;
  int comm_hi = 0;
};

// Checks that I + a0 has order dividing p and commutes with all of its
// shift conjugates.  Commutation only needs checking where the supports of
// the two factors can overlap; the inspected range is recorded in the
// report.  The rep is stamped Valid or Invalid; invalidity is a finding,
// not an error.
ValidationReport validate(Rep& rep);

// make_rep + validate, throwing ErrorKind::Invalid on a bad generator.
Rep validated_rep(u32 p, int d, BlockMatrix a0);

// Throws ErrorKind::Invalid unless rep.state == Valid.
void require_valid(const Rep& rep);

// phi(f) - Id for an exact scalar Laurent polynomial f (d = 1 series).
// Requires a validated rep.
BlockMatrix phi_minus_id(const Rep& rep, const SeriesVector& f);

// phi(f) applied to z.  For truncated f the result is truncated at the
// first degree the unknown tail of f could disturb.
SeriesVector phi_apply(const Rep& rep, const SeriesVector& f, const SeriesVector& z);

// Vanishing envelope of the algebra generated by the shifted a0 blocks.
//
// envelope is the union of the block supports of a spanning set of words in
// the shift conjugates a0^{(r)}, 0 <= r <= r_max; every element of the full
// algebra (all r >= 0) is supported inside its diagonal translates
// envelope + (s, s), s >= 0.  From it two certificate sequences are read
// off:
//   a[m]: for every f supported in degrees >= 0, phi(t^m f) - Id has no
//         block at (i, j) with i < a[m] and j > i - m.  Non-increasing,
//         a[0] <= 0 (equal to 0 unless the generator itself has blocks in
//         negative rows above the lag-m diagonal).
//   b[i]: for rows i in [0, i_hi], every phi(f) - Id with f supported in
//         degrees >= 0 has no block at (i, j) with j > i + b[i].
//         Non-decreasing in i.
struct ZeroPattern {
  u32 p = 0;
  int d = 0;
  int r_max = 0;
  bool complete = false;       // closure terminated by exact vanishing
  int vanish_len = -1;         // length bound when complete
  std::set<BlockKey> envelope;
  std::vector<int> a;          // index m = 0 .. max_m
  std::map<int, int> b;        // rows 0 .. i_hi
};

// r_max is chosen internally: once the closure vanishes at length L, any
// word over all shifts r >= 0 is a diagonal translate of a word whose
// consecutive shifts differ by at most the support width, so shifts up to
// (L - 1) * width suffice for an exact global envelope.
ZeroPattern zero_pattern(const Rep& rep, int max_m, int i_hi,
                         int max_len = 24, int max_rank = 4096);

// Largest shift-stable compact open subgroup invariant under every phi(f),
// found by intersecting images from the standard lattice downward.  Throws
// ErrorKind::Stabilization if the iteration does not settle within budget.
CompactOpenSubgroup invariant_subgroup(const Rep& rep);

std::string rep_to_string(const Rep& rep);

}  // namespace fpt
