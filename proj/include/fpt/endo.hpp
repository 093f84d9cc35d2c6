// Lazy continuous endomorphisms of the Laurent module: evaluator plus block
// oracle, constructors from finite block matrices and from convergent image
// sequences, and the change-of-basis automorphism attached to a tidy subgroup.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fpt/block.hpp"
#include "fpt/subgroup.hpp"

namespace fpt {

// An endomorphism given by behaviour rather than by data.  eval(z, N) returns
// the image of z, either exact or truncated; when z is exact the result is
// determined at least through degree N-1.  block(i, j) is the d x d matrix of
// the component mapping degree-j input coefficients to degree-i output
// coefficients.  Both are pure and may be called concurrently.
struct LazyEndo {
  u32 p = 0;
  int d = 0;
  std::string tag;
  std::function<SeriesVector(const SeriesVector&, int)> eval;
  std::function<MatFp(int, int)> block;
};

LazyEndo endo_from_blocks(const BlockMatrix& a);

// Materializes the block oracle on an inclusive window.
BlockMatrix lazy_window(const LazyEndo& a, int i_lo, int i_hi, int j_lo, int j_hi);

// Composition f after g.  delta_min_f certifies that every nonzero block
// (i, j) of f has i - j >= delta_min_f, which bounds how much precision the
// outer factor can consume.
LazyEndo lazy_compose(const LazyEndo& f, int delta_min_f, const LazyEndo& g);

// A Z-indexed family of image vectors whose lower degrees grow without bound:
// for every degree D, every at(n) with n >= cutoff(D) is supported strictly
// above D.  cutoff must be monotone nondecreasing.
struct VectorSeq {
  std::function<SeriesVector(int)> at;
  std::function<int(int)> cutoff;
};

// The unique continuous endomorphism sending shift^j(b_k) to at(k + j*d),
// where b is the tidy basis.  Input vectors are peeled by basis_expand; the
// cutoff certificate truncates the image sum at the requested precision.
LazyEndo make_endo(const TidyBasis& tb, const VectorSeq& seq);

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

// Claimed tail-vanishing data for a Z x Z block matrix:
//   rows:   block (i, j) = 0 for j > row_bound(i)
//   cols:   block (i, j) = 0 for i < col_floor(j)
//   corner: block (i, j) = 0 whenever i < corner_i and j > corner_j
struct TailWitness {
  std::function<int(int)> row_bound;
  std::function<int(int)> col_floor;
  int corner_i = 0;
  int corner_j = 0;
};

// Per-condition outcome of scanning a window against a TailWitness.  Fail
// carries the offending block position; Inconclusive means the window does
// not intersect the region the witness claims to be zero.
struct MReport {
  Verdict m1 = Verdict::Inconclusive;
  Verdict m2 = Verdict::Inconclusive;
  Verdict m3 = Verdict::Inconclusive;
  std::optional<BlockKey> m1_fail, m2_fail, m3_fail;
  bool all_pass() const { return m1 == Verdict::Pass && m2 == Verdict::Pass && m3 == Verdict::Pass; }
};

// Checks the three tail conditions on the inclusive window [i_lo, i_hi] x
// [j_lo, j_hi] of a lazy endomorphism against claimed witnesses.
MReport check_m_conditions(const LazyEndo& a, int i_lo, int i_hi, int j_lo, int j_hi,
                           const TailWitness& wit);
// Finite support satisfies all three conditions outright.
MReport check_m_conditions(const BlockMatrix& a);

// Change-of-basis automorphism for a tidy subgroup V: fwd maps shift^j(e_k)
// to shift^j(b_k) and carries the standard lattice onto V; inv is its
// inverse.  fwd is exact on exact input; inv truncates when the expansion of
// the input over b does not terminate.
struct BasisChange {
  TidyBasis tb;
  LazyEndo fwd;
  LazyEndo inv;
};

BasisChange change_basis(const CompactOpenSubgroup& V);

}  // namespace fpt
