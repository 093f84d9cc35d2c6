// Fixed-vector machinery: a brute-force search oracle, the above-diagonal
// candidate construction, diagonal unipotence checks, the nilpotent and
// non-nilpotent constructions below the diagonal, a deterministic limit step
// for families of linear conditions, and the end-to-end pipeline.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpt/reduce.hpp"
#include "fpt/rep.hpp"
#include "fpt/series.hpp"

namespace fpt {

// Exhaustive search for a nonzero vector fixed by every phi(f), supported in
// degrees [lo, hi).  Stacks the exact linear conditions a0^{(r)} xi = 0 over
// every shift r whose support can meet the window and solves for the kernel;
// shifts outside that range annihilate the window trivially, so a returned
// vector is a genuine global fixed vector.  The kernel vector attached to
// the earliest free coefficient is returned, normalized so its lowest
// nonzero coefficient leads with 1.  Empty when the window holds no fixed
// vector; absence is a finding, not an error.
std::optional<SeriesVector> oracle_fixed_vector(const Rep& rep, int lo, int hi);

// Fixed-vector candidate extracted from support that sticks above the
// diagonal.
//
// applicable == false signals a lower triangular generator (nothing above
// the diagonal to exploit); the remaining fields are then unset.  Otherwise
// eta is exact with support in degrees >= 0, eta_0 != 0, and the vanishing
// (W tau^n eta)_m = 0 holds for every word W in the shifted generators,
// every n <= c and m < n, word translates included.
struct EtaAbove {
  bool applicable = false;
  SeriesVector eta;
  int i_star = 0;       // least row carrying support above the diagonal
  int j_star = 0;       // largest above-diagonal column in that row
  int a = 0;            // least row carrying support at column lag >= -c
  int b = 0;            // column of the seed monomial z t^b
  std::string witness;  // the word realizing a nonzero block at (a, b)
};
EtaAbove eta_above(const Rep& rep, int c);

// Increasing family of linear conditions on a series vector.  A functional
// reads one coordinate of one output coefficient,
//   value = (words[word] tau^shift eta)_row [coord],
// and the family at level n is the union of the stored vectors over keys
// <= n.  Word translates are already absorbed: translating a word by s turns
// (shift, row) into (shift - s, row - s), so only base words are stored.
struct ConstraintFamily {
  u32 p = 0;
  int d = 0;
  std::vector<BlockMatrix> words;
  struct Functional {
    int word = 0;
    int shift = 0;
    int row = 0;
    int coord = 0;
  };
  std::map<int, std::vector<Functional>> levels;
};

// Value of one functional on eta.  Empty when the coefficient it reads is
// not determined by eta's precision.
std::optional<u32> functional_value(const ConstraintFamily& fam,
                                    const ConstraintFamily::Functional& fn,
                                    const SeriesVector& eta);

// Family realizing the above-diagonal conditions: level c collects, for each
// closure word W and row i of W, the conditions (W tau^c eta)_i = 0 with
// i < c.  A level-c candidate from eta_above annihilates levels <= c.
ConstraintFamily family_above(const Rep& rep, int c_max);

// Family realizing the below-diagonal conditions on a lower triangular
// generator a0: level r collects (a0 tau^j eta)_i = 0 for -r < i < r and
// j > i - r.  Shifts j past the support of a0 (reads entirely below degree
// 0) are omitted: they vanish on every candidate supported in degrees >= 0.
ConstraintFamily family_general(const Rep& inner, int r_max);

// Deterministic limit of a candidate sequence: candidates[n] is exact with
// nonzero degree-0 coefficient and annihilates the family at level n.
// Coefficients are chosen degree by degree as the lexicographically least
// value shared by at least two surviving candidates (a lone survivor keeps
// its own tail), and the selected prefix is re-verified against every stored
// functional it determines.  The result carries precision `target`.  Throws
// ErrorKind::Stabilization when the candidate list is too short to pin the
// prefix down or the prefix fails a collected functional.
SeriesVector refine_limit(const ConstraintFamily& fam,
                          const std::map<int, SeriesVector>& candidates, int target);

// Outcome of the diagonal inspection of a lower triangular reduced rep.
struct DiagonalReport {
  bool pass = false;
  std::string reason;        // first failure; empty on pass
  int blocks_checked = 0;    // distinct diagonal positions inspected
  u64 products_checked = 0;  // length-d diagonal products verified zero
  bool exhaustive = false;   // product enumeration covered every tuple
};

// Verifies that every diagonal block of I + a0 within |i| <= window is
// unipotent, that the diagonal blocks commute pairwise and admit a joint
// strict triangularization, and that products of any d of them vanish
// (exhaustively when the tuple count is small, else a deterministic prefix).
// A failure is a finding about the rep, reported rather than thrown; only a
// non-lower-triangular generator is a contract violation.
DiagonalReport diagonal_check(const ReducedRep& rr, int window);

// Window-relative nilpotency of the algebra generated by the shifted
// generators a0^{(r)}, 0 <= r <= window.
struct NilpotencyReport {
  bool nilpotent_in_window = false;
  std::optional<int> n;  // least length with all products zero, when found
  int max_len = 0;       // explored length bound
  bool budget_hit = false;
};

// Reports the least N with every length-N product vanishing, or an
// inconclusive status when the length or rank budget runs out first.
// Vanishing of the nonnegative-shift closure covers all integer shifts:
// a word over arbitrary shifts is a diagonal translate of one over
// nonnegative shifts.
NilpotencyReport algebra_nilpotency(const ReducedRep& rr, int window, int max_len);

// Fixed vector when the algebra vanishes at length n: for n == 1 every
// vector is fixed and e_1 t^0 is returned; otherwise xi = B eta for a
// nonzero length-(n-1) word B and a monomial eta, and xi is verified to be
// annihilated by every effective shift conjugate of a0 (complete: shifts
// outside the inspected range cannot meet the support).  Throws
// ErrorKind::Inconsistency when no nonzero B exists despite n > 1 or the
// verification fails; both indicate a window artifact.
SeriesVector fixed_vector_nilpotent(const ReducedRep& rr, int n);

// Candidate for the non-nilpotent branch at level r >= 1: eta exact with
// support in degrees >= 0, eta_0 != 0, and (a0 tau^j eta)_i = 0 verified for
// every -r < i < r and j > i - r.  Built from a length-(r + a_r) d word B
// whose blocks all sit at column lag <= -q, q = r + a_r, translated so a
// deepest block lands in row 0; a_r is the least bound with no generator
// block at row < -a_r and lag > -r.  Throws ErrorKind::Branch when the
// closure vanishes within the needed length (use the nilpotent
// construction), ErrorKind::Budget when no stored word reaches the required
// lag (unless the conditions for this r are vacuous, in which case e_1 t^0
// is returned), and ErrorKind::Inconsistency when the constructed vector
// fails verification.
SeriesVector fixed_vector_general(const ReducedRep& rr, int r);

// One residual line of a certificate: (phi(t^r) - Id) xi checked to be zero,
// through all degrees when checked_through is empty, else below that degree.
struct ResidualEntry {
  int r = 0;
  std::optional<int> checked_through;
  bool pass = false;
};

struct FixedVectorResult {
  SeriesVector xi;
  bool exact = false;
  std::vector<ResidualEntry> residuals;
  std::vector<std::string> trace;  // pipeline phases and chosen indices
  bool oracle_checked = false;
  bool oracle_found = false;
  bool oracle_pass = false;
};

struct SolveOptions {
  int precision = 16;     // certified precision of a truncated result
  int window = 10;        // reduction and inspection window
  int max_len = 24;       // closure word-length budget
  int oracle_lo = 0;      // oracle cross-check window [oracle_lo, oracle_hi)
  int oracle_hi = 4;
  int refine_levels = 8;  // candidate levels fed to the limit step
  int residual_span = 4;  // residual report always covers [-span, span]
};

// End-to-end pipeline: validate, restrict to the invariant subgroup and
// rewrite in its basis, reduce to the member-space rep (lower triangular),
// inspect the diagonal, pick the branch by window-relative nilpotency, build
// the fixed vector, map it back through the module basis and the basis
// change, and re-verify residuals against the original rep.  The result is
// cross-checked against oracle_fixed_vector.  A thrown error names the stage
// that ran out of room; failure is always a resource bound, never a claim
// that no fixed vector exists.
FixedVectorResult solve(const Rep& rep, const SolveOptions& opt = {});

}  // namespace fpt
