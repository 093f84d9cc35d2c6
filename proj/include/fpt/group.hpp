#pragma once

#include <string>
#include <vector>

#include "fpt/rep.hpp"
#include "fpt/series.hpp"

namespace fpt {

// Element (z, f) of the semidirect product of the vector module by the
// scalar series, the twist acting through phi.  The ambient rep is shared,
// not owned; two elements combine only when they point at the same one.
struct SDElement {
  const Rep* rep = nullptr;
  SeriesVector z;  // normal component, dimension d
  SeriesVector f;  // twist component, dimension 1
};

SDElement sd_identity(const Rep& rep);
SDElement sd_make(const Rep& rep, SeriesVector z, SeriesVector f);

// (z1 + phi(f1) z2, f1 + f2)
SDElement sd_mul(const SDElement& x, const SDElement& y);

// (-phi(-f) z, -f)
SDElement sd_inv(const SDElement& x);

// x y x^-1 y^-1
SDElement sd_commutator(const SDElement& x, const SDElement& y);

// (tau z, t f); an automorphism by the intertwining identity, contractive
// because both components gain a degree.
SDElement contraction_auto(const SDElement& x);

// True when both components are zero everywhere they are known.
bool sd_is_identity(const SDElement& x);

bool sd_eq_mod(const SDElement& x, const SDElement& y, int prec);

std::string sd_to_string(const SDElement& x);

struct CentralReport {
  bool central = false;
  std::string witness;  // generator of the first failing commutator
  int checked = 0;      // commutators evaluated
};

// Certifies that (xi, 0) is central: its commutators with the lattice
// generators (e_k t^j, 0) and with every effective twist generator (0, t^r)
// vanish on the sound window.
CentralReport central_certificate(const Rep& rep, const SeriesVector& xi);

struct ClassReport {
  bool bounded = false;         // filtration died within max_class
  int k = 0;                    // class bound when bounded, else max_class
  int precision = 0;
  std::vector<int> layer_dims;  // hull dimension carrying each layer from the second on
  std::string summary;
};

// Lower central series of the lattice subgroup (power-series vectors by
// power-series twists) modulo degree-`precision` tails in both components.
// Twist components of commutators cancel, so from the second layer on the
// filtration lives in the normal part; each layer is the span of the images
// of the previous one under every effective phi(t^r) - Id.  Layers are
// computed with enough padding above the reported precision that truncation
// never leaks into the verdict.
ClassReport nilpotency_class(const Rep& rep, int precision, int max_class);

}  // namespace fpt
