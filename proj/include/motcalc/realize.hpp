#pragma once

// Realizations of birational-class sums: σ into Galois permutation
// characters and j into the free group on indecomposable PPAVs.

#include "motcalc/bircalc.hpp"

#include <string>

namespace motcalc {

struct Verdict {
  bool pass = false;
  std::string detail;
};

CharacterVector sigma(const Universe& u, const GroupElement& x);

/// σ(c(w)) against N(target) - N(source); σ(c(w)) = 0 is also required for
/// endo-words. Throws ValidationError if a Néron–Severi character is missing.
Verdict check_picnb(const Universe& u, const BirWord& w);

/// Over surface classes: a class ruled over a curve C maps to the Jacobian
/// factors of C, every other class to 0. The result is over ppav labels.
GroupElement j_realize(const Universe& u, const GroupElement& x);

/// j(c(w)) against J(target) - J(source) for threefold words, plus the
/// blow-up rule J(Bl) = J(base) + J(center) on every letter whose classes
/// carry Jacobian data.
Verdict check_jacobian(const Universe& u, const BirWord& w);

/// Declared Jacobian factors of a class as an element over ppav labels.
GroupElement jacobian_of(const Universe& u, ClassId x);

}  // namespace motcalc
