#pragma once

// Birational maps as composable words of elementary letters, with the
// invariants ṽc (over truncated classes) and c (over birational classes of
// dimension n-1).

#include "motcalc/universe.hpp"

#include <string>
#include <variant>
#include <vector>

namespace motcalc {

/// Forward: the restriction X ⇢ U. Inverse: the open immersion U ↪ X.
struct OpenRestrict {
  ClassId ambient;
  ClassId open;
  GroupElement complement;  ///< [X \ U] over classes of dimension < dim X
  friend bool operator==(const OpenRestrict&, const OpenRestrict&) = default;
};

/// Forward: base ⇢ result, where result is the blow-up of base along center.
struct BlowUp {
  ClassId base;
  ClassId center;
  int codim = 2;
  ClassId exceptional;
  ClassId result;
  ClassId open_piece;  ///< base \ center ≅ result \ exceptional
  friend bool operator==(const BlowUp&, const BlowUp&) = default;
};

/// Isomorphism, or pseudo-isomorphism when `pseudo` is set.
struct DeclaredIso {
  ClassId source;
  ClassId target;
  bool pseudo = false;
  friend bool operator==(const DeclaredIso&, const DeclaredIso&) = default;
};

using Atom = std::variant<OpenRestrict, BlowUp, DeclaredIso>;

ClassId atom_source(const Atom& a);
ClassId atom_target(const Atom& a);

struct Letter {
  Atom atom;
  bool inverse = false;

  ClassId source() const { return inverse ? atom_target(atom) : atom_source(atom); }
  ClassId target() const { return inverse ? atom_source(atom) : atom_target(atom); }
  friend bool operator==(const Letter&, const Letter&) = default;
};

class BirWord {
 public:
  /// Checks that letters chain up to birational root and share one dimension.
  BirWord(const Universe& u, ClassId source, ClassId target, std::vector<Letter> letters);
  static BirWord identity(const Universe& u, ClassId x) { return BirWord(u, x, x, {}); }
  static BirWord single(const Universe& u, const Atom& a, bool inverse = false);

  ClassId source() const { return source_; }
  ClassId target() const { return target_; }
  int dimension() const { return dimension_; }
  const std::vector<Letter>& letters() const { return letters_; }
  /// Source and target are the same class (not merely birational).
  bool is_endo() const { return source_ == target_; }
  friend bool operator==(const BirWord&, const BirWord&) = default;

 private:
  BirWord() = default;
  friend BirWord compose(const Universe&, const BirWord&, const BirWord&);
  friend BirWord invert(const BirWord&);

  ClassId source_;
  ClassId target_;
  int dimension_ = 0;
  std::vector<Letter> letters_;
};

/// w1 followed by w2.
BirWord compose(const Universe& u, const BirWord& w1, const BirWord& w2);
BirWord invert(const BirWord& w);

GroupElement tilde_c(const Universe& u, const BirWord& w);
GroupElement tilde_c(const Universe& u, const Letter& l);

/// c evaluated letter by letter, without passing through ṽc. Throws
/// std::logic_error if the result disagrees with pi(n-1, tilde_c(w)).
GroupElement c(const Universe& u, const BirWord& w);
GroupElement c_direct(const Universe& u, const BirWord& w);

/// Projection to dimension-n birational classes; reducible classes expand
/// into their components.
GroupElement pi(const Universe& u, int n, const GroupElement& x);

/// Top-dimensional components of x as birational roots, with multiplicity.
GroupElement top_components(const Universe& u, ClassId x, int n);

// -- builders (load phase) ----------------------------------------------------

/// Registers (or reuses) the blow-up result, the default exceptional divisor
/// P^{codim-1} × center and the open piece, and declares birationalities.
BlowUp make_blowup(Universe& u, ClassId base, ClassId center, int codim,
                   std::optional<std::string> result_label = std::nullopt,
                   std::optional<ClassId> exceptional = std::nullopt);
OpenRestrict make_restriction(Universe& u, ClassId ambient, ClassId open, GroupElement complement);
DeclaredIso make_iso(Universe& u, ClassId source, ClassId target, bool pseudo);

/// Re-validates an atom against the universe (used for atoms read from files).
void validate_atom(const Universe& u, const Atom& a);

/// X ⇢ A^n ↪ P^n using the declared affine cell X \ D ≅ A^n. For X = P^n the
/// hyperplane P^{n-1} is used when no cell is declared.
BirWord strong_rational_witness(const Universe& u, ClassId x);

/// α, then γ, then α⁻¹. γ must consist of pseudo-isomorphisms and start and
/// end at target(α).
BirWord pseudo_reg_conjugate(const Universe& u, const BirWord& alpha, const BirWord& gamma);

/// The word w × Id_W. Registers the required product classes.
BirWord product_word(Universe& u, const BirWord& w, ClassId factor);
Atom product_atom(Universe& u, const Atom& a, ClassId factor);

std::string to_string(const Universe& u, const Letter& l);
std::string to_string(const Universe& u, const BirWord& w);

}  // namespace motcalc
