#pragma once

// Finite Galois quotients, their actions on geometric components, and
// integer-valued class functions.

#include "motcalc/abgroup.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace motcalc {

using Permutation = std::vector<std::uint32_t>;

Permutation compose(const Permutation& outer, const Permutation& inner);  // outer after inner
bool is_identity(const Permutation& p);

/// A finite group Γ, presented as the full list of its elements acting as
/// permutations on an auxiliary set. Closure, identity and inverses are
/// checked at construction.
class GaloisGroup {
 public:
  GaloisGroup();  // trivial group
  GaloisGroup(std::vector<std::string> names, std::vector<Permutation> elements);

  std::size_t order() const { return elements_.size(); }
  const std::string& name(std::size_t g) const { return names_[g]; }
  std::size_t index_of(const std::string& name) const;
  std::size_t identity() const { return identity_; }
  std::size_t multiply(std::size_t g, std::size_t h) const { return table_[g * order() + h]; }
  std::size_t inverse(std::size_t g) const { return inverses_[g]; }
  /// Index of the conjugacy class of g; classes numbered by first element.
  std::size_t conjugacy_class(std::size_t g) const { return class_of_[g]; }

 private:
  std::vector<std::string> names_;
  std::vector<Permutation> elements_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverses_;
  std::vector<std::size_t> class_of_;
  std::size_t identity_ = 0;
};

/// Action of Γ on the geometric components of a variety: action[g] is the
/// permutation induced by the g-th element of Γ.
struct GaloisSet {
  std::size_t size = 1;
  std::vector<Permutation> action;

  static GaloisSet trivial(const GaloisGroup& gamma, std::size_t size = 1);
  static GaloisSet product(const GaloisSet& a, const GaloisSet& b);

  /// Throws ValidationError unless action is a homomorphism Γ → Sym(size),
  /// transitive when `irreducible` is set.
  void validate(const GaloisGroup& gamma, bool irreducible) const;
  bool transitive() const;
  std::size_t fixed_points(std::size_t g) const;
};

/// Integer class function on Γ.
struct CharacterVector {
  std::vector<Integer> values;

  static CharacterVector zero(const GaloisGroup& gamma);
  /// Fixed-point character of the action.
  static CharacterVector permutation(const GaloisGroup& gamma, const GaloisSet& set);

  void validate(const GaloisGroup& gamma) const;
  bool is_zero() const;
  CharacterVector& operator+=(const CharacterVector& other);
  CharacterVector& operator-=(const CharacterVector& other);
  CharacterVector scaled(const Integer& factor) const;
  friend CharacterVector operator+(CharacterVector a, const CharacterVector& b) { return a += b; }
  friend CharacterVector operator-(CharacterVector a, const CharacterVector& b) { return a -= b; }
  friend bool operator==(const CharacterVector&, const CharacterVector&) = default;

  std::string to_string(const GaloisGroup& gamma) const;
};

}  // namespace motcalc
