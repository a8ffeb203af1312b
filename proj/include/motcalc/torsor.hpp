#pragma once

// Genus-one curves modelled as torsor classes in a declared finite abelian
// group (a fragment of the Weil–Châtelet group of the base elliptic curve).

#include <cstdint>
#include <string>
#include <vector>

namespace motcalc {

struct TorsorClass {
  std::string base;               ///< label of the Jacobian elliptic curve E
  bool j_not_1728 = false;        ///< gates the curve-isomorphism model t ~ ±t
  std::vector<std::int64_t> ambient;  ///< invariant factors n_i of ⊕ Z/n_i
  std::vector<std::int64_t> element;  ///< reduced into [0, n_i)

  /// Validates shape and reduces the element.
  static TorsorClass make(std::string base, bool j_not_1728, std::vector<std::int64_t> ambient,
                          std::vector<std::int64_t> element);

  bool is_zero() const;
  bool killed_by(std::int64_t n) const;
  std::string to_string() const;
  friend bool operator==(const TorsorClass&, const TorsorClass&) = default;
};

/// J^k(C): the same base and group, element k·t.
TorsorClass jk_torsor(const TorsorClass& c, std::int64_t k);

/// Curve isomorphism of torsors, modelled as t ~ ±t. Throws ValidationError
/// when the base curves or ambient groups differ.
bool curves_isomorphic(const TorsorClass& a, const TorsorClass& b);

}  // namespace motcalc
