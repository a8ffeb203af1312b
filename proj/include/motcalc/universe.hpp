#pragma once

// Registry of formal birational classes: metadata, product and projective
// space constructors, declared birational identifications kept in a
// union-find, and a three-valued distinctness oracle built from rigidity
// rules.

#include "motcalc/abgroup.hpp"
#include "motcalc/galois.hpp"
#include "motcalc/torsor.hpp"

#include <bitset>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace motcalc {

using ClassId = BasisId;

enum class Flag : unsigned {
  Smooth,
  Projective,
  Irreducible,
  GeometricallyReduced,
  KTrivial,
  SeparablyRationallyConnected,
};

std::string_view flag_name(Flag f);
Flag parse_flag(std::string_view name);

class FlagSet {
 public:
  FlagSet() = default;
  FlagSet(std::initializer_list<Flag> flags) {
    for (Flag f : flags) set(f);
  }
  bool has(Flag f) const { return bits_.test(static_cast<unsigned>(f)); }
  FlagSet& set(Flag f, bool on = true) {
    bits_.set(static_cast<unsigned>(f), on);
    return *this;
  }
  friend FlagSet operator&(FlagSet a, FlagSet b) {
    a.bits_ &= b.bits_;
    return a;
  }
  friend bool operator==(const FlagSet&, const FlagSet&) = default;
  std::vector<Flag> list() const;

 private:
  std::bitset<6> bits_;
};

inline FlagSet smooth_projective() {
  return {Flag::Smooth, Flag::Projective, Flag::Irreducible, Flag::GeometricallyReduced};
}

struct ClassMeta {
  int dimension = 0;
  FlagSet flags;
  std::optional<int> picard_rank;
  std::optional<std::int64_t> degree_invariant;  ///< e.g. H^3 of a K-trivial threefold
  std::optional<GaloisSet> components;           ///< geometric components with Γ-action
  std::optional<CharacterVector> ns_character;   ///< Néron–Severi character N(X)
  std::optional<ClassId> ruled_over;             ///< base curve of a ruled surface
  std::optional<std::vector<BasisId>> jacobian;  ///< indecomposable PPAV factors
  std::optional<TorsorClass> torsor;             ///< genus-one curve data
  std::vector<ClassId> parts;                    ///< k-irreducible components, if reducible
  std::vector<ClassId> not_isomorphic_to;        ///< declared non-isomorphisms
  std::optional<ClassId> fm_partner;             ///< declared Fourier–Mukai partner
  std::optional<std::string> model;              ///< explicit point-count model name
};

enum class Rule { A, B, C };
std::string_view rule_name(Rule r);

struct Distinctness {
  enum class Kind { Equal, Distinct, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Rule> rule;

  static Distinctness equal() { return {Kind::Equal, std::nullopt}; }
  static Distinctness distinct(Rule r) { return {Kind::Distinct, r}; }
  static Distinctness unknown() { return {Kind::Unknown, std::nullopt}; }
  bool is_distinct() const { return kind == Kind::Distinct; }
  std::string to_string() const;
  friend bool operator==(const Distinctness&, const Distinctness&) = default;
};

class Universe {
 public:
  explicit Universe(GaloisGroup gamma = {});

  // -- registration (load phase) ------------------------------------------
  ClassId register_class(std::string_view label, ClassMeta meta);
  ClassId point();
  ClassId projective_space(int n);
  ClassId affine_space(int n);
  /// Products are normalized as sorted multisets of prime factors, so the
  /// operation is commutative, associative and has the point as unit.
  ClassId product(ClassId a, ClassId b);
  ClassId product(std::span<const ClassId> factors);
  /// Lookup only; never registers.
  std::optional<ClassId> find_product(std::span<const ClassId> factors) const;
  /// Registers a genus-one curve carrying torsor data. Its Jacobian defaults
  /// to the base curve label.
  ClassId torsor_curve(std::string_view label, const TorsorClass& torsor);
  /// Registers J^k(C) for a torsor curve C. Reuses (and identifies with) an
  /// existing curve over the same torsor class up to sign when present.
  ClassId twist(ClassId curve, std::int64_t k, std::string_view label);
  void declare_birational(ClassId a, ClassId b);
  /// Records X \ D ≅ A^dim(X).
  void declare_affine_cell(ClassId x, ClassId divisor);
  BasisId ppav(std::string_view label);
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  // -- queries --------------------------------------------------------------
  std::size_t size() const { return meta_.size(); }
  std::optional<ClassId> find(std::string_view label) const { return labels_.find(label); }
  ClassId at(std::string_view label) const;
  const std::string& label(ClassId c) const { return labels_.label(c); }
  const ClassMeta& meta(ClassId c) const;
  int dim(ClassId c) const { return meta(c).dimension; }
  const BasisRegistry& labels() const { return labels_; }
  const BasisRegistry& ppav_labels() const { return ppav_; }
  const GaloisGroup& galois() const { return gamma_; }

  /// Sorted prime factors; empty for the point, {c} for a prime class.
  const std::vector<ClassId>& factors(ClassId c) const { return factors_.at(c.value); }
  std::optional<int> projective_dimension(ClassId c) const;
  std::optional<int> affine_dimension(ClassId c) const;
  std::optional<ClassId> affine_divisor(ClassId x) const;

  /// Representative of the birational class: a product of projective spaces
  /// if there is one, else a smooth projective member, else the earliest.
  ClassId root(ClassId c) const;
  bool birational(ClassId a, ClassId b) const { return root(a) == root(b); }
  /// Members of the birational class of c, ascending.
  std::vector<ClassId> members(ClassId c) const;
  /// First member of c's birational class whose metadata satisfies pred.
  template <typename Pred>
  std::optional<ClassId> member_where(ClassId c, Pred pred) const {
    for (ClassId m : members(c))
      if (pred(meta(m))) return m;
    return std::nullopt;
  }

  Distinctness distinct(ClassId a, ClassId b) const;

 private:
  void require_mutable(std::string_view what) const;
  ClassId insert(std::string_view label, ClassMeta meta, std::vector<ClassId> factors);
  void validate(const ClassMeta& meta, std::string_view label) const;
  ClassMeta product_meta(const std::vector<ClassId>& factors);
  std::string product_label(const std::vector<ClassId>& factors) const;
  void merge_roots(ClassId a, ClassId b);
  void close_under_products();

  std::optional<Rule> pair_rule(ClassId x, ClassId y) const;
  bool rigid_distinct(ClassId x, ClassId y) const;
  bool torsor_distinct(ClassId x, ClassId y) const;
  bool is_projective_space_root(ClassId r) const;
  bool is_src_root(ClassId r) const;

  GaloisGroup gamma_;
  BasisRegistry labels_;
  BasisRegistry ppav_;
  std::vector<ClassMeta> meta_;
  std::vector<std::vector<ClassId>> factors_;
  std::map<std::vector<ClassId>, ClassId> products_;
  std::map<int, ClassId> projective_;
  std::map<int, ClassId> affine_;
  std::map<ClassId, ClassId> affine_cells_;
  std::vector<ClassId> parent_;
  bool frozen_ = false;
};

}  // namespace motcalc
