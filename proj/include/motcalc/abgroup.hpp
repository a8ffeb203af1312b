#pragma once

// Exact integer linear algebra over interned bases: sparse free-group
// elements, dense integer matrices, Hermite and Smith normal forms, and
// finitely presented abelian groups.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace motcalc {

using Integer = boost::multiprecision::cpp_int;

/// Opaque handle into a BasisRegistry.
struct BasisId {
  std::uint32_t value = 0;
  friend auto operator<=>(const BasisId&, const BasisId&) = default;
};

/// Interns display labels. Equal labels yield the identical id.
class BasisRegistry {
 public:
  BasisId intern(std::string_view label);
  std::optional<BasisId> find(std::string_view label) const;
  const std::string& label(BasisId id) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, BasisId> index_;
};

/// Sparse integer combination of basis elements. No stored coefficient is zero.
class GroupElement {
 public:
  using Terms = std::map<BasisId, Integer>;

  GroupElement() = default;
  static GroupElement basis(BasisId id, Integer coeff = 1);

  const Integer& coefficient(BasisId id) const;
  void add_term(BasisId id, const Integer& coeff);
  bool is_zero() const { return terms_.empty(); }
  std::size_t support_size() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }

  GroupElement& operator+=(const GroupElement& other);
  GroupElement& operator-=(const GroupElement& other);
  GroupElement operator-() const;
  GroupElement scaled(const Integer& factor) const;

  friend GroupElement operator+(GroupElement a, const GroupElement& b) { return a += b; }
  friend GroupElement operator-(GroupElement a, const GroupElement& b) { return a -= b; }
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

  /// Renders as "[a] + 2[b] - [c]", sorted by id; "0" when empty.
  std::string to_string(const std::function<std::string(BasisId)>& label) const;
  std::string to_string(const BasisRegistry& registry) const;

 private:
  Terms terms_;
};

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<Integer> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Integer> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Integer> values);
  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[target] += factor * row[source]
  void add_row_multiple(std::size_t target, std::size_t source, const Integer& factor);
  void add_col_multiple(std::size_t target, std::size_t source, const Integer& factor);
  void negate_row(std::size_t r);
  void negate_col(std::size_t c);

  IntMatrix transposed() const;
  bool row_is_zero(std::size_t r) const;
  std::string to_string() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination. Square input.
Integer determinant(const IntMatrix& m);

struct HermiteResult {
  IntMatrix form;       ///< same shape as the input, zero rows last
  IntMatrix transform;  ///< unimodular, transform * input == form
  std::size_t rank = 0;
};

/// Row-style Hermite normal form.
///
/// Convention: rows are echelon with strictly increasing pivot columns, every
/// pivot is positive, entries above a pivot lie in [0, pivot), and zero rows
/// are moved to the bottom. The output keeps the input's shape.
IntMatrix hnf(const IntMatrix& m);
HermiteResult hnf_with_transform(const IntMatrix& m);

struct SmithResult {
  std::vector<Integer> diagonal;  ///< min(rows, cols) entries, d_i | d_{i+1}, zeros last
  IntMatrix left;                 ///< unimodular U
  IntMatrix right;                ///< unimodular V with U * m * V == diag
};

SmithResult snf(const IntMatrix& m);

/// Column layout shared by a collection of sparse elements.
struct Coordinates {
  std::vector<BasisId> columns;
  std::map<BasisId, std::size_t> index;

  static Coordinates covering(std::span<const GroupElement> elements);
  void include(const GroupElement& x);
  std::vector<Integer> dense(const GroupElement& x) const;
  GroupElement sparse(std::span<const Integer> values) const;
  IntMatrix matrix(std::span<const GroupElement> rows) const;
};

/// Coefficients expressing x as an integer combination of gens, if any.
std::optional<std::vector<Integer>> member(const GroupElement& x,
                                           std::span<const GroupElement> gens);

/// True iff the subgroups generated by a and b coincide.
bool subgroup_equal(std::span<const GroupElement> a, std::span<const GroupElement> b);

/// True iff <a> is contained in <b>.
bool subgroup_contains(std::span<const GroupElement> b, std::span<const GroupElement> a);

/// Canonical generators (HNF rows) of the subgroup spanned by gens.
std::vector<GroupElement> lattice_basis(std::span<const GroupElement> gens);

/// Integer left kernel: basis of {x : x * m == 0}.
IntMatrix left_kernel(const IntMatrix& m);

struct GroupInvariants {
  std::vector<Integer> torsion;  ///< invariant factors > 1, in divisibility order
  std::size_t free_rank = 0;
  friend bool operator==(const GroupInvariants&, const GroupInvariants&) = default;
  std::string to_string() const;
};

/// Abelian group Z^generators / rowspan(relations).
class PresentedGroup {
 public:
  PresentedGroup(std::vector<BasisId> generators, IntMatrix relations);

  const std::vector<BasisId>& generators() const { return generators_; }
  const IntMatrix& relations() const { return relations_; }
  std::vector<GroupElement> relators() const;

  GroupInvariants quotient_invariants() const;
  /// True iff x (over the generators) is zero in the quotient.
  bool is_trivial(const GroupElement& x) const;
  bool equal(const GroupElement& x, const GroupElement& y) const { return is_trivial(x - y); }

 private:
  std::vector<BasisId> generators_;
  IntMatrix relations_;
};

}  // namespace motcalc

template <>
struct std::hash<motcalc::BasisId> {
  std::size_t operator()(const motcalc::BasisId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
