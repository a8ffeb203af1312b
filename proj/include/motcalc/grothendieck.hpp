#pragma once

// Truncated Grothendieck groups over finite fragments of a universe. All
// statements are lattice identities inside the fragment.

#include "motcalc/bircalc.hpp"

#include <set>
#include <vector>

namespace motcalc {

/// [total] = [open] + closed.
struct CutAndPaste {
  ClassId total;
  ClassId open;
  GroupElement closed;

  GroupElement relator() const;
  friend bool operator==(const CutAndPaste&, const CutAndPaste&) = default;
};

class TruncatedK0 {
 public:
  TruncatedK0(int n, std::vector<ClassId> generators, std::vector<CutAndPaste> relations);

  int level() const { return n_; }
  const std::vector<ClassId>& generators() const { return generators_; }
  const std::vector<CutAndPaste>& relations() const { return relations_; }
  std::vector<GroupElement> relators() const;
  bool contains(ClassId x) const;
  bool supports(const GroupElement& x) const;

  PresentedGroup group() const;
  GroupInvariants invariants() const { return group().quotient_invariants(); }
  /// x vanishes in the group.
  bool is_zero(const GroupElement& x) const;

 private:
  int n_;
  std::vector<ClassId> generators_;
  std::vector<CutAndPaste> relations_;
};

/// Accumulates classes, relations and words; materializes truncations.
class Fragment {
 public:
  explicit Fragment(int n) : n_(n) {}

  int level() const { return n_; }
  void add_class(const Universe& u, ClassId x);
  void add_relation(const Universe& u, const CutAndPaste& r);
  /// Registers the word and the cut-and-paste records of its letters.
  void add_word(const Universe& u, const BirWord& w);
  void add_letter_relations(const Universe& u, const Atom& a);
  /// Adds [P^m × R] = [A^m × R] + [P^{m-1} × R] for every fragment class with a
  /// projective-space factor, registering the product classes involved.
  void add_product_strata(Universe& u);

  const std::set<ClassId>& classes() const { return classes_; }
  const std::vector<CutAndPaste>& relations() const { return relations_; }
  const std::vector<BirWord>& words() const { return words_; }

  /// Classes of dimension <= k and relations among them.
  TruncatedK0 truncate(const Universe& u, int k) const;
  TruncatedK0 build(const Universe& u) const { return truncate(u, n_); }

 private:
  int n_;
  std::set<ClassId> classes_;
  std::vector<CutAndPaste> relations_;
  std::vector<BirWord> words_;
};

/// Generator inclusion from level n-1 into level n.
GroupElement iota(const TruncatedK0& lower, const TruncatedK0& upper, const GroupElement& x);
GroupElement pi_n(const Universe& u, const TruncatedK0& t, const GroupElement& x);
/// Every relator of t maps to zero under pi_n.
bool pi_well_defined(const Universe& u, const TruncatedK0& t);

struct KernelResult {
  std::vector<GroupElement> kernel;    ///< basis of the preimage of Ker(ι) in Z^{lower generators}
  std::vector<GroupElement> tilde_c;   ///< ṽc of the endo-words plus the lower relators
  bool contains = false;               ///< kernel ⊇ tilde_c
  bool equal = false;
  GroupInvariants kernel_invariants;   ///< Ker(ι) as an abstract group
};

KernelResult ker_iota(const Universe& u, const TruncatedK0& lower, const TruncatedK0& upper,
                      std::span<const BirWord> endo_words);

struct ExactnessReport {
  int n = 0;
  GroupInvariants lower_invariants;
  GroupInvariants upper_invariants;
  bool pi_well_defined = false;
  bool pi_surjective = false;
  bool image_equals_kernel = false;  ///< Im(ι_{n-1}) = Ker(π_n)
  KernelResult kernel;
};

/// Evaluated at the fragment's level n against its truncation to n-1, using
/// the registered endo-words of dimension n.
ExactnessReport exactness_report(const Universe& u, const Fragment& f);

/// Whether L^d([x] - [y]) lies in the relation lattice, with L acting as
/// [X] ↦ [A^d × X]. Throws ValidationError when the products are missing.
bool l_equivalence(const Universe& u, ClassId x, ClassId y, int d, const TruncatedK0& t);

}  // namespace motcalc
