#pragma once

// L-links: two blow-ups of strongly birational ambient varieties sharing a
// common top, with the witnesses for conditions (L1)-(L3), and the
// homomorphism they induce on groups of birational self-maps.

#include "motcalc/grothendieck.hpp"
#include "motcalc/pointcount.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace motcalc {

/// (L1) via the explicit models of left and right, counted over several
/// prime fields.
struct ModelWitness {
  std::vector<std::uint32_t> primes{2, 3, 5};
};

/// (L1) via cut-and-paste records in which [left] = [right] holds.
struct K0Witness {
  std::vector<CutAndPaste> relations;
};

using L1Witness = std::variant<ModelWitness, K0Witness>;

struct LinkSpec {
  std::string name;
  BlowUp blow_left;   ///< left ⇢ top
  BlowUp blow_right;  ///< right ⇢ top
  L1Witness witness_l1;
  BirWord witness_l2;  ///< γ: left ⇢ right with c(γ) = 0
  bool exceptional_override = false;  ///< exceptionals only birational to the product shape
};

class LLink {
 public:
  const std::string& name() const { return name_; }
  ClassId top() const { return blow_left_.result; }
  ClassId left() const { return blow_left_.base; }
  ClassId right() const { return blow_right_.base; }
  ClassId center_left() const { return blow_left_.center; }
  ClassId center_right() const { return blow_right_.center; }
  int m() const { return blow_left_.codim; }
  int m_prime() const { return blow_right_.codim; }
  ClassId exc_left() const { return blow_left_.exceptional; }
  ClassId exc_right() const { return blow_right_.exceptional; }
  const BlowUp& blow_left() const { return blow_left_; }
  const BlowUp& blow_right() const { return blow_right_; }
  const L1Witness& witness_l1() const { return witness_l1_; }
  const BirWord& witness_l2() const { return witness_l2_; }
  bool exceptional_override() const { return override_; }
  /// Cached c of the link map ψ: left ⇢ right.
  const GroupElement& c() const { return c_; }

 private:
  friend LLink make_link(const Universe& u, const ModelRegistry& models, LinkSpec spec);
  LLink(LinkSpec spec) : name_(std::move(spec.name)), blow_left_(spec.blow_left), blow_right_(spec.blow_right),
                         witness_l1_(std::move(spec.witness_l1)), witness_l2_(std::move(spec.witness_l2)),
                         override_(spec.exceptional_override) {}

  std::string name_;
  BlowUp blow_left_;
  BlowUp blow_right_;
  L1Witness witness_l1_;
  BirWord witness_l2_;
  bool override_ = false;
  GroupElement c_;
};

/// Validates shapes and witnesses. Failures raise ValidationError whose
/// message starts with the failed condition: "(L1)", "(L2)", "(L3)" or
/// "(shape)".
LLink make_link(const Universe& u, const ModelRegistry& models, LinkSpec spec);

/// [exc_left] - [exc_right] over birational roots.
GroupElement c_of_link(const Universe& u, const LLink& l);
/// ψ: left ⇢ top ⇢ right.
BirWord link_word(const Universe& u, const LLink& l);
/// ψ followed by γ⁻¹, a birational self-map of the left variety.
BirWord endo_word(const Universe& u, const LLink& l);

struct Nontriviality {
  enum class Kind { Yes, No, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Rule> rule;
  std::string to_string() const;
  friend bool operator==(const Nontriviality&, const Nontriviality&) = default;
};

Nontriviality nontrivial(const Universe& u, const LLink& l);

/// Adds the link's words and cut-and-paste records, the K0 witness if any,
/// and saturates with affine cells and product strata.
void add_link(Universe& u, Fragment& f, const LLink& l);
/// Adds [X] = [A^n] + [D] for declared affine cells and the product strata of
/// projective factors until nothing new appears.
void saturate(Universe& u, Fragment& f);

// -- builders (load phase) ----------------------------------------------------

/// Quadro-cubic link Q³ ⇢ P³ through a genus-one curve C with 5·[C] = 0 and
/// C' = J²(C). Registers the split quadric models when absent.
LLink elliptic_link(Universe& u, ModelRegistry& models, ClassId curve, const std::string& name,
                    std::optional<std::string> twist_label = std::nullopt);

/// P⁴ ⇢ P⁴ through singular models of Fourier–Mukai partner K3 surfaces.
LLink k3_link(Universe& u, ModelRegistry& models, ClassId s, ClassId s_prime, const std::string& name);

/// Link between the two G₂-Grassmannians through K-trivial threefolds of
/// degrees 14 and 42.
LLink g2_link(Universe& u, ModelRegistry& models, const std::string& name = "g2");

/// The link × W.
LLink stabilized_link(Universe& u, ModelRegistry& models, const LLink& l, ClassId w, const std::string& name);

// -- families and the Cremona homomorphism --------------------------------------

struct LinkFamily {
  std::string name;
  std::vector<const LLink*> links;
};

/// Checks that the centers {X_i, Y_i} partition the index set.
void validate_family(const Universe& u, const LinkFamily& f);

/// Row k holds the coordinates of π(c(words[k])) in the family basis: the
/// coefficient of the left exceptional class of each link.
std::vector<std::vector<Integer>> cremona_hom(const Universe& u, const LinkFamily& f, std::span<const BirWord> words);

/// The rows span Z^J.
bool spans_standard_lattice(const std::vector<std::vector<Integer>>& rows, std::size_t rank);

}  // namespace motcalc
