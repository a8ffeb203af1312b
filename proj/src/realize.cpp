#include "motcalc/realize.hpp"

#include "motcalc/errors.hpp"

namespace motcalc {

CharacterVector sigma(const Universe& u, const GroupElement& x) {
  CharacterVector out = CharacterVector::zero(u.galois());
  for (const auto& [cls, coeff] : x.terms()) {
    // The Galois set of geometric components is a birational invariant.
    auto holder = u.member_where(cls, [](const ClassMeta& m) { return m.components.has_value(); });
    GaloisSet set = holder ? *u.meta(*holder).components : GaloisSet::trivial(u.galois());
    out += CharacterVector::permutation(u.galois(), set).scaled(coeff);
  }
  return out;
}

Verdict check_picnb(const Universe& u, const BirWord& w) {
  const auto& ns_source = u.meta(w.source()).ns_character;
  const auto& ns_target = u.meta(w.target()).ns_character;
  if (!ns_source || !ns_target)
    throw ValidationError("Néron–Severi character missing on '" +
                          u.label(ns_source ? w.target() : w.source()) + "'");
  CharacterVector lhs = sigma(u, c(u, w));
  CharacterVector rhs = *ns_target - *ns_source;
  Verdict v;
  v.pass = lhs == rhs && (!w.is_endo() || lhs.is_zero());
  v.detail = "sigma(c) = " + lhs.to_string(u.galois()) + ", N(target) - N(source) = " + rhs.to_string(u.galois());
  return v;
}

GroupElement jacobian_of(const Universe& u, ClassId x) {
  const ClassMeta& m = u.meta(x);
  if (m.dimension == 0) return {};
  std::optional<ClassId> holder;
  if (m.jacobian) holder = x;
  else if (m.dimension == 1)
    // Curves: the Jacobian of the smooth projective model is a birational invariant.
    holder = u.member_where(x, [](const ClassMeta& cm) { return cm.jacobian.has_value(); });
  if (!holder) throw ValidationError("Jacobian metadata missing on '" + u.label(x) + "'");
  GroupElement out;
  for (BasisId a : *u.meta(*holder).jacobian) out.add_term(a, 1);
  return out;
}

GroupElement j_realize(const Universe& u, const GroupElement& x) {
  GroupElement out;
  for (const auto& [cls, coeff] : x.terms()) {
    auto ruled = u.member_where(cls, [](const ClassMeta& m) { return m.ruled_over.has_value(); });
    if (!ruled) continue;
    out += jacobian_of(u, *u.meta(*ruled).ruled_over).scaled(coeff);
  }
  return out;
}

Verdict check_jacobian(const Universe& u, const BirWord& w) {
  Verdict v;
  v.pass = true;
  for (const Letter& l : w.letters()) {
    const auto* b = std::get_if<BlowUp>(&l.atom);
    if (!b || !u.meta(b->base).jacobian || !u.meta(b->result).jacobian || u.dim(b->center) > 1) continue;
    GroupElement expected = jacobian_of(u, b->base) + jacobian_of(u, b->center);
    if (jacobian_of(u, b->result) != expected) {
      v.pass = false;
      v.detail = "J(" + u.label(b->result) + ") differs from J(" + u.label(b->base) + ") + J(" + u.label(b->center) +
                 "); ";
    }
  }
  GroupElement lhs = j_realize(u, c(u, w));
  GroupElement rhs = jacobian_of(u, w.target()) - jacobian_of(u, w.source());
  v.pass = v.pass && lhs == rhs;
  v.detail += "j(c) = " + lhs.to_string(u.ppav_labels()) + ", J(target) - J(source) = " + rhs.to_string(u.ppav_labels());
  return v;
}

}  // namespace motcalc
