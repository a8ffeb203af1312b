#include "motcalc/bircalc.hpp"

#include "motcalc/errors.hpp"

#include <stdexcept>

namespace motcalc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_same_root(const Universe& u, ClassId a, ClassId b, const std::string& what) {
  if (!u.birational(a, b))
    throw ChainError(what + ": '" + u.label(a) + "' and '" + u.label(b) + "' are not declared birational");
}

}  // namespace

ClassId atom_source(const Atom& a) {
  return std::visit(overloaded{[](const OpenRestrict& r) { return r.ambient; },
                               [](const BlowUp& b) { return b.base; },
                               [](const DeclaredIso& i) { return i.source; }},
                    a);
}

ClassId atom_target(const Atom& a) {
  return std::visit(overloaded{[](const OpenRestrict& r) { return r.open; },
                               [](const BlowUp& b) { return b.result; },
                               [](const DeclaredIso& i) { return i.target; }},
                    a);
}

// ---------------------------------------------------------------------------

BirWord::BirWord(const Universe& u, ClassId source, ClassId target, std::vector<Letter> letters)
    : source_(source), target_(target), dimension_(u.dim(source)), letters_(std::move(letters)) {
  ClassId at = source;
  for (const Letter& l : letters_) {
    require_same_root(u, at, l.source(), "letter " + to_string(u, l) + " does not chain");
    if (u.dim(l.source()) != dimension_ || u.dim(l.target()) != dimension_)
      throw ChainError("letter " + to_string(u, l) + " leaves dimension " + std::to_string(dimension_));
    at = l.target();
  }
  require_same_root(u, at, target, "word does not end at its target");
  if (u.dim(target) != dimension_) throw ChainError("word source and target differ in dimension");
}

BirWord BirWord::single(const Universe& u, const Atom& a, bool inverse) {
  Letter l{a, inverse};
  return BirWord(u, l.source(), l.target(), {l});
}

BirWord compose(const Universe& u, const BirWord& w1, const BirWord& w2) {
  require_same_root(u, w1.target(), w2.source(), "cannot compose words");
  if (w1.dimension() != w2.dimension()) throw ChainError("cannot compose words of different dimensions");
  BirWord out;
  out.source_ = w1.source_;
  out.target_ = w2.target_;
  out.dimension_ = w1.dimension_;
  out.letters_ = w1.letters_;
  out.letters_.insert(out.letters_.end(), w2.letters_.begin(), w2.letters_.end());
  return out;
}

BirWord invert(const BirWord& w) {
  BirWord out;
  out.source_ = w.target_;
  out.target_ = w.source_;
  out.dimension_ = w.dimension_;
  out.letters_.assign(w.letters_.rbegin(), w.letters_.rend());
  for (Letter& l : out.letters_) l.inverse = !l.inverse;
  return out;
}

// ---------------------------------------------------------------------------

GroupElement tilde_c(const Universe&, const Letter& l) {
  GroupElement forward = std::visit(
      overloaded{[](const OpenRestrict& r) { return -r.complement; },
                 [](const BlowUp& b) {
                   return GroupElement::basis(b.exceptional) - GroupElement::basis(b.center);
                 },
                 [](const DeclaredIso&) { return GroupElement{}; }},
      l.atom);
  return l.inverse ? -forward : forward;
}

GroupElement tilde_c(const Universe& u, const BirWord& w) {
  GroupElement sum;
  for (const Letter& l : w.letters()) sum += tilde_c(u, l);
  return sum;
}

GroupElement top_components(const Universe& u, ClassId x, int n) {
  const ClassMeta& m = u.meta(x);
  if (m.dimension > n)
    throw ValidationError("class '" + u.label(x) + "' exceeds dimension " + std::to_string(n));
  if (m.dimension < n) return {};
  if (m.parts.empty()) return GroupElement::basis(u.root(x));
  GroupElement out;
  for (ClassId p : m.parts) out += top_components(u, p, n);
  return out;
}

GroupElement pi(const Universe& u, int n, const GroupElement& x) {
  GroupElement out;
  for (const auto& [cls, coeff] : x.terms()) out += top_components(u, cls, n).scaled(coeff);
  return out;
}

GroupElement c_direct(const Universe& u, const BirWord& w) {
  const int top = w.dimension() - 1;
  GroupElement sum;
  for (const Letter& l : w.letters()) {
    GroupElement created;
    GroupElement contracted;
    if (const auto* r = std::get_if<OpenRestrict>(&l.atom)) {
      for (const auto& [cls, coeff] : r->complement.terms()) contracted += top_components(u, cls, top).scaled(coeff);
    } else if (const auto* b = std::get_if<BlowUp>(&l.atom)) {
      created = top_components(u, b->exceptional, top);
      if (u.dim(b->center) == top) contracted = top_components(u, b->center, top);
    }
    sum += l.inverse ? contracted - created : created - contracted;
  }
  return sum;
}

GroupElement c(const Universe& u, const BirWord& w) {
  GroupElement direct = c_direct(u, w);
  if (w.dimension() == 0) return direct;
  GroupElement projected = pi(u, w.dimension() - 1, tilde_c(u, w));
  if (direct != projected)
    throw std::logic_error("c and pi(tilde_c) disagree on " + to_string(u, w) + ": " +
                           direct.to_string(u.labels()) + " vs " + projected.to_string(u.labels()));
  return direct;
}

// ---------------------------------------------------------------------------

void validate_atom(const Universe& u, const Atom& a) {
  std::visit(overloaded{
                 [&](const OpenRestrict& r) {
                   const int n = u.dim(r.ambient);
                   if (u.dim(r.open) != n) throw ValidationError("open subset must have the ambient dimension");
                   require_same_root(u, r.ambient, r.open, "open restriction");
                   for (const auto& [cls, coeff] : r.complement.terms())
                     if (u.dim(cls) >= n)
                       throw ValidationError("complement class '" + u.label(cls) + "' is not of lower dimension");
                 },
                 [&](const BlowUp& b) {
                   const int n = u.dim(b.base);
                   if (b.codim < 2) throw ValidationError("blow-up center must have codimension at least 2");
                   if (u.dim(b.center) != n - b.codim)
                     throw ValidationError("blow-up center '" + u.label(b.center) + "' has the wrong codimension");
                   if (u.dim(b.exceptional) != n - 1)
                     throw ValidationError("exceptional class '" + u.label(b.exceptional) + "' must have dimension " +
                                           std::to_string(n - 1));
                   if (u.dim(b.result) != n || u.dim(b.open_piece) != n)
                     throw ValidationError("blow-up result and open piece must have the base dimension");
                   require_same_root(u, b.base, b.result, "blow-up");
                   require_same_root(u, b.base, b.open_piece, "blow-up");
                 },
                 [&](const DeclaredIso& i) {
                   if (u.dim(i.source) != u.dim(i.target)) throw ValidationError("isomorphism changes dimension");
                   require_same_root(u, i.source, i.target, "isomorphism");
                 }},
             a);
}

BlowUp make_blowup(Universe& u, ClassId base, ClassId center, int codim, std::optional<std::string> result_label,
                   std::optional<ClassId> exceptional) {
  const int n = u.dim(base);
  if (codim < 2 || u.dim(center) != n - codim)
    throw ValidationError("cannot blow up '" + u.label(base) + "' along '" + u.label(center) + "' in codimension " +
                          std::to_string(codim));
  BlowUp b;
  b.base = base;
  b.center = center;
  b.codim = codim;
  b.exceptional = exceptional ? *exceptional : u.product(u.projective_space(codim - 1), center);

  // Copies: registering classes below may reallocate the metadata store.
  const FlagSet base_flags = u.meta(base).flags;
  const bool smooth_center = u.meta(center).flags.has(Flag::Smooth);
  const std::string label = result_label ? *result_label : "Bl[" + u.label(center) + "]" + u.label(base);
  if (auto existing = u.find(label)) {
    b.result = *existing;
  } else {
    ClassMeta m;
    m.dimension = n;
    m.flags = base_flags;
    m.flags.set(Flag::KTrivial, false);
    if (!smooth_center) m.flags.set(Flag::Smooth, false);
    b.result = u.register_class(label, std::move(m));
  }
  const std::string open_label = u.label(base) + "∖" + u.label(center);
  if (auto existing = u.find(open_label)) {
    b.open_piece = *existing;
  } else {
    ClassMeta m;
    m.dimension = n;
    m.flags = base_flags;
    m.flags.set(Flag::Projective, false).set(Flag::KTrivial, false);
    b.open_piece = u.register_class(open_label, std::move(m));
  }
  u.declare_birational(base, b.result);
  u.declare_birational(base, b.open_piece);
  validate_atom(u, b);
  return b;
}

OpenRestrict make_restriction(Universe& u, ClassId ambient, ClassId open, GroupElement complement) {
  if (u.dim(open) != u.dim(ambient)) throw ValidationError("open subset must have the ambient dimension");
  u.declare_birational(ambient, open);
  OpenRestrict r{ambient, open, std::move(complement)};
  validate_atom(u, r);
  return r;
}

DeclaredIso make_iso(Universe& u, ClassId source, ClassId target, bool pseudo) {
  if (u.dim(source) != u.dim(target)) throw ValidationError("isomorphism changes dimension");
  u.declare_birational(source, target);
  return DeclaredIso{source, target, pseudo};
}

BirWord strong_rational_witness(const Universe& u, ClassId x) {
  const int n = u.dim(x);
  auto divisor = u.affine_divisor(x);
  auto pn = u.find("P" + std::to_string(n));
  auto hyperplane = u.find("P" + std::to_string(n - 1));
  if (!divisor && pn && *pn == x) divisor = hyperplane;
  if (!divisor) throw ValidationError("no affine cell declared for '" + u.label(x) + "'");
  auto cell = u.find("A" + std::to_string(n));
  if (!cell || !pn || !hyperplane) throw ValidationError("affine and projective spaces of dimension " +
                                                         std::to_string(n) + " are not registered");
  OpenRestrict to_cell{x, *cell, GroupElement::basis(*divisor)};
  OpenRestrict into_pn{*pn, *cell, GroupElement::basis(*hyperplane)};
  validate_atom(u, to_cell);
  validate_atom(u, into_pn);
  return BirWord(u, x, *pn, {Letter{to_cell, false}, Letter{into_pn, true}});
}

BirWord pseudo_reg_conjugate(const Universe& u, const BirWord& alpha, const BirWord& gamma) {
  for (const Letter& l : gamma.letters()) {
    const auto* iso = std::get_if<DeclaredIso>(&l.atom);
    if (!iso || !iso->pseudo) throw ValidationError("conjugated word contains a letter that is not a pseudo-isomorphism");
  }
  require_same_root(u, alpha.target(), gamma.source(), "conjugation");
  require_same_root(u, alpha.target(), gamma.target(), "conjugation");
  return compose(u, compose(u, alpha, gamma), invert(alpha));
}

Atom product_atom(Universe& u, const Atom& a, ClassId w) {
  auto times = [&](ClassId x) { return u.product(x, w); };
  return std::visit(overloaded{[&](const OpenRestrict& r) -> Atom {
                                 GroupElement complement;
                                 for (const auto& [cls, coeff] : r.complement.terms())
                                   complement.add_term(times(cls), coeff);
                                 return OpenRestrict{times(r.ambient), times(r.open), complement};
                               },
                               [&](const BlowUp& b) -> Atom {
                                 return BlowUp{times(b.base),        times(b.center), b.codim,
                                               times(b.exceptional), times(b.result), times(b.open_piece)};
                               },
                               [&](const DeclaredIso& i) -> Atom {
                                 return DeclaredIso{times(i.source), times(i.target), i.pseudo};
                               }},
                    a);
}

BirWord product_word(Universe& u, const BirWord& w, ClassId factor) {
  std::vector<Letter> letters;
  for (const Letter& l : w.letters()) {
    letters.push_back(Letter{product_atom(u, l.atom, factor), l.inverse});
    validate_atom(u, letters.back().atom);
  }
  return BirWord(u, u.product(w.source(), factor), u.product(w.target(), factor), std::move(letters));
}

std::string to_string(const Universe& u, const Letter& l) {
  const std::string inv = l.inverse ? "⁻¹" : "";
  return std::visit(overloaded{[&](const OpenRestrict& r) {
                                 return "restrict" + inv + "(" + u.label(r.ambient) + " ⊃ " + u.label(r.open) + ")";
                               },
                               [&](const BlowUp& b) {
                                 return "blowup" + inv + "(" + u.label(b.base) + ", " + u.label(b.center) + ")";
                               },
                               [&](const DeclaredIso& i) {
                                 return std::string(i.pseudo ? "pseudo-iso" : "iso") + inv + "(" + u.label(i.source) +
                                        " → " + u.label(i.target) + ")";
                               }},
                    l.atom);
}

std::string to_string(const Universe& u, const BirWord& w) {
  std::string out = u.label(w.source()) + " ⇢ " + u.label(w.target()) + " [";
  for (std::size_t i = 0; i < w.letters().size(); ++i) out += (i ? ", " : "") + to_string(u, w.letters()[i]);
  return out + "]";
}

}  // namespace motcalc
