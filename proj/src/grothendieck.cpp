#include "motcalc/grothendieck.hpp"

#include "motcalc/errors.hpp"

#include <algorithm>

namespace motcalc {

GroupElement CutAndPaste::relator() const {
  GroupElement r = GroupElement::basis(total);
  r -= GroupElement::basis(open);
  r -= closed;
  return r;
}

// ---------------------------------------------------------------------------

TruncatedK0::TruncatedK0(int n, std::vector<ClassId> generators, std::vector<CutAndPaste> relations)
    : n_(n), generators_(std::move(generators)), relations_(std::move(relations)) {
  std::sort(generators_.begin(), generators_.end());
  generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
  for (const auto& r : relations_)
    if (!supports(r.relator())) throw ValidationError("relation references a class outside the fragment");
}

std::vector<GroupElement> TruncatedK0::relators() const {
  std::vector<GroupElement> out;
  for (const auto& r : relations_) {
    GroupElement rel = r.relator();
    if (!rel.is_zero()) out.push_back(std::move(rel));
  }
  return out;
}

bool TruncatedK0::contains(ClassId x) const { return std::binary_search(generators_.begin(), generators_.end(), x); }

bool TruncatedK0::supports(const GroupElement& x) const {
  return std::all_of(x.terms().begin(), x.terms().end(), [&](const auto& t) { return contains(t.first); });
}

PresentedGroup TruncatedK0::group() const {
  Coordinates coords;
  for (ClassId g : generators_) coords.include(GroupElement::basis(g));
  auto rels = relators();
  return PresentedGroup(generators_, coords.matrix(rels));
}

bool TruncatedK0::is_zero(const GroupElement& x) const {
  if (!supports(x)) throw ValidationError("element references a class outside the fragment");
  auto rels = relators();
  return member(x, rels).has_value();
}

// ---------------------------------------------------------------------------

void Fragment::add_class(const Universe& u, ClassId x) {
  if (u.dim(x) > n_)
    throw ValidationError("class '" + u.label(x) + "' exceeds the fragment dimension " + std::to_string(n_));
  classes_.insert(x);
}

void Fragment::add_relation(const Universe& u, const CutAndPaste& r) {
  const int d = u.dim(r.total);
  if (u.dim(r.open) != d)
    throw ValidationError("open piece '" + u.label(r.open) + "' must have the dimension of '" + u.label(r.total) + "'");
  for (const auto& [cls, coeff] : r.closed.terms())
    if (u.dim(cls) >= d && u.meta(r.total).parts.empty())
      throw ValidationError("closed piece '" + u.label(cls) + "' is not of lower dimension");
  add_class(u, r.total);
  add_class(u, r.open);
  for (const auto& [cls, coeff] : r.closed.terms()) add_class(u, cls);
  if (std::find(relations_.begin(), relations_.end(), r) == relations_.end()) relations_.push_back(r);
}

void Fragment::add_letter_relations(const Universe& u, const Atom& a) {
  if (const auto* r = std::get_if<OpenRestrict>(&a)) {
    add_relation(u, {r->ambient, r->open, r->complement});
  } else if (const auto* b = std::get_if<BlowUp>(&a)) {
    add_relation(u, {b->base, b->open_piece, GroupElement::basis(b->center)});
    add_relation(u, {b->result, b->open_piece, GroupElement::basis(b->exceptional)});
  } else if (const auto* i = std::get_if<DeclaredIso>(&a)) {
    if (i->pseudo) {
      add_class(u, i->source);
      add_class(u, i->target);
    } else {
      add_relation(u, {i->source, i->target, {}});
    }
  }
}

void Fragment::add_word(const Universe& u, const BirWord& w) {
  add_class(u, w.source());
  add_class(u, w.target());
  for (const Letter& l : w.letters()) add_letter_relations(u, l.atom);
  if (std::find(words_.begin(), words_.end(), w) == words_.end()) words_.push_back(w);
}

void Fragment::add_product_strata(Universe& u) {
  std::vector<ClassId> pending(classes_.begin(), classes_.end());
  while (!pending.empty()) {
    ClassId x = pending.back();
    pending.pop_back();
    const auto& factors = u.factors(x);
    auto proj = std::find_if(factors.begin(), factors.end(), [&](ClassId f) {
      auto m = u.projective_dimension(f);
      return m && *m > 0;
    });
    if (proj == factors.end()) continue;
    const int m = *u.projective_dimension(*proj);
    std::vector<ClassId> rest(factors.begin(), factors.end());
    rest.erase(rest.begin() + (proj - factors.begin()));
    ClassId r = u.product(rest);
    ClassId open = u.product(u.affine_space(m), r);
    ClassId closed = u.product(u.projective_space(m - 1), r);
    for (ClassId c : {open, closed})
      if (!classes_.contains(c)) pending.push_back(c);
    add_relation(u, {x, open, GroupElement::basis(closed)});
  }
}

TruncatedK0 Fragment::truncate(const Universe& u, int k) const {
  if (k > n_) throw ValidationError("cannot truncate above the fragment dimension");
  std::vector<ClassId> gens;
  for (ClassId c : classes_)
    if (u.dim(c) <= k) gens.push_back(c);
  std::vector<CutAndPaste> rels;
  for (const auto& r : relations_)
    if (u.dim(r.total) <= k) rels.push_back(r);
  return TruncatedK0(k, std::move(gens), std::move(rels));
}

// ---------------------------------------------------------------------------

GroupElement iota(const TruncatedK0& lower, const TruncatedK0& upper, const GroupElement& x) {
  if (lower.level() + 1 != upper.level()) throw ValidationError("iota needs consecutive levels");
  if (!lower.supports(x)) throw ValidationError("element is not supported on the lower fragment");
  for (ClassId g : lower.generators())
    if (!upper.contains(g)) throw ValidationError("lower fragment is not contained in the upper fragment");
  for (const auto& r : lower.relations())
    if (std::find(upper.relations().begin(), upper.relations().end(), r) == upper.relations().end())
      throw ValidationError("lower relations are not contained in the upper fragment");
  return x;
}

GroupElement pi_n(const Universe& u, const TruncatedK0& t, const GroupElement& x) {
  if (!t.supports(x)) throw ValidationError("element is not supported on the fragment");
  return pi(u, t.level(), x);
}

bool pi_well_defined(const Universe& u, const TruncatedK0& t) {
  for (const auto& r : t.relators())
    if (!pi(u, t.level(), r).is_zero()) return false;
  return true;
}

namespace {

// Basis of rowspan(rows) ∩ Z^{keep}: echelonize with the eliminated columns
// first and keep the rows whose pivots fall among the kept columns.
std::vector<GroupElement> intersect_with_coordinates(std::span<const GroupElement> rows,
                                                     const std::vector<ClassId>& eliminate,
                                                     const std::vector<ClassId>& keep) {
  std::vector<ClassId> order = eliminate;
  order.insert(order.end(), keep.begin(), keep.end());
  std::map<ClassId, std::size_t> col;
  for (std::size_t i = 0; i < order.size(); ++i) col.emplace(order[i], i);
  IntMatrix m(0, order.size());
  for (const auto& r : rows) {
    std::vector<Integer> dense(order.size());
    for (const auto& [id, c] : r.terms()) dense[col.at(id)] = c;
    m.append_row(dense);
  }
  IntMatrix h = hnf(m);
  std::vector<GroupElement> out;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    if (h.row_is_zero(r)) continue;
    bool old_only = true;
    for (std::size_t j = 0; j < eliminate.size() && old_only; ++j) old_only = h(r, j) == 0;
    if (!old_only) continue;
    GroupElement e;
    for (std::size_t j = eliminate.size(); j < order.size(); ++j) e.add_term(order[j], h(r, j));
    out.push_back(std::move(e));
  }
  return out;
}

// The group <sub> / <rels>, with rels ⊆ <sub>.
GroupInvariants subquotient_invariants(std::span<const GroupElement> sub, std::span<const GroupElement> rels) {
  std::vector<GroupElement> basis = lattice_basis(sub);
  IntMatrix m(0, basis.size());
  for (const auto& r : rels) {
    auto coeffs = member(r, basis);
    if (!coeffs) throw std::logic_error("relation lattice is not contained in the subgroup");
    m.append_row(*coeffs);
  }
  std::vector<BasisId> gens;
  for (std::uint32_t i = 0; i < basis.size(); ++i) gens.push_back(BasisId{i});
  return PresentedGroup(std::move(gens), std::move(m)).quotient_invariants();
}

}  // namespace

KernelResult ker_iota(const Universe& u, const TruncatedK0& lower, const TruncatedK0& upper,
                      std::span<const BirWord> endo_words) {
  std::vector<ClassId> fresh;
  for (ClassId g : upper.generators())
    if (!lower.contains(g)) fresh.push_back(g);
  auto upper_rels = upper.relators();
  auto lower_rels = lower.relators();
  for (const auto& r : lower_rels) iota(lower, upper, r);

  KernelResult out;
  out.kernel = intersect_with_coordinates(upper_rels, fresh, lower.generators());
  out.tilde_c = lower_rels;
  for (const BirWord& w : endo_words) {
    if (!w.is_endo() || w.dimension() != upper.level()) continue;
    GroupElement t = tilde_c(u, w);
    if (!lower.supports(t))
      throw ValidationError("ṽc of " + to_string(u, w) + " is not supported on the lower fragment");
    out.tilde_c.push_back(std::move(t));
  }
  out.contains = subgroup_contains(out.kernel, out.tilde_c);
  out.equal = out.contains && subgroup_contains(out.tilde_c, out.kernel);
  out.kernel_invariants = subquotient_invariants(out.kernel, lower_rels);
  return out;
}

ExactnessReport exactness_report(const Universe& u, const Fragment& f) {
  const int n = f.level();
  TruncatedK0 upper = f.build(u);
  TruncatedK0 lower = f.truncate(u, n - 1);

  ExactnessReport out;
  out.n = n;
  out.lower_invariants = lower.invariants();
  out.upper_invariants = upper.invariants();
  out.pi_well_defined = pi_well_defined(u, upper);

  // Im(ι): lower generators plus the upper relators.
  std::vector<GroupElement> image = upper.relators();
  for (ClassId g : lower.generators()) image.push_back(GroupElement::basis(g));

  // Ker(π) lifted to Z^{upper generators}.
  std::vector<ClassId> roots;
  std::vector<GroupElement> columns;
  for (ClassId g : upper.generators()) {
    GroupElement p = pi(u, n, GroupElement::basis(g));
    for (const auto& [r, c] : p.terms()) roots.push_back(r);
    columns.push_back(std::move(p));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  Coordinates root_coords;
  for (ClassId r : roots) root_coords.include(GroupElement::basis(r));
  IntMatrix projection = root_coords.matrix(columns);
  IntMatrix kernel = left_kernel(projection);
  Coordinates gen_coords;
  for (ClassId g : upper.generators()) gen_coords.include(GroupElement::basis(g));
  std::vector<GroupElement> ker_pi;
  for (std::size_t r = 0; r < kernel.rows(); ++r) ker_pi.push_back(gen_coords.sparse(kernel.row(r)));
  out.image_equals_kernel = subgroup_equal(image, ker_pi);

  std::vector<GroupElement> unit_roots;
  for (ClassId r : roots) unit_roots.push_back(GroupElement::basis(r));
  out.pi_surjective = subgroup_equal(columns, unit_roots);

  out.kernel = ker_iota(u, lower, upper, f.words());
  return out;
}

bool l_equivalence(const Universe& u, ClassId x, ClassId y, int d, const TruncatedK0& t) {
  if (x == y) return true;
  if (d < 0) throw ValidationError("L-exponent must be non-negative");
  if (d == 0) return t.is_zero(GroupElement::basis(x) - GroupElement::basis(y));
  auto affine = u.find("A" + std::to_string(d));
  if (!affine || u.affine_dimension(*affine) != d)
    throw ValidationError("A" + std::to_string(d) + " is not registered");
  std::array<ClassId, 2> px{*affine, x};
  std::array<ClassId, 2> py{*affine, y};
  auto lx = u.find_product(px);
  auto ly = u.find_product(py);
  if (!lx || !ly || !t.contains(*lx) || !t.contains(*ly))
    throw ValidationError("fragment lacks the products A" + std::to_string(d) + "×" + u.label(x) + " and A" +
                          std::to_string(d) + "×" + u.label(y));
  return t.is_zero(GroupElement::basis(*lx) - GroupElement::basis(*ly));
}

}  // namespace motcalc
