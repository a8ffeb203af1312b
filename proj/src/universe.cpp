#include "motcalc/universe.hpp"

#include "motcalc/errors.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace motcalc {

namespace {

constexpr std::array<std::string_view, 6> kFlagNames = {
    "smooth", "projective", "irreducible", "geometrically-reduced", "K-trivial",
    "separably-rationally-connected"};

}  // namespace

std::string_view flag_name(Flag f) { return kFlagNames.at(static_cast<unsigned>(f)); }

Flag parse_flag(std::string_view name) {
  for (unsigned i = 0; i < kFlagNames.size(); ++i)
    if (kFlagNames[i] == name) return static_cast<Flag>(i);
  throw ValidationError("unknown flag '" + std::string(name) + "'");
}

std::vector<Flag> FlagSet::list() const {
  std::vector<Flag> out;
  for (unsigned i = 0; i < kFlagNames.size(); ++i)
    if (bits_.test(i)) out.push_back(static_cast<Flag>(i));
  return out;
}

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::A: return "Rule A";
    case Rule::B: return "Rule B";
    case Rule::C: return "Rule C";
  }
  return "?";
}

std::string Distinctness::to_string() const {
  switch (kind) {
    case Kind::Equal: return "Equal";
    case Kind::Unknown: return "Unknown";
    case Kind::Distinct: return "Distinct(" + std::string(rule_name(*rule)) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Universe::Universe(GaloisGroup gamma) : gamma_(std::move(gamma)) {
  ClassMeta pt;
  pt.flags = smooth_projective();
  pt.flags.set(Flag::SeparablyRationallyConnected);
  insert("pt", std::move(pt), {});
  projective_.emplace(0, ClassId{0});
  affine_.emplace(0, ClassId{0});
}

void Universe::require_mutable(std::string_view what) const {
  if (frozen_) throw ValidationError("universe is frozen: cannot " + std::string(what));
}

ClassId Universe::insert(std::string_view label, ClassMeta meta, std::vector<ClassId> factors) {
  if (labels_.find(label)) throw ValidationError("duplicate class label '" + std::string(label) + "'");
  ClassId id = labels_.intern(label);
  meta_.push_back(std::move(meta));
  if (factors.empty() && id.value != 0) factors = {id};
  factors_.push_back(std::move(factors));
  parent_.push_back(id);
  return id;
}

void Universe::validate(const ClassMeta& meta, std::string_view label) const {
  const std::string where = "class '" + std::string(label) + "': ";
  auto known = [&](ClassId c) { return c.value < meta_.size(); };
  if (meta.dimension < 0) throw ValidationError(where + "negative dimension");
  if (meta.picard_rank) {
    if (!meta.flags.has(Flag::Projective)) throw ValidationError(where + "picard_rank on a non-projective class");
    if (*meta.picard_rank <= 0) throw ValidationError(where + "picard_rank must be positive");
  }
  if (meta.components) meta.components->validate(gamma_, meta.flags.has(Flag::Irreducible));
  if (meta.ns_character) meta.ns_character->validate(gamma_);
  if (meta.ruled_over) {
    if (!known(*meta.ruled_over) || meta_[meta.ruled_over->value].dimension != 1)
      throw ValidationError(where + "ruled_over must name a curve");
  }
  if (meta.jacobian && meta.dimension == 1 && meta.flags.has(Flag::Irreducible) && meta.jacobian->size() > 1)
    throw ValidationError(where + "the Jacobian of an irreducible curve is indecomposable");
  if (meta.torsor && meta.dimension != 1) throw ValidationError(where + "torsor data on a non-curve");
  if (!meta.parts.empty() && meta.flags.has(Flag::Irreducible))
    throw ValidationError(where + "irreducible class cannot list components");
  for (ClassId p : meta.parts) {
    if (!known(p)) throw ValidationError(where + "unknown component");
    if (meta_[p.value].dimension > meta.dimension) throw ValidationError(where + "component of larger dimension");
  }
  for (ClassId p : meta.not_isomorphic_to)
    if (!known(p)) throw ValidationError(where + "unknown class in not_isomorphic_to");
  if (meta.fm_partner && !known(*meta.fm_partner)) throw ValidationError(where + "unknown fm_partner");
}

ClassId Universe::register_class(std::string_view label, ClassMeta meta) {
  require_mutable("register '" + std::string(label) + "'");
  validate(meta, label);
  return insert(label, std::move(meta), {});
}

ClassId Universe::point() { return ClassId{0}; }

ClassId Universe::projective_space(int n) {
  if (n < 0) throw ValidationError("negative projective dimension");
  if (auto it = projective_.find(n); it != projective_.end()) return it->second;
  require_mutable("register P" + std::to_string(n));
  ClassMeta m;
  m.dimension = n;
  m.flags = smooth_projective();
  m.flags.set(Flag::SeparablyRationallyConnected);
  m.picard_rank = 1;
  m.ns_character = CharacterVector::zero(gamma_);
  for (auto& v : m.ns_character->values) v = 1;
  m.jacobian = std::vector<BasisId>{};
  ClassId id = register_class("P" + std::to_string(n), std::move(m));
  projective_.emplace(n, id);
  return id;
}

ClassId Universe::affine_space(int n) {
  if (n < 0) throw ValidationError("negative affine dimension");
  if (auto it = affine_.find(n); it != affine_.end()) return it->second;
  require_mutable("register A" + std::to_string(n));
  ClassMeta m;
  m.dimension = n;
  m.flags = {Flag::Smooth, Flag::Irreducible, Flag::GeometricallyReduced};
  ClassId id = register_class("A" + std::to_string(n), std::move(m));
  affine_.emplace(n, id);
  // A^n is the open cell of P^n.
  declare_birational(id, projective_space(n));
  return id;
}

std::optional<int> Universe::projective_dimension(ClassId c) const {
  for (const auto& [n, id] : projective_)
    if (id == c) return n;
  return std::nullopt;
}

std::optional<int> Universe::affine_dimension(ClassId c) const {
  for (const auto& [n, id] : affine_)
    if (id == c) return n;
  return std::nullopt;
}

std::string Universe::product_label(const std::vector<ClassId>& factors) const {
  // Projective spaces first, then affine spaces, then by registration order.
  std::vector<ClassId> ordered = factors;
  auto key = [&](ClassId c) {
    if (auto n = projective_dimension(c)) return std::make_tuple(0, *n, c.value);
    if (auto n = affine_dimension(c)) return std::make_tuple(1, *n, c.value);
    return std::make_tuple(2, 0, c.value);
  };
  std::stable_sort(ordered.begin(), ordered.end(), [&](ClassId a, ClassId b) { return key(a) < key(b); });
  std::string out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i) out += "×";
    out += label(ordered[i]);
  }
  return out;
}

ClassMeta Universe::product_meta(const std::vector<ClassId>& factors) {
  ClassMeta m;
  m.flags = FlagSet{Flag::Smooth, Flag::Projective, Flag::Irreducible, Flag::GeometricallyReduced,
                    Flag::KTrivial, Flag::SeparablyRationallyConnected};
  bool any_components = false;
  std::vector<ClassId> curves;
  std::size_t lines = 0;
  for (ClassId f : factors) {
    const ClassMeta& fm = meta(f);
    m.dimension += fm.dimension;
    m.flags = m.flags & fm.flags;
    any_components = any_components || fm.components.has_value();
    if (projective_dimension(f) == 1) ++lines;
    else if (fm.dimension == 1) curves.push_back(f);
  }
  if (any_components) {
    GaloisSet acc = GaloisSet::trivial(gamma_);
    for (ClassId f : factors) {
      const ClassMeta& fm = meta(f);
      acc = GaloisSet::product(acc, fm.components ? *fm.components : GaloisSet::trivial(gamma_));
    }
    m.components = std::move(acc);
  }
  if (factors.size() == 2 && lines >= 1) {
    if (curves.size() == 1) m.ruled_over = curves.front();
    else if (lines == 2) m.ruled_over = projective_dimension(factors.front()) ? factors.front() : factors.back();
  }
  return m;
}

ClassId Universe::product(ClassId a, ClassId b) {
  std::array<ClassId, 2> pair{a, b};
  return product(pair);
}

namespace {

std::vector<ClassId> merged_factors(const Universe& u, std::span<const ClassId> inputs) {
  std::vector<ClassId> merged;
  for (ClassId c : inputs) {
    const auto& f = u.factors(c);
    merged.insert(merged.end(), f.begin(), f.end());
  }
  std::sort(merged.begin(), merged.end());
  return merged;
}

}  // namespace

std::optional<ClassId> Universe::find_product(std::span<const ClassId> inputs) const {
  std::vector<ClassId> merged = merged_factors(*this, inputs);
  if (merged.empty()) return ClassId{0};
  if (merged.size() == 1) return merged.front();
  if (auto it = products_.find(merged); it != products_.end()) return it->second;
  return std::nullopt;
}

ClassId Universe::product(std::span<const ClassId> inputs) {
  if (auto found = find_product(inputs)) return *found;
  std::vector<ClassId> merged = merged_factors(*this, inputs);

  const std::string name = product_label(merged);
  require_mutable("register product " + name);
  ClassMeta m = product_meta(merged);

  // A product of reducible classes decomposes into products of components.
  std::vector<std::vector<ClassId>> part_lists{{}};
  bool reducible = false;
  for (ClassId f : merged) {
    const auto& parts = meta(f).parts;
    std::vector<ClassId> options = parts.empty() ? std::vector<ClassId>{f} : parts;
    reducible = reducible || !parts.empty();
    std::vector<std::vector<ClassId>> next;
    for (const auto& prefix : part_lists)
      for (ClassId o : options) {
        auto extended = prefix;
        extended.push_back(o);
        next.push_back(std::move(extended));
      }
    part_lists = std::move(next);
  }
  if (reducible) {
    m.flags.set(Flag::Irreducible, false);
    for (const auto& combo : part_lists) m.parts.push_back(product(combo));
  }
  if (m.ruled_over) m.flags.set(Flag::SeparablyRationallyConnected, false);
  validate(m, name);
  ClassId id = insert(name, std::move(m), merged);
  products_.emplace(merged, id);
  close_under_products();
  return id;
}

ClassId Universe::torsor_curve(std::string_view label, const TorsorClass& torsor) {
  if (auto existing = find(label)) {
    const auto& m = meta(*existing);
    if (m.torsor && *m.torsor == torsor) return *existing;
    throw ValidationError("duplicate class label '" + std::string(label) + "'");
  }
  ClassMeta m;
  m.dimension = 1;
  m.flags = smooth_projective();
  m.flags.set(Flag::KTrivial);
  m.picard_rank = 1;
  m.torsor = torsor;
  m.jacobian = std::vector<BasisId>{ppav(torsor.base)};
  ClassId id = register_class(label, std::move(m));
  for (std::uint32_t v = 0; v + 1 < meta_.size(); ++v) {
    const auto& other = meta_[v].torsor;
    if (other && other->base == torsor.base && other->ambient == torsor.ambient &&
        curves_isomorphic(*other, torsor)) {
      declare_birational(ClassId{v}, id);
      break;
    }
  }
  return id;
}

ClassId Universe::twist(ClassId curve, std::int64_t k, std::string_view label) {
  const auto& m = meta(curve);
  if (!m.torsor) throw ValidationError("class '" + this->label(curve) + "' carries no torsor data");
  return torsor_curve(label, jk_torsor(*m.torsor, k));
}

BasisId Universe::ppav(std::string_view label) { return ppav_.intern(label); }

ClassId Universe::at(std::string_view label) const {
  if (auto id = find(label)) return *id;
  throw ValidationError("unknown class '" + std::string(label) + "'");
}

const ClassMeta& Universe::meta(ClassId c) const {
  if (c.value >= meta_.size()) throw ValidationError("unknown class id " + std::to_string(c.value));
  return meta_[c.value];
}

void Universe::declare_affine_cell(ClassId x, ClassId divisor) {
  require_mutable("declare an affine cell");
  if (dim(divisor) + 1 != dim(x))
    throw ValidationError("affine cell divisor of '" + label(x) + "' must have codimension one");
  affine_cells_[x] = divisor;
  ClassId cell = affine_space(dim(x));
  projective_space(dim(x) - 1);
  declare_birational(cell, x);
}

std::optional<ClassId> Universe::affine_divisor(ClassId x) const {
  if (auto it = affine_cells_.find(x); it != affine_cells_.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Union-find

ClassId Universe::root(ClassId c) const {
  if (c.value >= parent_.size()) throw ValidationError("unknown class id " + std::to_string(c.value));
  while (parent_[c.value] != c) c = parent_[c.value];
  return c;
}

std::vector<ClassId> Universe::members(ClassId c) const {
  ClassId r = root(c);
  std::vector<ClassId> out;
  for (std::uint32_t v = 0; v < parent_.size(); ++v)
    if (root(ClassId{v}) == r) out.push_back(ClassId{v});
  return out;
}

void Universe::merge_roots(ClassId a, ClassId b) {
  ClassId ra = root(a);
  ClassId rb = root(b);
  if (ra == rb) return;
  // Preferred representative: a product of projective spaces, then a smooth
  // projective class, then the earliest registered member.
  auto key = [&](ClassId c) {
    const auto& fs = factors(c);
    const bool linear = std::all_of(fs.begin(), fs.end(), [&](ClassId f) { return projective_dimension(f).has_value(); });
    const FlagSet& flags = meta(c).flags;
    const int kind = linear ? 0 : flags.has(Flag::Smooth) && flags.has(Flag::Projective) ? 1 : 2;
    return std::pair{kind, c};
  };
  if (key(rb) < key(ra)) std::swap(ra, rb);
  parent_[rb.value] = ra;
}

void Universe::declare_birational(ClassId a, ClassId b) {
  require_mutable("declare birational classes");
  if (dim(a) != dim(b))
    throw ValidationError("cannot identify '" + label(a) + "' (dim " + std::to_string(dim(a)) + ") with '" +
                          label(b) + "' (dim " + std::to_string(dim(b)) + ")");
  if (root(a) == root(b)) return;
  Distinctness d = distinct(a, b);
  if (d.is_distinct())
    throw ContradictionError("declared birational classes '" + label(a) + "' and '" + label(b) +
                                 "' are certified distinct by " + std::string(rule_name(*d.rule)),
                             std::string(rule_name(*d.rule)));
  merge_roots(a, b);
  close_under_products();
}

void Universe::close_under_products() {
  // Congruence: products of pairwise birational factors are birational.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::vector<ClassId>, ClassId> seen;
    for (const auto& [key, cls] : products_) {
      std::vector<ClassId> sig;
      sig.reserve(key.size());
      for (ClassId f : key) sig.push_back(root(f));
      std::sort(sig.begin(), sig.end());
      auto [it, inserted] = seen.emplace(std::move(sig), cls);
      if (inserted || root(it->second) == root(cls)) continue;
      Distinctness d = distinct(it->second, cls);
      if (d.is_distinct())
        throw ContradictionError("identification forces '" + label(it->second) + "' ~ '" + label(cls) +
                                     "', certified distinct by " + std::string(rule_name(*d.rule)),
                                 std::string(rule_name(*d.rule)));
      merge_roots(it->second, cls);
      changed = true;
    }
  }
}

// ---------------------------------------------------------------------------
// Distinctness oracle

bool Universe::is_projective_space_root(ClassId r) const {
  for (ClassId m : members(r))
    if (auto n = projective_dimension(m); n && *n > 0) return true;
  return false;
}

bool Universe::is_src_root(ClassId r) const {
  for (ClassId m : members(r))
    if (meta(m).flags.has(Flag::SeparablyRationallyConnected) && dim(m) > 0) return true;
  return false;
}

bool Universe::torsor_distinct(ClassId x, ClassId y) const {
  for (ClassId u : members(x))
    for (ClassId v : members(y)) {
      const auto& tu = meta(u).torsor;
      const auto& tv = meta(v).torsor;
      if (!tu || !tv || tu->base != tv->base || tu->ambient != tv->ambient) continue;
      if (!tu->j_not_1728 || !tv->j_not_1728) continue;
      if (!curves_isomorphic(*tu, *tv)) return true;
    }
  return false;
}

bool Universe::rigid_distinct(ClassId x, ClassId y) const {
  // K-trivial, Picard rank one: birational maps are isomorphisms, so any
  // declared isomorphism invariant separates the classes.
  auto rigid = [](const ClassMeta& m) { return m.flags.has(Flag::KTrivial) && m.picard_rank == 1; };
  for (ClassId u : members(x))
    for (ClassId v : members(y)) {
      const ClassMeta& mu = meta(u);
      const ClassMeta& mv = meta(v);
      if (!rigid(mu) || !rigid(mv) || mu.dimension != mv.dimension) continue;
      if (mu.degree_invariant && mv.degree_invariant && *mu.degree_invariant != *mv.degree_invariant)
        return true;
      auto lists = [](const ClassMeta& m, ClassId c) {
        return std::find(m.not_isomorphic_to.begin(), m.not_isomorphic_to.end(), c) != m.not_isomorphic_to.end();
      };
      if (lists(mu, v) || lists(mv, u)) return true;
      if (mu.torsor && mv.torsor && torsor_distinct(u, v)) return true;
    }
  return false;
}

std::optional<Rule> Universe::pair_rule(ClassId x, ClassId y) const {
  auto rooted = [&](ClassId c) {
    std::vector<ClassId> out;
    for (ClassId f : factors(c)) out.push_back(root(f));
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<ClassId> fx = rooted(x);
  std::vector<ClassId> fy = rooted(y);
  if (fx.empty() || fy.empty()) return std::nullopt;
  std::vector<ClassId> common;
  std::vector<ClassId> cx;
  std::vector<ClassId> cy;
  std::set_intersection(fx.begin(), fx.end(), fy.begin(), fy.end(), std::back_inserter(common));
  std::set_difference(fx.begin(), fx.end(), common.begin(), common.end(), std::back_inserter(cx));
  std::set_difference(fy.begin(), fy.end(), common.begin(), common.end(), std::back_inserter(cy));
  if (cx.size() != 1 || cy.size() != 1) return std::nullopt;
  const ClassId core_x = cx.front();
  const ClassId core_y = cy.front();

  if (common.empty()) return rigid_distinct(core_x, core_y) ? std::optional(Rule::A) : std::nullopt;
  const bool projective = std::all_of(common.begin(), common.end(), [&](ClassId r) { return is_projective_space_root(r); });
  if (projective) {
    if (torsor_distinct(core_x, core_y)) return Rule::C;
    if (rigid_distinct(core_x, core_y)) return Rule::A;
    return std::nullopt;
  }
  const bool src = std::all_of(common.begin(), common.end(), [&](ClassId r) { return is_src_root(r); });
  if (src && rigid_distinct(core_x, core_y)) return Rule::B;
  return std::nullopt;
}

Distinctness Universe::distinct(ClassId a, ClassId b) const {
  if (root(a) == root(b)) return Distinctness::equal();
  // Both orders are tried so that the verdict is symmetric.
  for (ClassId x : members(a))
    for (ClassId y : members(b)) {
      if (auto r = pair_rule(x, y)) return Distinctness::distinct(*r);
      if (auto r = pair_rule(y, x)) return Distinctness::distinct(*r);
    }
  return Distinctness::unknown();
}

}  // namespace motcalc
