#include "motcalc/links.hpp"

#include "motcalc/errors.hpp"

#include <set>

namespace motcalc {

namespace {

[[noreturn]] void fail(const std::string& condition, const std::string& link, const std::string& what) {
  throw ValidationError(condition + " link '" + link + "': " + what);
}

ClassId find_or_register(Universe& u, const std::string& label, const ClassMeta& meta) {
  if (auto id = u.find(label)) return *id;
  return u.register_class(label, meta);
}

CharacterVector constant_character(const Universe& u, long long v) {
  CharacterVector chi = CharacterVector::zero(u.galois());
  for (auto& x : chi.values) x = v;
  return chi;
}

ClassMeta rigid_meta(int dim, bool src) {
  ClassMeta m;
  m.dimension = dim;
  m.flags = smooth_projective();
  if (src) m.flags.set(Flag::SeparablyRationallyConnected);
  m.picard_rank = 1;
  return m;
}

ClassMeta singular_meta(int dim) {
  ClassMeta m;
  m.dimension = dim;
  m.flags = {Flag::Projective, Flag::Irreducible, Flag::GeometricallyReduced};
  return m;
}

void add_model_if_absent(ModelRegistry& models, const std::string& text) {
  for (auto& v : parse_models(text, "<builtin>"))
    if (!models.find(v.name)) models.add(std::move(v));
}

// Records the successive affine cells X = A^n ⊔ D, D = A^{n-1} ⊔ D', ...
// down to the point; projective spaces use their hyperplanes.
void cell_chain(Universe& u, ClassId x, std::vector<CutAndPaste>& out) {
  while (u.dim(x) > 0) {
    const int n = u.dim(x);
    std::optional<ClassId> divisor = u.affine_divisor(x);
    if (!divisor && u.projective_dimension(x)) divisor = u.projective_space(n - 1);
    if (!divisor) throw ValidationError("no cell decomposition declared for '" + u.label(x) + "'");
    CutAndPaste r{x, u.affine_space(n), GroupElement::basis(*divisor)};
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    x = *divisor;
  }
}

}  // namespace

LLink make_link(const Universe& u, const ModelRegistry& models, LinkSpec spec) {
  const std::string name = spec.name;
  const BlowUp& bl = spec.blow_left;
  const BlowUp& br = spec.blow_right;
  if (bl.result != br.result) fail("(shape)", name, "the two blow-ups must share the top variety");
  validate_atom(u, bl);
  validate_atom(u, br);
  if (!spec.exceptional_override) {
    for (const BlowUp* b : {&bl, &br}) {
      std::array<ClassId, 2> shape{u.find("P" + std::to_string(b->codim - 1)).value_or(ClassId{0}), b->center};
      auto expected = u.find_product(shape);
      if (!expected || !u.birational(*expected, b->exceptional))
        fail("(shape)", name, "exceptional '" + u.label(b->exceptional) + "' is not birational to P" +
                                  std::to_string(b->codim - 1) + "×" + u.label(b->center));
    }
  }

  // (L1)
  if (const auto* mw = std::get_if<ModelWitness>(&spec.witness_l1)) {
    if (mw->primes.empty()) fail("(L1)", name, "no primes to count over");
    ExplicitVariety lm;
    ExplicitVariety rm;
    try {
      lm = models.model_for(u, bl.base);
      rm = models.model_for(u, br.base);
    } catch (const ValidationError& e) {
      fail("(L1)", name, e.what());
    }
    for (auto q : mw->primes) {
      auto a = count(lm, q);
      auto b = count(rm, q);
      if (a != b)
        fail("(L1)", name, "|" + u.label(bl.base) + "(F_" + std::to_string(q) + ")| = " + std::to_string(a) + " but |" +
                               u.label(br.base) + "(F_" + std::to_string(q) + ")| = " + std::to_string(b));
    }
  } else {
    const auto& kw = std::get<K0Witness>(spec.witness_l1);
    Fragment f(u.dim(bl.base));
    f.add_class(u, bl.base);
    f.add_class(u, br.base);
    for (const auto& r : kw.relations) f.add_relation(u, r);
    if (!f.build(u).is_zero(GroupElement::basis(bl.base) - GroupElement::basis(br.base)))
      fail("(L1)", name, "the declared relations do not give [" + u.label(bl.base) + "] = [" + u.label(br.base) + "]");
  }

  // (L2)
  const BirWord& gamma = spec.witness_l2;
  if (gamma.source() != bl.base || gamma.target() != br.base)
    fail("(L2)", name, "witness word must run from '" + u.label(bl.base) + "' to '" + u.label(br.base) + "'");
  if (GroupElement cg = c(u, gamma); !cg.is_zero())
    fail("(L2)", name, "witness word has c = " + cg.to_string(u.labels()));

  // (L3)
  for (ClassId e : {bl.exceptional, br.exceptional})
    if (!u.meta(e).flags.has(Flag::Irreducible))
      fail("(L3)", name, "exceptional divisor '" + u.label(e) + "' is not irreducible");

  LLink link(std::move(spec));
  link.c_ = c(u, link_word(u, link));
  if (link.c_ != c_of_link(u, link)) throw std::logic_error("link word and exceptional classes disagree on c");
  return link;
}

GroupElement c_of_link(const Universe& u, const LLink& l) {
  const int top = u.dim(l.left()) - 1;
  return top_components(u, l.exc_left(), top) - top_components(u, l.exc_right(), top);
}

BirWord link_word(const Universe& u, const LLink& l) {
  return BirWord(u, l.left(), l.right(), {Letter{l.blow_left(), false}, Letter{l.blow_right(), true}});
}

BirWord endo_word(const Universe& u, const LLink& l) { return compose(u, link_word(u, l), invert(l.witness_l2())); }

std::string Nontriviality::to_string() const {
  switch (kind) {
    case Kind::Yes: return "Yes(" + std::string(rule_name(*rule)) + ")";
    case Kind::No: return "No";
    case Kind::Unknown: return "Unknown";
  }
  return "?";
}

Nontriviality nontrivial(const Universe& u, const LLink& l) {
  if (l.c().is_zero()) return {Nontriviality::Kind::No, std::nullopt};
  Distinctness d = u.distinct(l.exc_left(), l.exc_right());
  if (d.is_distinct()) return {Nontriviality::Kind::Yes, d.rule};
  if (d.kind == Distinctness::Kind::Equal) return {Nontriviality::Kind::No, std::nullopt};
  return {Nontriviality::Kind::Unknown, std::nullopt};
}

void saturate(Universe& u, Fragment& f) {
  std::size_t before = 0;
  do {
    before = f.relations().size() + f.classes().size();
    std::vector<ClassId> classes(f.classes().begin(), f.classes().end());
    for (ClassId x : classes)
      if (auto d = u.affine_divisor(x)) f.add_relation(u, {x, u.affine_space(u.dim(x)), GroupElement::basis(*d)});
    f.add_product_strata(u);
  } while (f.relations().size() + f.classes().size() != before);
}

void add_link(Universe& u, Fragment& f, const LLink& l) {
  f.add_word(u, link_word(u, l));
  f.add_word(u, l.witness_l2());
  f.add_word(u, endo_word(u, l));
  if (const auto* kw = std::get_if<K0Witness>(&l.witness_l1()))
    for (const auto& r : kw->relations) f.add_relation(u, r);
  saturate(u, f);
}

// ---------------------------------------------------------------------------

LLink elliptic_link(Universe& u, ModelRegistry& models, ClassId curve, const std::string& name,
                    std::optional<std::string> twist_label) {
  const std::optional<TorsorClass> torsor = u.meta(curve).torsor;
  if (!torsor) throw ValidationError("elliptic link '" + name + "': '" + u.label(curve) + "' carries no torsor data");
  if (!torsor->killed_by(5))
    throw ValidationError("elliptic link '" + name + "': torsor element " + torsor->to_string() + " is not of order 5");
  ClassId twisted = u.twist(curve, 2, twist_label ? *twist_label : u.label(curve) + "'");

  add_model_if_absent(models,
                      "model Q3split\nambient P4\neq x0*x1 + x2*x3 - x4^2\nend\n"
                      "model Q3hyp\nambient P4\neq x0\neq x0*x1 + x2*x3 - x4^2\nend\n");
  const bool fresh = !u.find("Q3");
  ClassMeta q3 = rigid_meta(3, true);
  q3.ns_character = constant_character(u, 1);
  q3.jacobian = std::vector<BasisId>{};
  q3.model = "Q3split";
  ClassId quadric = find_or_register(u, "Q3", q3);
  ClassMeta cone = singular_meta(2);
  cone.model = "Q3hyp";
  ClassId section = find_or_register(u, "Q3∩H", cone);
  if (fresh) {
    u.declare_affine_cell(section, u.projective_space(1));
    u.declare_affine_cell(quadric, section);
  }
  ClassId p3 = u.projective_space(3);

  ClassMeta top = rigid_meta(3, true);
  top.picard_rank = 2;
  top.ns_character = constant_character(u, 2);
  top.jacobian = std::vector<BasisId>{u.ppav(torsor->base)};
  const std::string top_label = "T_" + name;
  find_or_register(u, top_label, top);

  LinkSpec spec{name,
                make_blowup(u, quadric, curve, 2, top_label),
                make_blowup(u, p3, twisted, 2, top_label),
                ModelWitness{},
                strong_rational_witness(u, quadric),
                false};
  u.product(u.affine_space(1), curve);
  u.product(u.affine_space(1), twisted);
  return make_link(u, models, std::move(spec));
}

LLink k3_link(Universe& u, ModelRegistry& models, ClassId s, ClassId s_prime, const std::string& name) {
  for (ClassId x : {s, s_prime}) {
    const ClassMeta& m = u.meta(x);
    if (m.dimension != 2 || !m.flags.has(Flag::KTrivial) || m.picard_rank != 1 || m.degree_invariant != 12)
      throw ValidationError("K3 link '" + name + "': '" + u.label(x) +
                            "' must be a K-trivial surface of Picard rank 1 and degree 12");
  }
  if (s != s_prime && u.meta(s).fm_partner != s_prime && u.meta(s_prime).fm_partner != s)
    throw ValidationError("K3 link '" + name + "': '" + u.label(s) + "' and '" + u.label(s_prime) +
                          "' are not declared Fourier–Mukai partners");
  ClassId p4 = u.projective_space(4);
  ClassId p1 = u.projective_space(1);
  auto singular_center = [&](ClassId surface) {
    ClassId s0 = find_or_register(u, "S0[" + u.label(surface) + "]", singular_meta(2));
    u.declare_birational(s0, surface);
    return s0;
  };
  auto exceptional = [&](ClassId surface) {
    ClassId shape = u.product(p1, surface);
    ClassId e = find_or_register(u, "E[" + u.label(surface) + "]", singular_meta(3));
    u.declare_birational(e, shape);
    return e;
  };
  ClassId s0 = singular_center(s);
  ClassId s0_prime = singular_center(s_prime);
  ClassId e = exceptional(s);
  ClassId e_prime = exceptional(s_prime);
  const std::string top_label = "T_" + name;
  find_or_register(u, top_label, singular_meta(4));
  LinkSpec spec{name,
                make_blowup(u, p4, s0, 2, top_label, e),
                make_blowup(u, p4, s0_prime, 2, top_label, e_prime),
                K0Witness{},
                BirWord::identity(u, p4),
                true};
  return make_link(u, models, std::move(spec));
}

LLink g2_link(Universe& u, ModelRegistry& models, const std::string& name) {
  ClassMeta grassmannian = rigid_meta(5, true);
  grassmannian.ns_character = constant_character(u, 1);
  grassmannian.jacobian = std::vector<BasisId>{};
  ClassId p1 = u.projective_space(1);
  auto homogeneous = [&](const std::string& label) {
    const bool fresh = !u.find(label);
    ClassId x = find_or_register(u, label, grassmannian);
    if (fresh) {
      // Bruhat cells: X = A^5 ⊔ Σ4, Σ4 = A^4 ⊔ Σ3, Σ3 = A^3 ⊔ Σ2, Σ2 = A^2 ⊔ P^1.
      ClassId prev = x;
      for (int d = 4; d >= 2; --d) {
        ClassId schubert = u.register_class(label + ".Σ" + std::to_string(d), singular_meta(d));
        u.declare_affine_cell(prev, schubert);
        prev = schubert;
      }
      u.declare_affine_cell(prev, p1);
    }
    return x;
  };
  ClassId g = homogeneous("G2Gr");
  ClassId g_prime = homogeneous("G2Gr'");
  auto threefold = [&](const std::string& label, std::int64_t degree) {
    ClassMeta m = rigid_meta(3, false);
    m.flags.set(Flag::KTrivial);
    m.degree_invariant = degree;
    return find_or_register(u, label, m);
  };
  ClassId z14 = threefold("Z14", 14);
  ClassId z42 = threefold("Z42", 42);
  const std::string top_label = "T_" + name;
  ClassMeta top = rigid_meta(5, true);
  top.picard_rank = 2;
  find_or_register(u, top_label, top);

  K0Witness cells;
  cell_chain(u, g, cells.relations);
  cell_chain(u, g_prime, cells.relations);
  cell_chain(u, u.projective_space(5), cells.relations);
  BirWord gamma = compose(u, strong_rational_witness(u, g), invert(strong_rational_witness(u, g_prime)));
  LinkSpec spec{name,
                make_blowup(u, g, z14, 2, top_label),
                make_blowup(u, g_prime, z42, 2, top_label),
                std::move(cells),
                std::move(gamma),
                false};
  return make_link(u, models, std::move(spec));
}

LLink stabilized_link(Universe& u, ModelRegistry& models, const LLink& l, ClassId w, const std::string& name) {
  L1Witness l1 = l.witness_l1();
  if (auto* kw = std::get_if<K0Witness>(&l1)) {
    for (auto& r : kw->relations) {
      GroupElement closed;
      for (const auto& [cls, coeff] : r.closed.terms()) closed.add_term(u.product(cls, w), coeff);
      r = CutAndPaste{u.product(r.total, w), u.product(r.open, w), closed};
    }
  }
  LinkSpec spec{name,
                std::get<BlowUp>(product_atom(u, l.blow_left(), w)),
                std::get<BlowUp>(product_atom(u, l.blow_right(), w)),
                std::move(l1),
                product_word(u, l.witness_l2(), w),
                l.exceptional_override()};
  return make_link(u, models, std::move(spec));
}

// ---------------------------------------------------------------------------

void validate_family(const Universe& u, const LinkFamily& f) {
  std::set<ClassId> centers;
  std::set<ClassId> roots;
  for (const LLink* l : f.links) {
    for (ClassId x : {l->center_left(), l->center_right()})
      if (!centers.insert(x).second)
        throw ValidationError("(family) '" + f.name + "': center '" + u.label(x) + "' appears in two pairs");
    for (ClassId e : {l->exc_left(), l->exc_right()})
      if (!roots.insert(u.root(e)).second)
        throw ValidationError("(family) '" + f.name + "': the pairing is not a partition of distinct classes ('" +
                              u.label(e) + "' repeats)");
  }
}

std::vector<std::vector<Integer>> cremona_hom(const Universe& u, const LinkFamily& f, std::span<const BirWord> words) {
  validate_family(u, f);
  std::vector<std::vector<Integer>> rows;
  for (const BirWord& w : words) {
    GroupElement cw = c(u, w);
    std::vector<Integer> row;
    for (const LLink* l : f.links) row.push_back(cw.coefficient(u.root(l->exc_left())));
    rows.push_back(std::move(row));
  }
  return rows;
}

bool spans_standard_lattice(const std::vector<std::vector<Integer>>& rows, std::size_t rank) {
  std::vector<GroupElement> image;
  for (const auto& r : rows) {
    GroupElement e;
    for (std::uint32_t i = 0; i < r.size(); ++i) e.add_term(BasisId{i}, r[i]);
    image.push_back(std::move(e));
  }
  std::vector<GroupElement> standard;
  for (std::uint32_t i = 0; i < rank; ++i) standard.push_back(GroupElement::basis(BasisId{i}));
  return subgroup_equal(image, standard);
}

}  // namespace motcalc
