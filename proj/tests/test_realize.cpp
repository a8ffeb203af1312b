#include "motcalc/errors.hpp"
#include "motcalc/realize.hpp"

#include <doctest.h>

using namespace motcalc;

namespace {

GaloisGroup z2() { return GaloisGroup({"e", "s"}, {{0, 1}, {1, 0}}); }

CharacterVector chi(const GaloisGroup& g, long long e, long long s) {
  CharacterVector v = CharacterVector::zero(g);
  v.values = {e, s};
  return v;
}

ClassMeta surface(const CharacterVector& ns) {
  ClassMeta m;
  m.dimension = 2;
  m.flags = smooth_projective();
  m.ns_character = ns;
  return m;
}

ClassMeta with_jacobian(int dim, std::vector<BasisId> jac) {
  ClassMeta m;
  m.dimension = dim;
  m.flags = smooth_projective();
  m.jacobian = std::move(jac);
  return m;
}

}  // namespace

TEST_CASE("sigma counts geometric components") {
  Universe u(z2());
  ClassMeta pair;
  pair.flags = smooth_projective();
  pair.components = GaloisSet{2, {{0, 1}, {1, 0}}};
  ClassId z = u.register_class("Zpair", pair);
  ClassId p1 = u.projective_space(1);
  CHECK(sigma(u, GroupElement::basis(z)) == chi(u.galois(), 2, 0));
  CHECK(sigma(u, GroupElement::basis(p1, 3)) == chi(u.galois(), 3, 3));
  CHECK(sigma(u, GroupElement::basis(u.product(p1, z))) == chi(u.galois(), 2, 0));
  CHECK(sigma(u, {}).is_zero());
}

TEST_CASE("blowing up a Galois-swapped pair of points") {
  Universe u(z2());
  const GaloisGroup& g = u.galois();
  ClassMeta pair;
  pair.flags = smooth_projective();
  pair.components = GaloisSet{2, {{0, 1}, {1, 0}}};
  ClassId z = u.register_class("Zpair", pair);
  ClassId p2 = u.projective_space(2);
  ClassId blz = u.register_class("BlZ", surface(chi(g, 3, 1)));
  ClassId wrong = u.register_class("BlZ-wrong", surface(chi(g, 3, 3)));
  BirWord w = BirWord::single(u, make_blowup(u, p2, z, 2, std::string("BlZ")));
  CHECK(w.target() == blz);
  Verdict v = check_picnb(u, w);
  CHECK(v.pass);
  CHECK(v.detail == "sigma(c) = {e: 2, s: 0}, N(target) - N(source) = {e: 2, s: 0}");
  CHECK(check_picnb(u, compose(u, w, invert(w))).pass);

  BirWord bad = BirWord::single(u, make_blowup(u, p2, z, 2, std::string("BlZ-wrong")));
  CHECK(bad.target() == wrong);
  CHECK_FALSE(check_picnb(u, bad).pass);

  ClassId bare = u.register_class("BlZ-bare", surface(chi(g, 2, 0)));
  u.declare_birational(bare, p2);
  BirWord iso = BirWord::single(u, make_iso(u, p2, bare, false));
  CHECK_FALSE(check_picnb(u, iso).pass);  // N differs but c = 0
}

TEST_CASE("sigma needs Néron–Severi data") {
  Universe u(z2());
  ClassId p2 = u.projective_space(2);
  ClassMeta m;
  m.dimension = 2;
  m.flags = smooth_projective();
  ClassId s = u.register_class("S", m);
  BirWord w = BirWord::single(u, make_iso(u, p2, s, false));
  CHECK_THROWS_AS(check_picnb(u, w), ValidationError);
}

TEST_CASE("intermediate Jacobians of threefold blow-ups") {
  Universe u;
  BasisId jd = u.ppav("JD2");
  ClassId d2 = u.register_class("D2", with_jacobian(1, {jd}));
  ClassId p3 = u.projective_space(3);
  ClassId bl = u.register_class("BlD2", with_jacobian(3, {jd}));
  BirWord w = BirWord::single(u, make_blowup(u, p3, d2, 2, std::string("BlD2")));
  CHECK(w.target() == bl);
  CHECK(j_realize(u, c(u, w)) == GroupElement::basis(jd));
  CHECK(jacobian_of(u, bl) == GroupElement::basis(jd));
  CHECK(jacobian_of(u, p3).is_zero());
  Verdict v = check_jacobian(u, w);
  CHECK(v.pass);
  CHECK(v.detail == "j(c) = [JD2], J(target) - J(source) = [JD2]");
  CHECK(check_jacobian(u, invert(w)).pass);

  BirWord pt = BirWord::single(u, make_blowup(u, p3, u.point(), 3));
  CHECK(j_realize(u, c(u, pt)).is_zero());

  u.register_class("BlD2-wrong", with_jacobian(3, {}));
  BirWord bad = BirWord::single(u, make_blowup(u, p3, d2, 2, std::string("BlD2-wrong")));
  Verdict vb = check_jacobian(u, bad);
  CHECK_FALSE(vb.pass);
  CHECK(vb.detail.find("differs") != std::string::npos);
}

TEST_CASE("Jacobians of curves are birational invariants") {
  Universe u;
  BasisId je = u.ppav("E");
  ClassId e = u.register_class("E", with_jacobian(1, {je}));
  ClassMeta open;
  open.dimension = 1;
  open.flags = FlagSet{Flag::Smooth, Flag::Irreducible, Flag::GeometricallyReduced};
  ClassId e0 = u.register_class("E0", open);
  u.declare_birational(e, e0);
  CHECK(jacobian_of(u, e0) == GroupElement::basis(je));
  ClassMeta s;
  s.dimension = 2;
  s.flags = smooth_projective();
  ClassId surf = u.register_class("S", s);
  CHECK_THROWS_AS(jacobian_of(u, surf), ValidationError);
}
