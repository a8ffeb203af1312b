#include "motcalc/errors.hpp"
#include "motcalc/universe.hpp"

#include <doctest.h>

using namespace motcalc;

namespace {

ClassMeta rigid(int dim, std::int64_t degree) {
  ClassMeta m;
  m.dimension = dim;
  m.flags = smooth_projective();
  m.flags.set(Flag::KTrivial);
  m.picard_rank = 1;
  m.degree_invariant = degree;
  return m;
}

ClassMeta plain(int dim, bool src = false) {
  ClassMeta m;
  m.dimension = dim;
  m.flags = smooth_projective();
  if (src) m.flags.set(Flag::SeparablyRationallyConnected);
  return m;
}

}  // namespace

TEST_CASE("flags round trip through their names") {
  for (Flag f : {Flag::Smooth, Flag::Projective, Flag::Irreducible, Flag::GeometricallyReduced, Flag::KTrivial,
                 Flag::SeparablyRationallyConnected})
    CHECK(parse_flag(flag_name(f)) == f);
  CHECK_THROWS_AS(parse_flag("smoooth"), ValidationError);
}

TEST_CASE("standard classes") {
  Universe u;
  CHECK(u.label(u.point()) == "pt");
  ClassId p2 = u.projective_space(2);
  CHECK(u.label(p2) == "P2");
  CHECK(u.projective_space(2) == p2);
  ClassId a2 = u.affine_space(2);
  CHECK(u.birational(a2, p2));
  CHECK(u.root(a2) == p2);
  CHECK(u.projective_dimension(p2) == 2);
  CHECK(u.affine_dimension(a2) == 2);
  CHECK_FALSE(u.projective_dimension(a2).has_value());
  CHECK_THROWS_AS(u.register_class("P2", plain(2)), ValidationError);
}

TEST_CASE("products are commutative, associative and unital") {
  Universe u;
  ClassId x = u.register_class("X", plain(1));
  ClassId y = u.register_class("Y", plain(2));
  ClassId z = u.register_class("Z", plain(1));
  ClassId p1 = u.projective_space(1);
  CHECK(u.product(x, y) == u.product(y, x));
  CHECK(u.product(u.product(x, y), z) == u.product(x, u.product(y, z)));
  CHECK(u.product(x, u.point()) == x);
  CHECK(u.dim(u.product(x, y)) == 3);
  CHECK(u.label(u.product(x, p1)) == "P1×X");
  std::array<ClassId, 2> key{x, p1};
  CHECK(u.find_product(key) == u.product(p1, x));
  std::array<ClassId, 2> missing{x, z};
  CHECK_FALSE(u.find_product(missing).has_value());
}

TEST_CASE("birationality is closed under products") {
  Universe u;
  ClassId x = u.register_class("X", plain(1));
  ClassId x2 = u.register_class("X'", plain(1));
  ClassId w = u.register_class("W", plain(2));
  ClassId xw = u.product(x, w);
  ClassId x2w = u.product(x2, w);
  CHECK_FALSE(u.birational(xw, x2w));
  u.declare_birational(x, x2);
  CHECK(u.birational(xw, x2w));
  // Products registered afterwards join the class too.
  ClassId p1 = u.projective_space(1);
  CHECK(u.birational(u.product(x, p1), u.product(x2, p1)));
}

TEST_CASE("roots prefer projective spaces and smooth projective members") {
  Universe u;
  ClassMeta open = plain(2);
  open.flags.set(Flag::Projective, false);
  ClassId s = u.register_class("S", plain(2));
  ClassId o = u.register_class("O", open);
  u.declare_birational(o, s);
  CHECK(u.root(o) == s);
  ClassId p2 = u.projective_space(2);
  u.declare_birational(s, p2);
  CHECK(u.root(s) == p2);
  CHECK(u.members(p2) == std::vector<ClassId>{s, o, p2});
}

TEST_CASE("dimension mismatch and metadata validation") {
  Universe u;
  ClassId x = u.register_class("X", plain(1));
  ClassId y = u.register_class("Y", plain(2));
  CHECK_THROWS_AS(u.declare_birational(x, y), ValidationError);
  ClassMeta bad = plain(2);
  bad.flags.set(Flag::Projective, false);
  bad.picard_rank = 1;
  CHECK_THROWS_AS(u.register_class("B", bad), ValidationError);
  ClassMeta ruled = plain(2);
  ruled.ruled_over = y;
  CHECK_THROWS_AS(u.register_class("R", ruled), ValidationError);
  ClassMeta parts = plain(0);
  parts.parts = {u.point()};
  CHECK_THROWS_AS(u.register_class("Q", parts), ValidationError);  // irreducible with parts
}

TEST_CASE("frozen universes refuse registration") {
  Universe u;
  u.register_class("X", plain(1));
  u.freeze();
  CHECK(u.frozen());
  CHECK_THROWS_AS(u.register_class("Y", plain(1)), ValidationError);
  CHECK_THROWS_AS(u.projective_space(7), ValidationError);
}

TEST_CASE("Rule A: rigid classes with different invariants") {
  Universe u;
  ClassId z14 = u.register_class("Z14", rigid(3, 14));
  ClassId z42 = u.register_class("Z42", rigid(3, 42));
  ClassId z14b = u.register_class("Z14b", rigid(3, 14));
  CHECK(u.distinct(z14, z42) == Distinctness::distinct(Rule::A));
  CHECK(u.distinct(z14, z14b) == Distinctness::unknown());
  ClassId p1 = u.projective_space(1);
  CHECK(u.distinct(u.product(p1, z14), u.product(p1, z42)) == Distinctness::distinct(Rule::A));
  try {
    u.declare_birational(z14, z42);
    FAIL("expected a contradiction");
  } catch (const ContradictionError& e) {
    CHECK(e.rule() == "Rule A");
    CHECK(std::string(e.what()).find("Rule A") != std::string::npos);
  }
}

TEST_CASE("Rule A through declared non-isomorphism") {
  Universe u;
  ClassId s = u.register_class("S", rigid(2, 12));
  ClassMeta m = rigid(2, 12);
  m.not_isomorphic_to = {s};
  ClassId s2 = u.register_class("S'", m);
  CHECK(u.distinct(s, s2).is_distinct());
  CHECK(u.distinct(s2, s).is_distinct());
}

TEST_CASE("Rule B: stabilization by a separably rationally connected factor") {
  Universe u;
  ClassId z14 = u.register_class("Z14", rigid(3, 14));
  ClassId z42 = u.register_class("Z42", rigid(3, 42));
  ClassId w = u.register_class("W", plain(3, true));
  ClassId v = u.register_class("V", plain(3, false));
  ClassId p1 = u.projective_space(1);
  CHECK(u.distinct(u.product(z14, w), u.product(z42, w)) == Distinctness::distinct(Rule::B));
  std::array<ClassId, 3> a{p1, z14, w}, b{p1, z42, w};
  CHECK(u.distinct(u.product(a), u.product(b)) == Distinctness::distinct(Rule::B));
  CHECK(u.distinct(u.product(z14, v), u.product(z42, v)) == Distinctness::unknown());
}

TEST_CASE("Rule C: ruled surfaces over non-isomorphic torsors") {
  Universe u;
  auto t = TorsorClass::make("E", true, {5}, {1});
  ClassId c = u.torsor_curve("C", t);
  ClassId c2 = u.twist(c, 2, "C'");
  ClassId c4 = u.twist(c, 4, "C''");
  CHECK(u.birational(c, c4));  // 4 = -1
  CHECK_FALSE(u.birational(c, c2));
  ClassId p1 = u.projective_space(1);
  ClassId s = u.product(p1, c);
  ClassId s2 = u.product(p1, c2);
  CHECK(u.distinct(s, s2) == Distinctness::distinct(Rule::C));
  CHECK(u.meta(s).ruled_over == c);
  CHECK_FALSE(u.meta(s).flags.has(Flag::SeparablyRationallyConnected));
  CHECK(u.distinct(s, u.product(p1, c4)) == Distinctness::equal());
  CHECK(Distinctness::distinct(Rule::C).to_string() == "Distinct(Rule C)");
  CHECK_THROWS_AS(u.declare_birational(s, s2), ContradictionError);
}

TEST_CASE("torsor curves without the j-invariant gate stay unknown") {
  Universe u;
  ClassId c = u.torsor_curve("C", TorsorClass::make("E", false, {5}, {1}));
  ClassId c2 = u.twist(c, 2, "C'");
  ClassId p1 = u.projective_space(1);
  CHECK(u.distinct(u.product(p1, c), u.product(p1, c2)) == Distinctness::unknown());
}

TEST_CASE("affine cells") {
  Universe u;
  ClassMeta q = plain(3);
  ClassId x = u.register_class("Q", q);
  ClassMeta h = plain(2);
  h.flags.set(Flag::Smooth, false);
  ClassId d = u.register_class("H", h);
  u.declare_affine_cell(x, d);
  CHECK(u.affine_divisor(x) == d);
  CHECK(u.birational(x, u.projective_space(3)));
  CHECK_THROWS_AS(u.declare_affine_cell(x, u.point()), ValidationError);
}

TEST_CASE("reducible classes multiply componentwise") {
  Universe u;
  ClassMeta pair = plain(0);
  pair.flags.set(Flag::Irreducible, false);
  pair.parts = {u.point(), u.point()};
  ClassId two = u.register_class("2pt", pair);
  ClassId p1 = u.projective_space(1);
  ClassId e = u.product(p1, two);
  CHECK(u.meta(e).parts == std::vector<ClassId>{p1, p1});
  CHECK_FALSE(u.meta(e).flags.has(Flag::Irreducible));
}
