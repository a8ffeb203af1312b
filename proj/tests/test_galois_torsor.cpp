#include "motcalc/errors.hpp"
#include "motcalc/galois.hpp"
#include "motcalc/torsor.hpp"

#include <doctest.h>

using namespace motcalc;

namespace {

GaloisGroup cyclic(std::uint32_t n) {
  std::vector<std::string> names;
  std::vector<Permutation> perms;
  for (std::uint32_t k = 0; k < n; ++k) {
    Permutation p(n);
    for (std::uint32_t i = 0; i < n; ++i) p[i] = (i + k) % n;
    names.push_back("r" + std::to_string(k));
    perms.push_back(p);
  }
  return GaloisGroup(names, perms);
}

GaloisGroup s3() {
  std::vector<Permutation> perms{{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  return GaloisGroup({"e", "a", "b", "c", "r", "r2"}, perms);
}

}  // namespace

TEST_CASE("group tables") {
  GaloisGroup g = cyclic(4);
  CHECK(g.order() == 4);
  CHECK(g.identity() == 0);
  CHECK(g.multiply(1, 3) == 0);
  CHECK(g.inverse(1) == 3);
  CHECK(g.index_of("r2") == 2);
  GaloisGroup trivial;
  CHECK(trivial.order() == 1);
}

TEST_CASE("malformed groups are rejected") {
  CHECK_THROWS_AS(GaloisGroup({"e", "a"}, {{0, 1, 2}, {1, 2, 0}}), ValidationError);  // not closed
  CHECK_THROWS_AS(GaloisGroup({"a"}, {{1, 0}}), ValidationError);                     // no identity
  CHECK_THROWS_AS(GaloisGroup({"e", "e2"}, {{0, 1}, {0, 1}}), ValidationError);       // duplicate
  CHECK_THROWS_AS(GaloisGroup({}, {}), ValidationError);
}

TEST_CASE("conjugacy classes of S3") {
  GaloisGroup g = s3();
  CHECK(g.conjugacy_class(g.index_of("a")) == g.conjugacy_class(g.index_of("b")));
  CHECK(g.conjugacy_class(g.index_of("r")) == g.conjugacy_class(g.index_of("r2")));
  CHECK(g.conjugacy_class(g.index_of("a")) != g.conjugacy_class(g.index_of("r")));
}

TEST_CASE("Galois sets and permutation characters") {
  GaloisGroup g = cyclic(2);
  GaloisSet swap{2, {{0, 1}, {1, 0}}};
  swap.validate(g, true);
  CHECK(swap.transitive());
  CharacterVector chi = CharacterVector::permutation(g, swap);
  CHECK(chi.values == std::vector<Integer>{2, 0});
  GaloisSet fixed = GaloisSet::trivial(g, 2);
  CHECK_FALSE(fixed.transitive());
  CHECK_THROWS_AS(fixed.validate(g, true), ValidationError);
  GaloisSet bad{2, {{1, 0}, {1, 0}}};  // identity must act trivially
  CHECK_THROWS_AS(bad.validate(g, false), ValidationError);
  GaloisSet prod = GaloisSet::product(swap, swap);
  CHECK(prod.size == 4);
  CHECK(CharacterVector::permutation(g, prod).values == std::vector<Integer>{4, 0});
  CHECK(chi.to_string(g) == "{r0: 2, r1: 0}");
}

TEST_CASE("characters are class functions") {
  GaloisGroup g = s3();
  CharacterVector chi = CharacterVector::zero(g);
  chi.values[g.index_of("a")] = 1;
  CHECK_THROWS_AS(chi.validate(g), ValidationError);
  chi.values[g.index_of("b")] = 1;
  chi.values[g.index_of("c")] = 1;
  chi.validate(g);
  CHECK((chi - chi).is_zero());
  CHECK((chi + chi).values == chi.scaled(2).values);
}

TEST_CASE("torsor arithmetic") {
  auto t = TorsorClass::make("E", true, {5}, {6});
  CHECK(t.element == std::vector<std::int64_t>{1});
  CHECK(t.killed_by(5));
  CHECK_FALSE(t.killed_by(2));
  CHECK(jk_torsor(t, 2).element == std::vector<std::int64_t>{2});
  CHECK(jk_torsor(t, -1).element == std::vector<std::int64_t>{4});
  CHECK(jk_torsor(t, 5).is_zero());
  CHECK(t.to_string() == "E[1 mod 5]");
  CHECK_THROWS_AS(TorsorClass::make("E", true, {5}, {1, 2}), ValidationError);
  CHECK_THROWS_AS(TorsorClass::make("E", true, {0}, {1}), ValidationError);
}

TEST_CASE("curve isomorphism is t ~ -t") {
  auto t = TorsorClass::make("E", true, {5}, {1});
  CHECK(curves_isomorphic(t, jk_torsor(t, 4)));
  CHECK_FALSE(curves_isomorphic(t, jk_torsor(t, 2)));
  CHECK_THROWS_AS(curves_isomorphic(t, TorsorClass::make("F", true, {5}, {1})), ValidationError);
  CHECK_THROWS_AS(curves_isomorphic(t, TorsorClass::make("E", true, {7}, {1})), ValidationError);
}

TEST_CASE("J^2 is an involution on isomorphism classes in Z/5") {
  for (std::int64_t v = 1; v < 5; ++v) {
    auto t = TorsorClass::make("E", true, {5}, {v});
    auto twice = jk_torsor(jk_torsor(t, 2), 2);
    CHECK(curves_isomorphic(twice, t));
    CHECK_FALSE(curves_isomorphic(jk_torsor(t, 2), t));
  }
}
