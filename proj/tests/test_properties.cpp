#include "motcalc/grothendieck.hpp"

#include "support/support.hpp"

#include <doctest.h>

using namespace motcalc;
using namespace testing_support;

namespace {

bool row_span_equal(const IntMatrix& a, const IntMatrix& b) {
  auto rows = [](const IntMatrix& m) {
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      GroupElement e;
      for (std::uint32_t j = 0; j < m.cols(); ++j) e.add_term(BasisId{j}, m(i, j));
      out.push_back(std::move(e));
    }
    return out;
  };
  return subgroup_equal(rows(a), rows(b));
}

}  // namespace

TEST_CASE("Smith invariants agree with determinantal divisors") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m = random_matrix(rng, r, c, trial % 2 ? 3 : 9);
    CAPTURE(m.to_string());
    SmithResult s = snf(m);
    CHECK(s.diagonal == smith_by_minors(m));
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i)
      if (s.diagonal[i + 1] != 0) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
    if (r == c) {
      Integer det = 1;
      for (const auto& d : s.diagonal) det *= d;
      Integer expected = determinant(m);
      CHECK(det == (expected < 0 ? Integer(-expected) : expected));
    }
  }
}

TEST_CASE("Hermite forms are reduced echelon forms of the same lattice") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    IntMatrix m = random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5, 7);
    CAPTURE(m.to_string());
    HermiteResult h = hnf_with_transform(m);
    CHECK(h.transform * m == h.form);
    Integer det = determinant(h.transform);
    CHECK((det == 1 || det == -1));
    CHECK(row_span_equal(h.form, m));
    std::size_t last_pivot = 0;
    bool seen_zero_row = false;
    for (std::size_t i = 0; i < h.form.rows(); ++i) {
      if (h.form.row_is_zero(i)) {
        seen_zero_row = true;
        continue;
      }
      CHECK_FALSE(seen_zero_row);
      std::size_t p = 0;
      while (h.form(i, p) == 0) ++p;
      if (i > 0) CHECK(p > last_pivot);
      last_pivot = p;
      CHECK(h.form(i, p) > 0);
      for (std::size_t k = 0; k < i; ++k) {
        CHECK(h.form(k, p) >= 0);
        CHECK(h.form(k, p) < h.form(i, p));
      }
    }
    CHECK(hnf(h.form) == h.form);
  }
}

TEST_CASE("kernels and membership") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix m = random_matrix(rng, 2 + rng() % 4, 1 + rng() % 3, 5);
    IntMatrix k = left_kernel(m);
    IntMatrix prod = k * m;
    for (std::size_t i = 0; i < prod.rows(); ++i) CHECK(prod.row_is_zero(i));
    std::vector<GroupElement> gens;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      GroupElement e;
      for (std::uint32_t j = 0; j < m.cols(); ++j) e.add_term(BasisId{j}, m(i, j));
      gens.push_back(e);
    }
    GroupElement combo;
    for (const auto& g : gens) combo += g.scaled(static_cast<long long>(rng() % 7) - 3);
    auto coeffs = member(combo, gens);
    REQUIRE(coeffs.has_value());
    GroupElement rebuilt;
    for (std::size_t i = 0; i < gens.size(); ++i) rebuilt += gens[i].scaled((*coeffs)[i]);
    CHECK(rebuilt == combo);
  }
}

TEST_CASE("c is a homomorphism on random universes") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RandomUniverse r = make_random_universe(seed);
    CHECK(r.u.size() >= 40);
    std::mt19937_64 rng(seed * 7919);
    for (int k = 0; k < 20; ++k) {
      BirWord w1 = r.random_word(rng, 6);
      BirWord w2 = r.random_word(rng, 6);
      BirWord w = compose(r.u, w1, w2);
      CHECK(tilde_c(r.u, w) == tilde_c(r.u, w1) + tilde_c(r.u, w2));
      CHECK(c(r.u, w) == c(r.u, w1) + c(r.u, w2));
      CHECK(c(r.u, invert(w)) == -c(r.u, w));
      CHECK(c_direct(r.u, w) == pi(r.u, r.n - 1, tilde_c(r.u, w)));
      CHECK(c(r.u, compose(r.u, w, invert(w))).is_zero());
    }
  }
}

TEST_CASE("letter relations are compatible with pi on random universes") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    RandomUniverse r = make_random_universe(seed);
    Fragment f(r.n);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 5; ++k) f.add_word(r.u, r.random_word(rng, 5));
    TruncatedK0 t = f.build(r.u);
    CHECK(pi_well_defined(r.u, t));
    // Letters other than pseudo-isomorphisms satisfy tilde_c = [target] - [source] in K0.
    for (const BirWord& w : f.words())
      for (const Letter& l : w.letters()) {
        const auto* iso = std::get_if<DeclaredIso>(&l.atom);
        if (iso && iso->pseudo) continue;
        GroupElement diff = GroupElement::basis(l.target()) - GroupElement::basis(l.source());
        CHECK(t.is_zero(tilde_c(r.u, l) - diff));
      }
  }
}

TEST_CASE("products of random classes") {
  RandomUniverse r = make_random_universe(5);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50 && r.lower.size() >= 3; ++k) {
    ClassId a = r.lower[rng() % r.lower.size()];
    ClassId b = r.lower[rng() % r.lower.size()];
    ClassId c = r.lower[rng() % r.lower.size()];
    CHECK(r.u.product(a, b) == r.u.product(b, a));
    CHECK(r.u.product(r.u.product(a, b), c) == r.u.product(a, r.u.product(b, c)));
    CHECK(r.u.dim(r.u.product(a, b)) == r.u.dim(a) + r.u.dim(b));
  }
}
