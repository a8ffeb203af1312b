#include "motcalc/abgroup.hpp"

#include "support/support.hpp"

#include <doctest.h>

using namespace motcalc;
using testing_support::golden;
using testing_support::matrix_from_json;

namespace {

bool unimodular(const IntMatrix& m) {
  Integer d = determinant(m);
  return d == 1 || d == -1;
}

std::vector<Integer> to_integers(const nlohmann::json& j) {
  std::vector<Integer> out;
  for (const auto& v : j) out.push_back(v.get<long long>());
  return out;
}

GroupElement elem(std::initializer_list<std::pair<std::uint32_t, long long>> terms) {
  GroupElement x;
  for (auto [id, c] : terms) x.add_term(BasisId{id}, c);
  return x;
}

}  // namespace

TEST_CASE("group elements drop zero coefficients and render sorted") {
  BasisRegistry reg;
  BasisId a = reg.intern("a");
  BasisId b = reg.intern("b");
  CHECK(reg.intern("a") == a);
  GroupElement x = GroupElement::basis(a, 2) - GroupElement::basis(b);
  CHECK(x.to_string(reg) == "2[a] - [b]");
  x += GroupElement::basis(b);
  CHECK(x.support_size() == 1);
  CHECK((x - x).is_zero());
  CHECK((x - x).to_string(reg) == "0");
  CHECK((-x).coefficient(a) == -2);
  CHECK(x.scaled(0).is_zero());
}

TEST_CASE("hnf matches the frozen oracle values") {
  for (const auto& c : golden()["hnf"]) {
    IntMatrix m = matrix_from_json(c["input"]);
    CAPTURE(m.to_string());
    CHECK(hnf(m) == matrix_from_json(c["output"]));
    HermiteResult h = hnf_with_transform(m);
    CHECK(h.transform * m == h.form);
    CHECK(unimodular(h.transform));
  }
}

TEST_CASE("snf matches the frozen oracle values") {
  for (const auto& c : golden()["snf"]) {
    IntMatrix m = matrix_from_json(c["input"]);
    CAPTURE(m.to_string());
    SmithResult s = snf(m);
    CHECK(s.diagonal == to_integers(c["diagonal"]));
    std::vector<BasisId> gens;
    for (std::uint32_t j = 0; j < m.cols(); ++j) gens.push_back(BasisId{j});
    GroupInvariants inv = PresentedGroup(gens, m).quotient_invariants();
    CHECK(inv.torsion == to_integers(c["torsion"]));
    CHECK(inv.free_rank == c["free_rank"].get<std::size_t>());
  }
}

TEST_CASE("spot values") {
  CHECK(hnf(IntMatrix{{2, 4}, {6, 8}}) == IntMatrix{{2, 0}, {0, 4}});
  CHECK(snf(IntMatrix{{2, 4}, {6, 8}}).diagonal == std::vector<Integer>{2, 4});
  CHECK(snf(IntMatrix{{3, 0}, {0, 5}}).diagonal == std::vector<Integer>{1, 15});
  CHECK(determinant(IntMatrix{{2, 1}, {7, 4}}) == 1);
  CHECK(determinant(IntMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 0);
}

TEST_CASE("smith form factors the matrix") {
  IntMatrix m{{4, 6, 8}, {2, 3, 4}, {0, 1, 5}};
  SmithResult s = snf(m);
  IntMatrix d = s.left * m * s.right;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) CHECK(d(i, j) == (i == j ? s.diagonal[i] : Integer(0)));
  CHECK(unimodular(s.left));
  CHECK(unimodular(s.right));
}

TEST_CASE("membership and subgroup equality") {
  std::vector<GroupElement> gens{elem({{0, 2}, {1, 4}}), elem({{0, 6}, {1, 8}})};
  auto coeffs = member(elem({{0, 2}}), gens);  // (2,0) = -2(2,4) + (6,8)
  REQUIRE(coeffs.has_value());
  CHECK(gens[0].scaled((*coeffs)[0]) + gens[1].scaled((*coeffs)[1]) == elem({{0, 2}}));
  CHECK_FALSE(member(elem({{0, 1}}), gens).has_value());
  CHECK_FALSE(member(elem({{1, 2}}), gens).has_value());
  std::vector<GroupElement> std_basis{elem({{0, 2}}), elem({{1, 4}})};
  CHECK(subgroup_equal(gens, std_basis));
  CHECK(subgroup_contains(gens, std::vector<GroupElement>{elem({{0, 4}, {1, 4}})}));
  CHECK_FALSE(subgroup_contains(gens, std::vector<GroupElement>{elem({{1, 2}})}));
  CHECK(member(GroupElement{}, std::vector<GroupElement>{}).has_value());
  CHECK_FALSE(member(elem({{3, 1}}), std::vector<GroupElement>{}).has_value());
}

TEST_CASE("left kernel") {
  IntMatrix m{{1, 2}, {2, 4}, {0, 1}};
  IntMatrix k = left_kernel(m);
  REQUIRE(k.rows() == 1);
  IntMatrix prod = k * m;
  CHECK(prod.row_is_zero(0));
  CHECK(left_kernel(IntMatrix::identity(3)).rows() == 0);
}

TEST_CASE("presented groups") {
  std::vector<BasisId> gens{BasisId{0}, BasisId{1}, BasisId{2}};
  PresentedGroup g(gens, IntMatrix{{2, 0, 0}, {0, 3, 0}});
  CHECK(g.quotient_invariants() == GroupInvariants{{6}, 1});
  CHECK(g.quotient_invariants().to_string() == "Z^1 + Z/6");
  CHECK(g.is_trivial(elem({{0, 4}, {1, -3}})));
  CHECK_FALSE(g.is_trivial(elem({{0, 1}})));
  CHECK(g.equal(elem({{0, 3}}), elem({{0, 1}})));
  PresentedGroup free(gens, IntMatrix(0, 3));
  CHECK(free.quotient_invariants().to_string() == "Z^3");
}

TEST_CASE("coordinates round trip") {
  std::vector<GroupElement> xs{elem({{5, 1}, {2, -1}}), elem({{9, 3}})};
  Coordinates c = Coordinates::covering(xs);
  CHECK(c.columns.size() == 3);
  for (const auto& x : xs) CHECK(c.sparse(c.dense(x)) == x);
}
