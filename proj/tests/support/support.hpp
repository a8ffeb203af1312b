#pragma once

// Test-side helpers: frozen golden values, naive oracles that share no code
// with the library, and random universes for property tests.

#include "motcalc/bircalc.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

using motcalc::ClassId;
using motcalc::Integer;
using motcalc::IntMatrix;

inline std::string source_path(const std::string& rel) { return std::string(MOTCALC_SOURCE_DIR) + "/" + rel; }

inline const nlohmann::json& golden() {
  static const nlohmann::json g = [] {
    std::ifstream in(source_path("tests/golden/golden.json"));
    return nlohmann::json::parse(in);
  }();
  return g;
}

inline IntMatrix matrix_from_json(const nlohmann::json& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j].get<long long>();
  return m;
}

// -- naive oracles ------------------------------------------------------------

inline Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Laplace expansion; fine for the small minors used here.
inline Integer laplace_det(const std::vector<std::vector<Integer>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Integer sum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    std::vector<std::vector<Integer>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    Integer term = m[0][j] * laplace_det(minor);
    sum += (j % 2 ? -term : term);
  }
  return sum;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// Smith invariants from determinantal divisors: d_k = D_k / D_{k-1}, where
/// D_k is the gcd of all k x k minors. Zeros pad the tail.
inline std::vector<Integer> smith_by_minors(const IntMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols(), n = std::min(r, c);
  std::vector<Integer> out;
  Integer prev = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(r, k, 0, cur, rs);
    subsets(c, k, 0, cur, cs);
    Integer dk = 0;
    for (const auto& ri : rs)
      for (const auto& ci : cs) {
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) sub[a][b] = m(ri[a], ci[b]);
        dk = gcd(dk, laplace_det(sub));
      }
    if (dk == 0) {
      while (out.size() < n) out.push_back(0);
      break;
    }
    out.push_back(dk / prev);
    prev = dk;
  }
  return out;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

// -- random universes -------------------------------------------------------------

/// A universe of at least `min_classes` classes with a pool of letters, all
/// living in the birational class of P^n, so any letter sequence chains.
struct RandomUniverse {
  motcalc::Universe u;
  int n = 3;
  ClassId pn;
  std::vector<motcalc::Letter> letters;
  std::vector<ClassId> lower;  ///< classes of dimension < n

  motcalc::BirWord random_word(std::mt19937_64& rng, std::size_t max_len) const {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
    std::bernoulli_distribution flip(0.5);
    std::vector<motcalc::Letter> ls;
    const std::size_t k = len(rng);
    for (std::size_t i = 0; i < k; ++i) {
      motcalc::Letter l = letters[pick(rng)];
      l.inverse = flip(rng);
      ls.push_back(std::move(l));
    }
    const ClassId start = ls.empty() ? pn : ls.front().source();
    const ClassId end = ls.empty() ? start : ls.back().target();
    return motcalc::BirWord(u, start, end, std::move(ls));
  }
};

inline RandomUniverse make_random_universe(std::uint64_t seed, std::size_t min_classes = 40, int n = 3) {
  using namespace motcalc;
  std::mt19937_64 rng(seed);
  RandomUniverse r;
  r.n = n;
  Universe& u = r.u;
  const ClassId pn = u.projective_space(n);
  r.pn = pn;
  std::vector<ClassId> models{pn};
  int serial = 0;
  auto fresh_lower = [&](int dim) {
    ClassMeta m;
    m.dimension = dim;
    m.flags = smooth_projective();
    ClassId id = u.register_class("V" + std::to_string(serial++) + "d" + std::to_string(dim), m);
    r.lower.push_back(id);
    return id;
  };
  std::uniform_int_distribution<int> coin(0, 9);
  while (u.size() < min_classes || r.letters.size() < 12) {
    const ClassId base = models[std::uniform_int_distribution<std::size_t>(0, models.size() - 1)(rng)];
    const int kind = coin(rng);
    if (kind < 5) {
      const int center_dim = std::uniform_int_distribution<int>(0, n - 2)(rng);
      const ClassId center = fresh_lower(center_dim);
      BlowUp b = make_blowup(u, base, center, n - center_dim, "B" + std::to_string(serial++));
      models.push_back(b.result);
      r.letters.push_back(Letter{b, false});
    } else if (kind < 8) {
      GroupElement complement;
      const int terms = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int t = 0; t < terms; ++t) {
        const int d = std::uniform_int_distribution<int>(0, n - 1)(rng);
        complement.add_term(fresh_lower(d), std::uniform_int_distribution<int>(1, 2)(rng));
      }
      ClassMeta m = u.meta(base);
      m.flags.set(Flag::Projective, false);
      m.picard_rank.reset();
      m.ns_character.reset();
      m.jacobian.reset();
      ClassId open = u.register_class("U" + std::to_string(serial++), m);
      models.push_back(open);
      r.letters.push_back(Letter{make_restriction(u, base, open, complement), false});
    } else {
      ClassMeta m;
      m.dimension = n;
      m.flags = smooth_projective();
      ClassId other = u.register_class("M" + std::to_string(serial++), m);
      models.push_back(other);
      r.letters.push_back(Letter{make_iso(u, base, other, coin(rng) < 5), false});
    }
  }
  return r;
}

}  // namespace testing_support
