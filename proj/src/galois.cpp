#include "motcalc/galois.hpp"

#include "motcalc/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace motcalc {

Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

namespace {

void check_permutation(const Permutation& p, std::size_t n, const std::string& what) {
  if (p.size() != n) throw ValidationError(what + ": permutation has wrong degree");
  std::vector<bool> seen(n, false);
  for (auto v : p) {
    if (v >= n || seen[v]) throw ValidationError(what + ": not a permutation");
    seen[v] = true;
  }
}

}  // namespace

GaloisGroup::GaloisGroup() : GaloisGroup({"e"}, {Permutation{0}}) {}

GaloisGroup::GaloisGroup(std::vector<std::string> names, std::vector<Permutation> elements)
    : names_(std::move(names)), elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("Galois group must be non-empty");
  if (names_.size() != elements_.size()) throw ValidationError("Galois group: names/elements mismatch");
  const std::size_t degree = elements_.front().size();
  std::map<Permutation, std::size_t> lookup;
  for (std::size_t g = 0; g < elements_.size(); ++g) {
    check_permutation(elements_[g], degree, "Galois group element " + names_[g]);
    if (!lookup.emplace(elements_[g], g).second)
      throw ValidationError("Galois group: duplicate element " + names_[g]);
  }
  auto id_it = std::find_if(elements_.begin(), elements_.end(), is_identity);
  if (id_it == elements_.end()) throw ValidationError("Galois group: identity missing");
  identity_ = static_cast<std::size_t>(id_it - elements_.begin());

  const std::size_t n = elements_.size();
  table_.resize(n * n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      auto it = lookup.find(compose(elements_[g], elements_[h]));
      if (it == lookup.end())
        throw ValidationError("Galois group not closed: " + names_[g] + "*" + names_[h]);
      table_[g * n + h] = it->second;
    }
  inverses_.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    bool found = false;
    for (std::size_t k = 0; k < n && !found; ++k)
      if (multiply(g, k) == identity_) {
        inverses_[g] = k;
        found = true;
      }
    if (!found) throw ValidationError("Galois group: no inverse for " + names_[g]);
  }
  class_of_.assign(n, n);
  for (std::size_t g = 0; g < n; ++g) {
    if (class_of_[g] != n) continue;
    for (std::size_t h = 0; h < n; ++h) class_of_[multiply(multiply(h, g), inverses_[h])] = g;
  }
}

std::size_t GaloisGroup::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("unknown Galois element '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

// ---------------------------------------------------------------------------

GaloisSet GaloisSet::trivial(const GaloisGroup& gamma, std::size_t size) {
  GaloisSet s;
  s.size = size;
  Permutation id(size);
  std::iota(id.begin(), id.end(), 0u);
  s.action.assign(gamma.order(), id);
  return s;
}

GaloisSet GaloisSet::product(const GaloisSet& a, const GaloisSet& b) {
  GaloisSet s;
  s.size = a.size * b.size;
  s.action.resize(a.action.size());
  for (std::size_t g = 0; g < a.action.size(); ++g) {
    Permutation p(s.size);
    for (std::size_t i = 0; i < a.size; ++i)
      for (std::size_t j = 0; j < b.size; ++j)
        p[i * b.size + j] = static_cast<std::uint32_t>(a.action[g][i] * b.size + b.action[g][j]);
    s.action[g] = std::move(p);
  }
  return s;
}

void GaloisSet::validate(const GaloisGroup& gamma, bool irreducible) const {
  if (size == 0) throw ValidationError("component set must be non-empty");
  if (action.size() != gamma.order())
    throw ValidationError("component action must list one permutation per Galois element");
  for (std::size_t g = 0; g < action.size(); ++g) check_permutation(action[g], size, "component action");
  if (!is_identity(action[gamma.identity()])) throw ValidationError("identity must act trivially");
  for (std::size_t g = 0; g < action.size(); ++g)
    for (std::size_t h = 0; h < action.size(); ++h)
      if (compose(action[g], action[h]) != action[gamma.multiply(g, h)])
        throw ValidationError("component action is not a homomorphism");
  if (irreducible && !transitive())
    throw ValidationError("irreducible class needs a transitive component action");
}

bool GaloisSet::transitive() const {
  std::vector<bool> reached(size, false);
  std::vector<std::uint32_t> stack{0};
  reached[0] = true;
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    for (const auto& p : action)
      if (!reached[p[i]]) {
        reached[p[i]] = true;
        stack.push_back(p[i]);
      }
  }
  return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

std::size_t GaloisSet::fixed_points(std::size_t g) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < size; ++i)
    if (action[g][i] == i) ++n;
  return n;
}

// ---------------------------------------------------------------------------

CharacterVector CharacterVector::zero(const GaloisGroup& gamma) {
  return CharacterVector{std::vector<Integer>(gamma.order())};
}

CharacterVector CharacterVector::permutation(const GaloisGroup& gamma, const GaloisSet& set) {
  CharacterVector chi = zero(gamma);
  for (std::size_t g = 0; g < gamma.order(); ++g) chi.values[g] = set.fixed_points(g);
  return chi;
}

void CharacterVector::validate(const GaloisGroup& gamma) const {
  if (values.size() != gamma.order()) throw ValidationError("character has wrong length");
  for (std::size_t g = 0; g < values.size(); ++g)
    if (values[g] != values[gamma.conjugacy_class(g)])
      throw ValidationError("character is not constant on conjugacy classes");
}

bool CharacterVector::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](const Integer& v) { return v == 0; });
}

CharacterVector& CharacterVector::operator+=(const CharacterVector& other) {
  if (values.size() < other.values.size()) values.resize(other.values.size());
  for (std::size_t g = 0; g < other.values.size(); ++g) values[g] += other.values[g];
  return *this;
}

CharacterVector& CharacterVector::operator-=(const CharacterVector& other) {
  if (values.size() < other.values.size()) values.resize(other.values.size());
  for (std::size_t g = 0; g < other.values.size(); ++g) values[g] -= other.values[g];
  return *this;
}

CharacterVector CharacterVector::scaled(const Integer& factor) const {
  CharacterVector out = *this;
  for (auto& v : out.values) v *= factor;
  return out;
}

std::string CharacterVector::to_string(const GaloisGroup& gamma) const {
  std::ostringstream os;
  os << "{";
  for (std::size_t g = 0; g < values.size(); ++g)
    os << (g ? ", " : "") << gamma.name(g) << ": " << values[g];
  os << "}";
  return os.str();
}

}  // namespace motcalc
