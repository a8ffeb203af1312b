#include "motcalc/torsor.hpp"

#include "motcalc/errors.hpp"

#include <sstream>

namespace motcalc {

namespace {

std::int64_t reduce(std::int64_t v, std::int64_t n) {
  std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}

}  // namespace

TorsorClass TorsorClass::make(std::string base, bool j_not_1728, std::vector<std::int64_t> ambient,
                              std::vector<std::int64_t> element) {
  if (ambient.size() != element.size())
    throw ValidationError("torsor element length differs from ambient group");
  for (auto n : ambient)
    if (n <= 0) throw ValidationError("torsor ambient invariant factors must be positive");
  TorsorClass t{std::move(base), j_not_1728, std::move(ambient), std::move(element)};
  for (std::size_t i = 0; i < t.element.size(); ++i) t.element[i] = reduce(t.element[i], t.ambient[i]);
  return t;
}

bool TorsorClass::is_zero() const {
  for (auto v : element)
    if (v != 0) return false;
  return true;
}

bool TorsorClass::killed_by(std::int64_t n) const {
  for (std::size_t i = 0; i < element.size(); ++i)
    if (reduce(element[i] * n, ambient[i]) != 0) return false;
  return true;
}

std::string TorsorClass::to_string() const {
  std::ostringstream os;
  os << base << "[";
  for (std::size_t i = 0; i < element.size(); ++i) os << (i ? "," : "") << element[i] << " mod " << ambient[i];
  os << "]";
  return os.str();
}

TorsorClass jk_torsor(const TorsorClass& c, std::int64_t k) {
  TorsorClass out = c;
  for (std::size_t i = 0; i < out.element.size(); ++i)
    out.element[i] = reduce(reduce(k, out.ambient[i]) * out.element[i], out.ambient[i]);
  return out;
}

bool curves_isomorphic(const TorsorClass& a, const TorsorClass& b) {
  if (a.base != b.base) throw ValidationError("torsors over different base curves: " + a.base + " vs " + b.base);
  if (a.ambient != b.ambient) throw ValidationError("torsors in different ambient groups");
  if (a.element == b.element) return true;
  for (std::size_t i = 0; i < a.element.size(); ++i)
    if (reduce(-a.element[i], a.ambient[i]) != b.element[i]) return false;
  return true;
}

}  // namespace motcalc
