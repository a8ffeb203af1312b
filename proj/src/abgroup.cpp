#include "motcalc/abgroup.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace motcalc {

namespace {

const Integer kZero = 0;

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (q * b != a && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

}  // namespace

// ---------------------------------------------------------------------------
// BasisRegistry

BasisId BasisRegistry::intern(std::string_view label) {
  std::string key(label);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  BasisId id{static_cast<std::uint32_t>(labels_.size())};
  labels_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<BasisId> BasisRegistry::find(std::string_view label) const {
  if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
  return std::nullopt;
}

const std::string& BasisRegistry::label(BasisId id) const {
  if (id.value >= labels_.size()) throw std::out_of_range("unknown basis id");
  return labels_[id.value];
}

// ---------------------------------------------------------------------------
// GroupElement

GroupElement GroupElement::basis(BasisId id, Integer coeff) {
  GroupElement e;
  e.add_term(id, coeff);
  return e;
}

const Integer& GroupElement::coefficient(BasisId id) const {
  auto it = terms_.find(id);
  return it == terms_.end() ? kZero : it->second;
}

void GroupElement::add_term(BasisId id, const Integer& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(id, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

GroupElement& GroupElement::operator+=(const GroupElement& other) {
  for (const auto& [id, c] : other.terms_) add_term(id, c);
  return *this;
}

GroupElement& GroupElement::operator-=(const GroupElement& other) {
  for (const auto& [id, c] : other.terms_) add_term(id, -c);
  return *this;
}

GroupElement GroupElement::operator-() const { return scaled(-1); }

GroupElement GroupElement::scaled(const Integer& factor) const {
  GroupElement out;
  if (factor == 0) return out;
  for (const auto& [id, c] : terms_) out.terms_.emplace(id, c * factor);
  return out;
}

std::string GroupElement::to_string(const std::function<std::string(BasisId)>& label) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [id, c] : terms_) {
    Integer mag = abs_value(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << mag;
    os << "[" << label(id) << "]";
    first = false;
  }
  return os.str();
}

std::string GroupElement::to_string(const BasisRegistry& registry) const {
  return to_string([&](BasisId id) { return registry.label(id); });
}

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    for (long long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

void IntMatrix::append_row(std::span<const Integer> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("row length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

void IntMatrix::add_row_multiple(std::size_t target, std::size_t source, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) {
    if ((*this)(source, c) != 0) (*this)(target, c) += factor * (*this)(source, c);
  }
}

void IntMatrix::add_col_multiple(std::size_t target, std::size_t source, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    if ((*this)(r, source) != 0) (*this)(r, target) += factor * (*this)(r, source);
  }
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
}

void IntMatrix::negate_col(std::size_t c) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::row_is_zero(std::size_t r) const {
  return std::all_of(row(r).begin(), row(r).end(), [](const Integer& v) { return v == 0; });
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ",[" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << (*this)(r, c);
    os << "]";
  }
  os << "]";
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

Integer determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  IntMatrix m = input;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      m.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Normal forms

HermiteResult hnf_with_transform(const IntMatrix& m) {
  HermiteResult res{m, IntMatrix::identity(m.rows()), 0};
  IntMatrix& h = res.form;
  IntMatrix& u = res.transform;
  const std::size_t rows = h.rows();
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < rows; ++c) {
    // Euclid on column c among rows r.. until a single nonzero entry remains.
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < rows; ++i) {
        if (h(i, c) == 0) continue;
        if (!best || abs_value(h(i, c)) < abs_value(h(*best, c))) best = i;
      }
      if (!best) break;
      h.swap_rows(r, *best);
      u.swap_rows(r, *best);
      bool done = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (h(i, c) == 0) continue;
        Integer q = h(i, c) / h(r, c);
        h.add_row_multiple(i, r, -q);
        u.add_row_multiple(i, r, -q);
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(h(i, c), h(r, c));
      h.add_row_multiple(i, r, -q);
      u.add_row_multiple(i, r, -q);
    }
    ++r;
  }
  res.rank = r;
  return res;
}

IntMatrix hnf(const IntMatrix& m) { return hnf_with_transform(m).form; }

SmithResult snf(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  IntMatrix v = IntMatrix::identity(m.cols());
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  const std::size_t diag = std::min(rows, cols);

  auto move_to_pivot = [&](std::size_t t, std::size_t i, std::size_t j) {
    a.swap_rows(t, i);
    u.swap_rows(t, i);
    a.swap_cols(t, j);
    v.swap_cols(t, j);
  };

  for (std::size_t t = 0; t < diag; ++t) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a(i, j) != 0 && (!best || abs_value(a(i, j)) < abs_value(a(best->first, best->second))))
          best = {i, j};
    if (!best) break;
    move_to_pivot(t, best->first, best->second);

    for (;;) {
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        a.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        a.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
      }
      // A leftover in row/column t is smaller than the pivot: promote it.
      std::optional<std::pair<std::size_t, std::size_t>> smaller;
      for (std::size_t i = t + 1; i < rows && !smaller; ++i)
        if (a(i, t) != 0) smaller = {i, t};
      for (std::size_t j = t + 1; j < cols && !smaller; ++j)
        if (a(t, j) != 0) smaller = {t, j};
      if (smaller) {
        move_to_pivot(t, smaller->first, smaller->second);
        continue;
      }
      std::optional<std::size_t> offending;
      for (std::size_t i = t + 1; i < rows && !offending; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != 0) {
            offending = i;
            break;
          }
      if (!offending) break;
      a.add_row_multiple(t, *offending, 1);
      u.add_row_multiple(t, *offending, 1);
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      u.negate_row(t);
    }
  }

  SmithResult res;
  res.diagonal.reserve(diag);
  for (std::size_t t = 0; t < diag; ++t) res.diagonal.push_back(a(t, t));
  res.left = std::move(u);
  res.right = std::move(v);
  return res;
}

// ---------------------------------------------------------------------------
// Lattices of sparse elements

Coordinates Coordinates::covering(std::span<const GroupElement> elements) {
  Coordinates coords;
  for (const auto& e : elements) coords.include(e);
  return coords;
}

void Coordinates::include(const GroupElement& x) {
  bool grew = false;
  for (const auto& [id, c] : x.terms()) {
    if (!index.contains(id)) {
      index.emplace(id, 0);
      grew = true;
    }
  }
  if (!grew) return;
  columns.clear();
  for (auto& [id, pos] : index) {
    pos = columns.size();
    columns.push_back(id);
  }
}

std::vector<Integer> Coordinates::dense(const GroupElement& x) const {
  std::vector<Integer> out(columns.size());
  for (const auto& [id, c] : x.terms()) {
    auto it = index.find(id);
    if (it == index.end()) throw std::out_of_range("element outside coordinate layout");
    out[it->second] = c;
  }
  return out;
}

GroupElement Coordinates::sparse(std::span<const Integer> values) const {
  GroupElement out;
  for (std::size_t i = 0; i < values.size(); ++i) out.add_term(columns[i], values[i]);
  return out;
}

IntMatrix Coordinates::matrix(std::span<const GroupElement> rows) const {
  IntMatrix m(0, columns.size());
  for (const auto& r : rows) m.append_row(dense(r));
  return m;
}

std::optional<std::vector<Integer>> member(const GroupElement& x,
                                           std::span<const GroupElement> gens) {
  if (gens.empty()) {
    if (x.is_zero()) return std::vector<Integer>{};
    return std::nullopt;
  }
  Coordinates coords = Coordinates::covering(gens);
  for (const auto& [id, c] : x.terms())
    if (!coords.index.contains(id)) return std::nullopt;
  HermiteResult h = hnf_with_transform(coords.matrix(gens));
  std::vector<Integer> residue = coords.dense(x);
  std::vector<Integer> in_form(h.form.rows());
  std::size_t col = 0;
  for (std::size_t r = 0; r < h.rank; ++r) {
    while (h.form(r, col) == 0) {
      if (residue[col] != 0) return std::nullopt;
      ++col;
    }
    const Integer& pivot = h.form(r, col);
    if (residue[col] % pivot != 0) return std::nullopt;
    Integer q = residue[col] / pivot;
    in_form[r] = q;
    for (std::size_t j = col; j < residue.size(); ++j) residue[j] -= q * h.form(r, j);
    ++col;
  }
  for (const auto& v : residue)
    if (v != 0) return std::nullopt;

  std::vector<Integer> coeffs(gens.size());
  for (std::size_t r = 0; r < h.rank; ++r) {
    if (in_form[r] == 0) continue;
    for (std::size_t j = 0; j < gens.size(); ++j) coeffs[j] += in_form[r] * h.transform(r, j);
  }
  return coeffs;
}

std::vector<GroupElement> lattice_basis(std::span<const GroupElement> gens) {
  Coordinates coords = Coordinates::covering(gens);
  HermiteResult h = hnf_with_transform(coords.matrix(gens));
  std::vector<GroupElement> out;
  for (std::size_t r = 0; r < h.rank; ++r) out.push_back(coords.sparse(h.form.row(r)));
  return out;
}

bool subgroup_equal(std::span<const GroupElement> a, std::span<const GroupElement> b) {
  // Canonical HNF rows over a common column layout.
  Coordinates coords = Coordinates::covering(a);
  for (const auto& e : b) coords.include(e);
  HermiteResult ha = hnf_with_transform(coords.matrix(a));
  HermiteResult hb = hnf_with_transform(coords.matrix(b));
  if (ha.rank != hb.rank) return false;
  for (std::size_t r = 0; r < ha.rank; ++r)
    for (std::size_t c = 0; c < coords.columns.size(); ++c)
      if (ha.form(r, c) != hb.form(r, c)) return false;
  return true;
}

bool subgroup_contains(std::span<const GroupElement> b, std::span<const GroupElement> a) {
  return std::all_of(a.begin(), a.end(), [&](const GroupElement& x) { return member(x, b).has_value(); });
}

IntMatrix left_kernel(const IntMatrix& m) {
  HermiteResult h = hnf_with_transform(m);
  IntMatrix k(0, m.rows());
  for (std::size_t r = h.rank; r < m.rows(); ++r) k.append_row(h.transform.row(r));
  return k;
}

// ---------------------------------------------------------------------------
// PresentedGroup

std::string GroupInvariants::to_string() const {
  std::ostringstream os;
  os << "Z^" << free_rank;
  for (const auto& d : torsion) os << " + Z/" << d;
  return os.str();
}

PresentedGroup::PresentedGroup(std::vector<BasisId> generators, IntMatrix relations)
    : generators_(std::move(generators)), relations_(std::move(relations)) {
  if (relations_.rows() == 0 && relations_.cols() == 0) relations_ = IntMatrix(0, generators_.size());
  if (relations_.cols() != generators_.size())
    throw std::invalid_argument("relation matrix width differs from generator count");
}

std::vector<GroupElement> PresentedGroup::relators() const {
  std::vector<GroupElement> out;
  for (std::size_t r = 0; r < relations_.rows(); ++r) {
    GroupElement e;
    for (std::size_t c = 0; c < generators_.size(); ++c) e.add_term(generators_[c], relations_(r, c));
    if (!e.is_zero()) out.push_back(std::move(e));
  }
  return out;
}

GroupInvariants PresentedGroup::quotient_invariants() const {
  GroupInvariants inv;
  SmithResult s = snf(relations_);
  std::size_t rank = 0;
  for (const auto& d : s.diagonal) {
    if (d == 0) continue;
    ++rank;
    if (d != 1) inv.torsion.push_back(d);
  }
  inv.free_rank = generators_.size() - rank;
  return inv;
}

bool PresentedGroup::is_trivial(const GroupElement& x) const {
  std::vector<GroupElement> rel = relators();
  return member(x, rel).has_value();
}

}  // namespace motcalc
