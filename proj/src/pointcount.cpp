#include "motcalc/pointcount.hpp"

#include "motcalc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace motcalc {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw ValidationError("only prime fields are supported, got q = " + std::to_string(p));
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t result = 1 % p_;
  std::uint32_t base = a % p_;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of zero");
  return pow(a, p_ - 2);
}

std::uint32_t PrimeField::reduce(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
}

// ---------------------------------------------------------------------------

namespace {

Polynomial::Exponents trimmed(Polynomial::Exponents e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
  return e;
}

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("polynomial '" + std::string(text_) + "': " + what + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::uint64_t number() {
    skip();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected a number");
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_++] - '0');
      if (v > (1ull << 40)) fail("number too large");
    }
    return v;
  }
  Polynomial expression() {
    Polynomial acc;
    bool negative = eat('-');
    if (!negative) eat('+');
    for (;;) {
      Polynomial t = term();
      if (negative) acc -= t;
      else acc += t;
      if (eat('+')) negative = false;
      else if (eat('-')) negative = true;
      else return acc;
    }
  }
  Polynomial term() {
    Polynomial acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }
  Polynomial factor() {
    Polynomial base;
    skip();
    if (eat('(')) {
      base = expression();
      if (!eat(')')) fail("expected ')'");
    } else if (eat('x')) {
      base = Polynomial::variable(number());
    } else {
      base = Polynomial::constant(static_cast<std::int64_t>(number()));
    }
    if (eat('^')) base = base.pow(static_cast<unsigned>(number()));
    return base;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

void Polynomial::add_term(Exponents e, std::int64_t c) {
  if (c == 0) return;
  e = trimmed(std::move(e));
  auto [it, inserted] = terms_.emplace(std::move(e), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::constant(std::int64_t c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t i) {
  Polynomial p;
  Exponents e(i + 1, 0);
  e[i] = 1;
  p.add_term(std::move(e), 1);
  return p;
}

Polynomial Polynomial::parse(std::string_view text) { return PolyParser(text).parse(); }

std::size_t Polynomial::variable_bound() const {
  std::size_t n = 0;
  for (const auto& [e, c] : terms_) n = std::max(n, e.size());
  return n;
}

std::optional<unsigned> Polynomial::homogeneous_degree(std::size_t begin, std::size_t end) const {
  std::optional<unsigned> degree;
  for (const auto& [e, c] : terms_) {
    unsigned d = 0;
    for (std::size_t i = begin; i < end && i < e.size(); ++i) d += e[i];
    if (degree && *degree != d) return std::nullopt;
    degree = d;
  }
  return degree ? degree : 0u;
}

std::uint32_t Polynomial::evaluate(const PrimeField& f, std::span<const std::uint32_t> point) const {
  std::uint32_t sum = 0;
  for (const auto& [e, c] : terms_) {
    std::uint32_t v = f.reduce(c);
    for (std::size_t i = 0; i < e.size() && v != 0; ++i)
      if (e[i]) v = f.mul(v, f.pow(point[i], e[i]));
    sum = f.add(sum, v);
  }
  return sum;
}

Polynomial Polynomial::substitute(std::span<const Polynomial> images) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (i >= images.size()) throw ValidationError("substitution misses variable x" + std::to_string(i));
      t = t * images[i].pow(e[i]);
    }
    out += t;
  }
  return out;
}

Polynomial Polynomial::shifted(std::size_t offset) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    Exponents s(offset, 0);
    s.insert(s.end(), e.begin(), e.end());
    out.add_term(std::move(s), c);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    const std::int64_t a = c < 0 ? -c : c;
    out += out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) out += std::to_string(a);
    else if (a == 1) out += mono;
    else out += std::to_string(a) + "*" + mono;
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponents e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
      for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      out.add_term(std::move(e), ca * cb);
    }
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial out = constant(1);
  for (unsigned i = 0; i < e; ++i) out = out * *this;
  return out;
}

// ---------------------------------------------------------------------------

std::size_t ExplicitVariety::variables() const {
  std::size_t n = 0;
  for (const auto& b : ambient) n += b.variables();
  return n;
}

void ExplicitVariety::validate() const {
  const std::size_t n = variables();
  auto check = [&](const Polynomial& p, const char* kind) {
    if (p.variable_bound() > n)
      throw ValidationError("model '" + name + "': " + kind + " uses a variable beyond x" + std::to_string(n - 1));
    std::size_t begin = 0;
    for (const auto& b : ambient) {
      if (b.projective && !p.homogeneous_degree(begin, begin + b.variables()))
        throw ValidationError("model '" + name + "': " + kind + " '" + p.to_string() +
                              "' is not homogeneous in a projective block");
      begin += b.variables();
    }
  };
  for (const auto& b : ambient)
    if (b.dimension < 0) throw ValidationError("model '" + name + "': negative ambient dimension");
  for (const auto& p : equations) check(p, "equation");
  for (const auto& p : opens) check(p, "open condition");
}

ExplicitVariety ExplicitVariety::projective_space(int n) {
  return ExplicitVariety{"P" + std::to_string(n), {AmbientBlock{true, n}}, {}, {}};
}

ExplicitVariety ExplicitVariety::affine_space(int n) {
  return ExplicitVariety{"A" + std::to_string(n), {AmbientBlock{false, n}}, {}, {}};
}

ExplicitVariety ExplicitVariety::product(const ExplicitVariety& a, const ExplicitVariety& b) {
  ExplicitVariety out;
  out.name = a.name + "×" + b.name;
  out.ambient = a.ambient;
  out.ambient.insert(out.ambient.end(), b.ambient.begin(), b.ambient.end());
  const std::size_t offset = a.variables();
  out.equations = a.equations;
  for (const auto& p : b.equations) out.equations.push_back(p.shifted(offset));
  // The open loci multiply: a point lies in U_a × U_b when some open form of
  // each side is nonzero, i.e. some product f·g is nonzero.
  if (a.opens.empty()) {
    for (const auto& p : b.opens) out.opens.push_back(p.shifted(offset));
  } else if (b.opens.empty()) {
    out.opens = a.opens;
  } else {
    for (const auto& f : a.opens)
      for (const auto& g : b.opens) out.opens.push_back(f * g.shifted(offset));
  }
  return out;
}

ExplicitVariety ExplicitVariety::substituted(std::span<const Polynomial> images) const {
  if (images.size() != variables()) throw ValidationError("substitution must give one image per variable");
  std::size_t begin = 0;
  for (const auto& b : ambient) {
    for (std::size_t i = begin; i < begin + b.variables(); ++i) {
      for (const auto& [e, c] : images[i].terms()) {
        unsigned inside = 0;
        unsigned total = 0;
        for (std::size_t k = 0; k < e.size(); ++k) {
          total += e[k];
          if (k >= begin && k < begin + b.variables()) inside += e[k];
        }
        if (b.projective && (total != 1 || inside != 1))
          throw ValidationError("substitution must be linear within each projective block");
      }
    }
    begin += b.variables();
  }
  ExplicitVariety out = *this;
  out.equations.clear();
  out.opens.clear();
  for (const auto& p : equations) out.equations.push_back(p.substitute(images));
  for (const auto& p : opens) out.opens.push_back(p.substitute(images));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<ExplicitVariety> parse_models(std::string_view text, const std::string& source) {
  std::vector<ExplicitVariety> out;
  std::optional<ExplicitVariety> current;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ValidationError(source + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    std::string rest;
    std::getline(ls, rest);
    try {
      if (keyword == "model") {
        if (current) fail("model '" + current->name + "' is missing 'end'");
        std::istringstream rs(rest);
        std::string name;
        if (!(rs >> name)) fail("model needs a name");
        current = ExplicitVariety{name, {}, {}, {}};
      } else if (!current) {
        fail("'" + keyword + "' outside a model block");
      } else if (keyword == "ambient") {
        std::istringstream rs(rest);
        std::string block;
        while (rs >> block) {
          if (block.size() < 2 || (block[0] != 'P' && block[0] != 'A') ||
              !std::all_of(block.begin() + 1, block.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
            fail("bad ambient block '" + block + "'");
          current->ambient.push_back(AmbientBlock{block[0] == 'P', std::stoi(block.substr(1))});
        }
      } else if (keyword == "eq") {
        current->equations.push_back(Polynomial::parse(rest));
      } else if (keyword == "open") {
        current->opens.push_back(Polynomial::parse(rest));
      } else if (keyword == "end") {
        if (current->ambient.empty()) fail("model '" + current->name + "' has no ambient");
        current->validate();
        out.push_back(std::move(*current));
        current.reset();
      } else {
        fail("unknown keyword '" + keyword + "'");
      }
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      if (what.rfind(source + ":", 0) == 0) throw;
      fail(what);
    }
  }
  if (current) fail("model '" + current->name + "' is missing 'end'");
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t default_budget() {
  if (const char* env = std::getenv("MOTCALC_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 100'000'000ull;
}

namespace {

struct BlockLayout {
  AmbientBlock block;
  std::size_t offset = 0;
  std::uint64_t representatives = 0;
};

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Writes the r-th normalized representative of the block into point.
void decode_block(const BlockLayout& l, std::uint64_t r, std::uint32_t q, std::span<std::uint32_t> point) {
  const int n = l.block.dimension;
  auto digits = [&](std::size_t from, std::size_t count, std::uint64_t v) {
    for (std::size_t i = 0; i < count; ++i) {
      point[from + count - 1 - i] = static_cast<std::uint32_t>(v % q);
      v /= q;
    }
  };
  if (!l.block.projective) {
    digits(l.offset, static_cast<std::size_t>(n), r);
    return;
  }
  // Leading nonzero coordinate at position k is 1; later coordinates free.
  for (int k = 0; k <= n; ++k) {
    const std::uint64_t span = ipow(q, n - k);
    if (r < span) {
      for (int i = 0; i < k; ++i) point[l.offset + i] = 0;
      point[l.offset + k] = 1;
      digits(l.offset + k + 1, static_cast<std::size_t>(n - k), r);
      return;
    }
    r -= span;
  }
}

}  // namespace

std::uint64_t count(const ExplicitVariety& v, std::uint32_t q, const CountOptions& options) {
  v.validate();
  PrimeField f(q);
  std::vector<BlockLayout> layout;
  std::size_t offset = 0;
  unsigned __int128 total = 1;
  const std::uint64_t budget = options.budget ? options.budget : default_budget();
  for (const auto& b : v.ambient) {
    BlockLayout l{b, offset, 0};
    unsigned __int128 reps = 0;
    if (b.projective) {
      unsigned __int128 p = 1;
      for (int k = 0; k <= b.dimension; ++k) {
        reps += p;
        p *= q;
        if (p > budget) p = budget + 1;
      }
    } else {
      reps = 1;
      for (int k = 0; k < b.dimension; ++k) {
        reps *= q;
        if (reps > budget) reps = budget + 1;
      }
    }
    total *= reps;
    if (total > budget)
      throw BudgetExceeded("counting '" + v.name + "' over F_" + std::to_string(q) + " exceeds the budget of " +
                           std::to_string(budget) + " points");
    l.representatives = static_cast<std::uint64_t>(reps);
    layout.push_back(l);
    offset += b.variables();
  }
  const std::uint64_t points = static_cast<std::uint64_t>(total);
  const std::size_t nvars = offset;

  auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint32_t> point(nvars);
    std::uint64_t found = 0;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::uint64_t rest = idx;
      for (auto it = layout.rbegin(); it != layout.rend(); ++it) {
        decode_block(*it, rest % it->representatives, q, point);
        rest /= it->representatives;
      }
      bool on = std::all_of(v.equations.begin(), v.equations.end(),
                            [&](const Polynomial& p) { return p.evaluate(f, point) == 0; });
      if (on && !v.opens.empty())
        on = std::any_of(v.opens.begin(), v.opens.end(), [&](const Polynomial& p) { return p.evaluate(f, point) != 0; });
      if (on) ++found;
    }
    return found;
  };

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1 || points < 1024) return scan(0, points);
  std::vector<std::uint64_t> partial(jobs, 0);
  std::vector<std::thread> workers;
  const std::uint64_t chunk = (points + jobs - 1) / jobs;
  for (unsigned j = 0; j < jobs; ++j) {
    const std::uint64_t begin = std::min<std::uint64_t>(points, j * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(points, begin + chunk);
    workers.emplace_back([&, j, begin, end] { partial[j] = scan(begin, end); });
  }
  for (auto& w : workers) w.join();
  std::uint64_t sum = 0;
  for (auto p : partial) sum += p;
  return sum;
}

CountVerdict verify_cut_and_paste(const ExplicitVariety& x, const ExplicitVariety& open, const ExplicitVariety& closed,
                                  std::uint32_t q, const CountOptions& options) {
  CountVerdict v;
  v.counts = {count(x, q, options), count(open, q, options), count(closed, q, options)};
  v.pass = v.counts[0] == v.counts[1] + v.counts[2];
  v.detail = "|" + x.name + "| = " + std::to_string(v.counts[0]) + ", |" + open.name + "| + |" + closed.name +
             "| = " + std::to_string(v.counts[1]) + " + " + std::to_string(v.counts[2]) + " over F_" + std::to_string(q);
  return v;
}

CountVerdict verify_blowup(const ExplicitVariety& base, const ExplicitVariety& center, const ExplicitVariety& blowup,
                           int codim, std::uint32_t q, const CountOptions& options) {
  if (codim < 1) throw ValidationError("blow-up codimension must be positive");
  CountVerdict v;
  const std::uint64_t fibre = count(ExplicitVariety::projective_space(codim - 1), q, options);
  v.counts = {count(blowup, q, options), count(base, q, options), count(center, q, options)};
  v.pass = v.counts[0] == v.counts[1] + v.counts[2] * (fibre - 1);
  v.detail = "|" + blowup.name + "| = " + std::to_string(v.counts[0]) + ", |" + base.name + "| + |" + center.name +
             "|·(|P" + std::to_string(codim - 1) + "| - 1) = " + std::to_string(v.counts[1]) + " + " +
             std::to_string(v.counts[2]) + "·" + std::to_string(fibre - 1) + " over F_" + std::to_string(q);
  return v;
}

// ---------------------------------------------------------------------------

void ModelRegistry::add(ExplicitVariety v) {
  v.validate();
  auto name = v.name;
  if (!models_.emplace(name, std::move(v)).second) throw ValidationError("duplicate model '" + name + "'");
}

const ExplicitVariety* ModelRegistry::find(const std::string& name) const {
  auto it = models_.find(name);
  return it == models_.end() ? nullptr : &it->second;
}

ExplicitVariety ModelRegistry::model_for(const Universe& u, ClassId x) const {
  const ClassMeta& m = u.meta(x);
  if (m.model) {
    if (const auto* v = find(*m.model)) return *v;
    throw ValidationError("class '" + u.label(x) + "' names unknown model '" + *m.model + "'");
  }
  if (auto n = u.projective_dimension(x)) return ExplicitVariety::projective_space(*n);
  if (auto n = u.affine_dimension(x)) return ExplicitVariety::affine_space(*n);
  const auto& factors = u.factors(x);
  if (factors.size() > 1) {
    ExplicitVariety acc = model_for(u, factors.front());
    for (std::size_t i = 1; i < factors.size(); ++i) acc = ExplicitVariety::product(acc, model_for(u, factors[i]));
    acc.name = u.label(x);
    return acc;
  }
  throw ValidationError("no explicit model for class '" + u.label(x) + "'");
}

bool ModelRegistry::has_model(const Universe& u, ClassId x) const {
  try {
    model_for(u, x);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

Integer measure(const Universe& u, const ModelRegistry& models, const GroupElement& x, std::uint32_t q,
                const CountOptions& options) {
  Integer sum = 0;
  for (const auto& [cls, coeff] : x.terms()) sum += coeff * Integer(count(models.model_for(u, cls), q, options));
  return sum;
}

}  // namespace motcalc
