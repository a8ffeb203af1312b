#pragma once

// Brute-force point counts of explicit varieties over prime fields. Used as
// an independent numerical check of class identities.

#include "motcalc/universe.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace motcalc {

/// Arithmetic in F_p.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);
  std::uint32_t order() const { return p_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p_; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p_ - b) % p_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
  }
  std::uint32_t neg(std::uint32_t a) const { return (p_ - a) % p_; }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t reduce(std::int64_t v) const;

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Integer polynomial in variables x0, x1, ... Exponent vectors carry no
/// trailing zeros.
class Polynomial {
 public:
  using Exponents = std::vector<unsigned>;

  Polynomial() = default;
  static Polynomial constant(std::int64_t c);
  static Polynomial variable(std::size_t i);
  /// Grammar: sums and differences of products of integers, variables x<i>,
  /// parenthesized subexpressions and powers ^<int>.
  static Polynomial parse(std::string_view text);

  const std::map<Exponents, std::int64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t variable_bound() const;  ///< one more than the largest variable index used
  /// Degrees of the monomials in variables [begin, end), or nullopt when they differ.
  std::optional<unsigned> homogeneous_degree(std::size_t begin, std::size_t end) const;
  std::uint32_t evaluate(const PrimeField& f, std::span<const std::uint32_t> point) const;
  /// Replaces x_i by images[i].
  Polynomial substitute(std::span<const Polynomial> images) const;
  Polynomial shifted(std::size_t offset) const;
  std::string to_string() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial pow(unsigned e) const;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void add_term(Exponents e, std::int64_t c);
  std::map<Exponents, std::int64_t> terms_;
};

struct AmbientBlock {
  bool projective = true;
  int dimension = 0;
  std::size_t variables() const { return projective ? dimension + 1 : dimension; }
  friend bool operator==(const AmbientBlock&, const AmbientBlock&) = default;
};

/// Subvariety of a product of projective and affine spaces cut out by
/// `equations`, minus the common zero locus of `opens` (if any).
struct ExplicitVariety {
  std::string name;
  std::vector<AmbientBlock> ambient;
  std::vector<Polynomial> equations;
  std::vector<Polynomial> opens;

  std::size_t variables() const;
  /// Throws ValidationError on out-of-range variables or non-homogeneous
  /// equations in a projective block.
  void validate() const;

  static ExplicitVariety projective_space(int n);
  static ExplicitVariety affine_space(int n);
  static ExplicitVariety product(const ExplicitVariety& a, const ExplicitVariety& b);
  /// Linear change of coordinates; images must map each projective block to
  /// linear forms in the same block.
  ExplicitVariety substituted(std::span<const Polynomial> images) const;
};

/// Parses the plain-text model format:
///   model <name>
///   ambient P<n> [A<m> ...]
///   eq <polynomial>
///   open <polynomial>
///   end
/// '#' starts a comment.
std::vector<ExplicitVariety> parse_models(std::string_view text, const std::string& source = "<models>");

struct CountOptions {
  unsigned jobs = 1;
  std::uint64_t budget = 0;  ///< 0 means default_budget()
};

/// MOTCALC_BUDGET when set, otherwise 10^8 evaluated points.
std::uint64_t default_budget();

std::uint64_t count(const ExplicitVariety& v, std::uint32_t q, const CountOptions& options = {});

struct CountVerdict {
  bool pass = false;
  std::vector<std::uint64_t> counts;
  std::string detail;
};

/// |X| = |U| + |Z|.
CountVerdict verify_cut_and_paste(const ExplicitVariety& x, const ExplicitVariety& open, const ExplicitVariety& closed,
                                  std::uint32_t q, const CountOptions& options = {});
/// |Bl| = |base| + |center| (|P^{c-1}| - 1).
CountVerdict verify_blowup(const ExplicitVariety& base, const ExplicitVariety& center, const ExplicitVariety& blowup,
                           int codim, std::uint32_t q, const CountOptions& options = {});

class ModelRegistry {
 public:
  void add(ExplicitVariety v);
  const ExplicitVariety* find(const std::string& name) const;
  const std::map<std::string, ExplicitVariety>& all() const { return models_; }

  /// Explicit model of a class: its declared model, the standard model of a
  /// projective or affine space or point, or the product of factor models.
  ExplicitVariety model_for(const Universe& u, ClassId x) const;
  bool has_model(const Universe& u, ClassId x) const;

 private:
  std::map<std::string, ExplicitVariety> models_;
};

Integer measure(const Universe& u, const ModelRegistry& models, const GroupElement& x, std::uint32_t q,
                const CountOptions& options = {});

}  // namespace motcalc
