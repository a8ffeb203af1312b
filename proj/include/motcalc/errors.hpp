#pragma once

#include <stdexcept>
#include <string>

namespace motcalc {

/// Declared data violates a structural invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A declaration contradicts a rigidity certificate issued by the oracle.
class ContradictionError : public ValidationError {
 public:
  ContradictionError(const std::string& what, std::string rule)
      : ValidationError(what), rule_(std::move(rule)) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

/// Consecutive letters or words do not compose.
class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point enumeration would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace motcalc
