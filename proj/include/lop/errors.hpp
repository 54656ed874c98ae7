#pragma once

#include <stdexcept>
#include <string>

namespace lop {

// Digits required by an operation are not known at the current precision.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid input: singular matrix, ramified prime, bad level, ...
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Overdetermined linear system with nonzero residual.
class InconsistentSystem : public std::runtime_error {
 public:
  InconsistentSystem(const std::string& what, long residual_valuation)
      : std::runtime_error(what), residual_valuation(residual_valuation) {}
  long residual_valuation;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lop
