#pragma once

#include <stdexcept>
#include <string>

namespace hods {

/// A precondition on an argument was violated.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// The requested computation exceeds an enumeration or memory budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hods
