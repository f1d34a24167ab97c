#pragma once

#include <stdexcept>
#include <string>

namespace opaq {

// Malformed models, partitions, counterexamples or arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A construction exceeded its configured state budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opaq
