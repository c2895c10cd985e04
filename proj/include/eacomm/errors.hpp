#pragma once

#include <stdexcept>
#include <string>

namespace eacomm {

// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine failed to reach its tolerance. `partial` holds the best
// estimate available when the routine gave up.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double partial = 0.0)
      : std::runtime_error(what), partial(partial) {}
  double partial;
};

}  // namespace eacomm
