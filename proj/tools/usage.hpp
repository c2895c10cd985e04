#pragma once

#include <stdexcept>
#include <string>

namespace eacomm::cli {

// Invalid command line, configuration or experiment specification.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eacomm::cli
