#pragma once

#include <stdexcept>
#include <string>

namespace pmb {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateGridError : DomainError {
  using DomainError::DomainError;
};

struct NumericError : std::runtime_error {
  double partial;
  NumericError(const std::string& msg, double partial_value)
      : std::runtime_error(msg), partial(partial_value) {}
};

}  // namespace pmb
