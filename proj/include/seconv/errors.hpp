#pragma once

#include <stdexcept>
#include <string>

namespace seconv {

// Bad arguments, inconsistent shapes, out-of-range parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ShapeMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// File system and file-format failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when no non-noisy pixel exists to restore from.
class UnrestorableImage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seconv
