#pragma once

#include <stdexcept>
#include <string>

namespace henon {

/// Input rejected before any computation (bad parameters, malformed config).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver a result (no bracket, step-size
/// underflow, count mismatch, singular system, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace henon
