#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace waring {

/// Base class for every error raised by the library.
class WaringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The zero form has no Waring rank; rank and decomposition entry points reject it.
class ZeroFormError : public WaringError {
 public:
  ZeroFormError() : WaringError("the zero form has no Waring decomposition") {}
};

/// Degree or size precondition violated (operator degree > form degree, r out of range, ...).
class DegreeError : public WaringError {
 public:
  using WaringError::WaringError;
};

/// Text could not be parsed. `position()` is a byte offset into the input.
class ParseError : public WaringError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : WaringError(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Floating-point machinery failed (root finder did not converge, repeated root, ...).
class NumericFailure : public WaringError {
 public:
  using WaringError::WaringError;
};

/// A search exhausted its budget without an answer it can stand behind.
class SearchExhausted : public WaringError {
 public:
  using WaringError::WaringError;
};

}  // namespace waring
