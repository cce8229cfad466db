#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace teglab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad base, digit, index, arity, or other out-of-contract argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Signed 64-bit exponent or integer arithmetic would overflow.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Periodic quadrature grid too coarse for the integrand's band limit.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// A field evaluation left its domain or produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Instance exceeds a size guard (path enumeration, dense expansion, precision tiers).
class GuardError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& detail);

  /// Byte offset of the offending token in the source text.
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace teglab
