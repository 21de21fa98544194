#pragma once

#include <stdexcept>
#include <string>

namespace lagrep {

/// Broad classification of failures. The CLI maps these onto exit codes.
enum class ErrorKind {
  input,          ///< malformed expressions, files, dimension mismatches
  math,           ///< division by zero, singular matrices, unmet preconditions
  resource_bound, ///< jet-order or exponent bound exceeded
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InputError : Error {
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

struct MathError : Error {
  explicit MathError(const std::string& what) : Error(ErrorKind::math, what) {}
};

struct BoundError : Error {
  explicit BoundError(const std::string& what)
      : Error(ErrorKind::resource_bound, what) {}
};

}  // namespace lagrep
