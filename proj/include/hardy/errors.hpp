#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hardy {

/// Malformed expression text. `offset()` is the byte position of the problem.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation outside a function's domain (log of a nonpositive number,
/// division by zero, negative density, ...).
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, std::string subexpression, double x)
      : std::domain_error(what + " in '" + subexpression + "' at x = " + std::to_string(x)),
        subexpression_(std::move(subexpression)),
        x_(x) {}

  const std::string& subexpression() const noexcept { return subexpression_; }
  double x() const noexcept { return x_; }

 private:
  std::string subexpression_;
  double x_;
};

/// A numerical procedure failed to reach its tolerance or hit a degenerate input.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hypothesis of the requested estimate does not hold (e.g. q < p).
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hardy
