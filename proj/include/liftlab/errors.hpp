#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liftlab {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Expression evaluated outside its domain (division by zero, log of a nonpositive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Singular metric, singular Jacobian, shape mismatch and similar geometric failures.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Closed-form and flow-oracle Lie derivatives disagree: an engine bug, not a verdict.
class CrossCheckError : public Error {
 public:
  using Error::Error;
};

}  // namespace liftlab
