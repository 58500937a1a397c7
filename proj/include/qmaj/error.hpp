#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmaj {

// Base for every error the toolkit raises. Each subclass maps to a CLI exit
// code (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid grid, tolerance or other configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `offset` is the byte position of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Syntactically valid input that violates a semantic constraint
// (weights not summing to one, parameter out of range, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: leakage, singular matrices, non-symplectic input.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Two distributions with different total integrals were compared.
class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& what, double mismatch)
      : Error(what), mismatch_(mismatch) {}
  double mismatch() const noexcept { return mismatch_; }

 private:
  double mismatch_;
};

// Two distributions live on different cell layouts.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

// A representation/state combination without an implementation.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmaj
