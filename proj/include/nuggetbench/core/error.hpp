#pragma once

#include <stdexcept>
#include <string>

namespace nb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files (bad JSON, missing keys, wrong types).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad configuration values (degenerate generator settings, invalid model dims).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Tensor/vector operand shape mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for the given bin domain (e.g. cumulative over
// categorical bins).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

// Non-finite values where finite ones are required (NaN gradients, divergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nb
