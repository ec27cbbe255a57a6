#pragma once

#include <stdexcept>
#include <string>

namespace berkhyb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: unknown labels, malformed files, missing fields.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Data that parses but breaks a stated invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ModelInconsistencyError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRepresentationError : public Error {
 public:
  using Error::Error;
};

// A sign of a symbolic quantity could not be decided at working precision.
class UncertifiedComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace berkhyb
