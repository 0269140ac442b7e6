#pragma once

#include <stdexcept>
#include <string>

namespace arenareward {

// Base of every error the library raises on bad input data. The CLI maps
// these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Out-of-domain numeric parameter (non-positive dispersion, empty team, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A game state (or pair of states) that cannot be evaluated.
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed reward spec or unknown component name.
class SpecError : public Error {
 public:
  using Error::Error;
};

// Tabular input that does not match its schema. column() names the offender
// when there is one.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what, std::string column = {})
      : Error(what), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class EmptyTableError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

}  // namespace arenareward
