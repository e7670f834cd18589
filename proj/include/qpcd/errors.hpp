#pragma once

#include <stdexcept>
#include <string>

namespace qpcd {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Lookup outside a tabulated range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A model produced a physically inconsistent value (e.g. T_EC outside [0,1]).
class ModelError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

// Configuration problems carry the offending field path and, when known,
// the source line.
class ConfigError : public Error {
 public:
  enum class Kind { parse, missing_field, invalid_value, io };

  ConfigError(Kind kind, std::string field, int line, const std::string& what)
      : Error(what), kind_(kind), field_(std::move(field)), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::string field_;
  int line_;
};

}  // namespace qpcd
