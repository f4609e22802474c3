#pragma once

#include <stdexcept>
#include <string>

namespace chainsync {

// Base for every error raised by the library. The CLI maps subclasses onto
// process exit codes (see tools/chainsync.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration problems: malformed text, unknown keys, out-of-range values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class UnknownKey : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// The quadratic form is not bounded below (or is too close to a zero mode).
class InstabilityError : public Error {
 public:
  InstabilityError(double min_eigenvalue, const std::string& what)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class ZeroModeError : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

class UncertaintyViolation : public Error {
 public:
  using Error::Error;
};

class NonPhysical : public Error {
 public:
  using Error::Error;
};

class DegenerateWindow : public Error {
 public:
  using Error::Error;
};

class NoCrossings : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainsync
