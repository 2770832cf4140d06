#pragma once

#include <stdexcept>
#include <string>

namespace zonerec {

// Base of every error the library throws. `kind()` is a stable short tag that
// the CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse_error", what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error("validation_error", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config_error", what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension_mismatch", what) {}
};

// SMO ran into its iteration cap before every KKT violation dropped below
// the tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double max_violation)
      : Error("convergence_error", what), max_violation_(max_violation) {}

  double max_violation() const noexcept { return max_violation_; }

 private:
  double max_violation_;
};

}  // namespace zonerec
