#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace risd2d {

inline constexpr double kPi = std::numbers::pi;

// Euler-Mascheroni constant, 10 decimal places.
inline constexpr double kEulerGamma = 0.5772156649;

// Error hierarchy. Every error carries a short machine-readable category that
// the CLI maps onto its exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}
  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

// A named feasibility constraint (C1..C7) is violated.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(std::string constraint, const std::string& what)
      : Error("constraint", constraint + ": " + what), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

class InvalidModeError : public Error {
 public:
  explicit InvalidModeError(const std::string& what) : Error("mode", what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error("numeric", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// SINR threshold from a rate requirement in bit/s/Hz.
inline double sinr_threshold_from_rate(double rate_bits) { return std::exp2(rate_bits) - 1.0; }

}  // namespace risd2d
