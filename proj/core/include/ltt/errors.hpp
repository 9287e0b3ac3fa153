#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ltt {

// Base for every error the library raises. Batch operations attach the
// sigma at which a per-point evaluation failed before rethrowing.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message)
      : std::runtime_error(message), message_(message) {}

  const char* what() const noexcept override { return composed_.empty() ? message_.c_str() : composed_.c_str(); }

  const std::optional<double>& sigma() const noexcept { return sigma_; }

  void attach_sigma(double sigma);

 private:
  std::string message_;
  std::string composed_;
  std::optional<double> sigma_;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Parameter regime the requested conditioning does not support
// (e.g. mu > lambda under the uniform age prior).
class UnsupportedCondition : public Error {
 public:
  using Error::Error;
};

// Quadrature failed to reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& message, double value, double error_estimate)
      : Error(message), value_(value), error_estimate_(error_estimate) {}

  double value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

// Rejection sampler ran out of attempts.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& message, std::uint64_t accepted, std::uint64_t attempted)
      : Error(message), accepted_(accepted), attempted_(attempted) {}

  std::uint64_t accepted() const noexcept { return accepted_; }
  std::uint64_t attempted() const noexcept { return attempted_; }
  double acceptance_rate() const noexcept {
    return attempted_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(attempted_);
  }

 private:
  std::uint64_t accepted_;
  std::uint64_t attempted_;
};

}  // namespace ltt
