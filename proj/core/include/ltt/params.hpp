#pragma once

#include <optional>
#include <variant>

namespace ltt {

// Constant-rate birth-death model. delta and rho are derived once at
// construction so every caller sees bit-identical values.
class BirthDeathParams {
 public:
  // Throws DomainError unless lambda > 0 and mu >= 0 (both finite).
  BirthDeathParams(double lambda, double mu);

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  double delta() const noexcept { return delta_; }  // lambda - mu
  double rho() const noexcept { return rho_; }      // mu / lambda

  bool is_yule() const noexcept { return mu_ == 0.0; }
  bool is_critical() const noexcept { return delta_ == 0.0; }

  // Same rho, delta == 1. Used to express the time-rescaling symmetry.
  static BirthDeathParams unit_delta(double rho);

  friend bool operator==(const BirthDeathParams&, const BirthDeathParams&) = default;

 private:
  double lambda_;
  double mu_;
  double delta_;
  double rho_;
};

// Conditioning regimes for an LTT query. The timed variants carry the age t
// of the tree (since origin, or since the MRCA for MrcaAge).
struct OriginAge {
  double t;
  friend bool operator==(const OriginAge&, const OriginAge&) = default;
};
struct MrcaAge {
  double t;
  friend bool operator==(const MrcaAge&, const MrcaAge&) = default;
};
struct Survival {
  double t;
  friend bool operator==(const Survival&, const Survival&) = default;
};
struct UniformAgePrior {
  friend bool operator==(const UniformAgePrior&, const UniformAgePrior&) = default;
};

using Condition = std::variant<OriginAge, MrcaAge, Survival, UniformAgePrior>;

// Tree age carried by the condition, or nullopt for UniformAgePrior.
std::optional<double> condition_age(const Condition& condition);

// "origin", "mrca", "survival", "uniform-prior".
const char* condition_name(const Condition& condition);

// Throws DomainError when a timed condition has t <= 0 or non-finite t.
void validate(const Condition& condition);

}  // namespace ltt
