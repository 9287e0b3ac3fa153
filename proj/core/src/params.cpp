#include "ltt/params.hpp"

#include <cmath>
#include <sstream>

#include "ltt/errors.hpp"

namespace ltt {

void Error::attach_sigma(double sigma) {
  sigma_ = sigma;
  std::ostringstream os;
  os.precision(17);
  os << message_ << " (at sigma=" << sigma << ")";
  composed_ = os.str();
}

BirthDeathParams::BirthDeathParams(double lambda, double mu)
    : lambda_(lambda), mu_(mu), delta_(lambda - mu), rho_(mu / lambda) {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    throw DomainError("birth rate lambda must be positive and finite");
  }
  if (!std::isfinite(mu) || !(mu >= 0.0)) {
    throw DomainError("death rate mu must be non-negative and finite");
  }
}

BirthDeathParams BirthDeathParams::unit_delta(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw DomainError("unit-delta parameters need 0 <= rho < 1");
  }
  // lambda - mu = 1 and mu / lambda = rho.
  const double lambda = 1.0 / (1.0 - rho);
  return BirthDeathParams(lambda, rho * lambda);
}

std::optional<double> condition_age(const Condition& condition) {
  return std::visit(
      [](const auto& c) -> std::optional<double> {
        if constexpr (requires { c.t; }) {
          return c.t;
        } else {
          return std::nullopt;
        }
      },
      condition);
}

const char* condition_name(const Condition& condition) {
  switch (condition.index()) {
    case 0:
      return "origin";
    case 1:
      return "mrca";
    case 2:
      return "survival";
    default:
      return "uniform-prior";
  }
}

void validate(const Condition& condition) {
  if (auto t = condition_age(condition); t && !(std::isfinite(*t) && *t > 0.0)) {
    throw DomainError(std::string("condition '") + condition_name(condition) + "' needs a positive finite age");
  }
}

}  // namespace ltt
