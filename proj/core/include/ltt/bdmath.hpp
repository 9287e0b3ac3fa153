#pragma once

#include "ltt/params.hpp"

namespace ltt {

// Below this |delta * t| the closed forms are replaced by their exact
// delta -> 0 limits.
inline constexpr double kCriticalThreshold = 1e-8;

// r(s) = (1 - exp(-delta s)) / delta, with limit s at delta = 0. Every
// model quantity below is a rational function of r and exp(-delta s):
//   lambda - mu exp(-delta s) = delta (1 + mu r(s)).
double elapsed_weight(double delta, double s);
double log_elapsed_weight(double delta, double s);

// Probability a single lineage started at time 0 has descendants at t.
double p_survival(double t, const BirthDeathParams& params);

// Geometric parameter of the extant-count distribution of a surviving
// process of age t.
double u_of_t(double t, const BirthDeathParams& params);

// f(sigma, t): odds-like factor of the lineage-count distribution at
// relative time sigma of a tree of age t with n extant species.
// f = 0 at sigma = 0; at sigma = 1 f is infinite and reported as a pole
// (the lineage count is then n with probability one).
struct FFactor {
  double log_value = 0.0;  // -inf at sigma = 0; meaningless if pole
  bool pole = false;

  double value() const;
  bool operator==(const FFactor&) const = default;
};

FFactor f_factor(double sigma, double t, const BirthDeathParams& params);

// ln C(n, k), accurate to about 1e-14 relative for n up to 1e6 and beyond.
double log_binomial(long long n, long long k);

// Numerically stable helpers shared by the analytic layer.
double log1p_exp(double x);         // ln(1 + e^x)
double log_abs_expm1(double x);     // ln |e^x - 1|, x != 0

}  // namespace ltt
