#include "ltt/bdmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ltt/errors.hpp"

namespace ltt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_time(double t, const char* what) {
  if (!(t >= 0.0) || std::isnan(t)) throw DomainError(std::string(what) + ": time must be >= 0");
}

// ln(1 + mu r(t)); zero for pure birth.
double log_one_plus_mu_r(double t, const BirthDeathParams& p) {
  if (p.mu() == 0.0 || t == 0.0) return 0.0;
  return log1p_exp(std::log(p.mu()) + log_elapsed_weight(p.delta(), t));
}

// Stirling-series remainder ln(x!) - [(x + 1/2) ln x - x + ln(2 pi)/2].
double stirling_remainder(double x) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  if (x <= 15.0) {
    return std::lgamma(x + 1.0) - (x + 0.5) * std::log(x) + x - kHalfLog2Pi;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
}

}  // namespace

double log1p_exp(double x) {
  if (x == -kInf) return 0.0;
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double log_abs_expm1(double x) {
  if (x > 0.0) {
    if (x < std::numbers::ln2) return std::log(std::expm1(x));
    return x + std::log1p(-std::exp(-x));
  }
  return std::log(-std::expm1(x));
}

double elapsed_weight(double delta, double s) {
  const double ds = delta * s;
  if (std::abs(ds) < kCriticalThreshold) {
    // Second-order expansion; exact in double precision below the threshold.
    return s * (1.0 - 0.5 * ds);
  }
  return -std::expm1(-ds) / delta;
}

double log_elapsed_weight(double delta, double s) {
  if (s == 0.0) return -kInf;
  const double ds = delta * s;
  if (std::abs(ds) < kCriticalThreshold) {
    return std::log(s) + std::log1p(-0.5 * ds);
  }
  return log_abs_expm1(-ds) - std::log(std::abs(delta));
}

double p_survival(double t, const BirthDeathParams& params) {
  require_time(t, "p_survival");
  if (t == 0.0) return 1.0;
  return std::exp(-log_one_plus_mu_r(t, params));
}

double u_of_t(double t, const BirthDeathParams& params) {
  require_time(t, "u_of_t");
  if (t == 0.0) return 0.0;
  if (t == kInf) {
    return params.delta() > 0.0 ? 1.0 : params.lambda() / params.mu();
  }
  return std::exp(std::log(params.lambda()) + log_elapsed_weight(params.delta(), t) -
                  log_one_plus_mu_r(t, params));
}

double FFactor::value() const { return pole ? kInf : std::exp(log_value); }

FFactor f_factor(double sigma, double t, const BirthDeathParams& params) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("f_factor: sigma must lie in [0, 1]");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("f_factor: t must be positive and finite");
  if (sigma == 0.0) return FFactor{-kInf, false};
  if (sigma == 1.0) return FFactor{kInf, true};

  const double delta = params.delta();
  const double before = sigma * t;
  const double after = (1.0 - sigma) * t;
  const double log_f = log_elapsed_weight(delta, before) - delta * after -
                       log_elapsed_weight(delta, after) - log_one_plus_mu_r(t, params);
  return FFactor{log_f, false};
}

double log_binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("log_binomial: need 0 <= k <= n");
  if (k == 0 || k == n) return 0.0;
  // With k the smaller part, k ln(n/k) carries no large absolute error.
  k = std::min(k, n - k);
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double rest = static_cast<double>(n - k);
  // Stirling form with the large n ln n terms cancelled analytically.
  const double main = kk * std::log(nn / kk) - rest * std::log1p(-kk / nn);
  const double half = 0.5 * std::log(nn / (kk * rest));
  const double corr = stirling_remainder(nn) - stirling_remainder(kk) - stirling_remainder(rest);
  return main + half - kHalfLog2Pi + corr;
}

}  // namespace ltt
