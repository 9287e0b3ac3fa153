#include "ltt/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "ltt/bdmath.hpp"
#include "ltt/errors.hpp"

namespace ltt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_sigma(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in [0, 1]");
}

void require_age(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("tree age t must be positive and finite");
}

void require_count(int n, int minimum, const char* what) {
  if (n < minimum) {
    throw DomainError(std::string(what) + " must be >= " + std::to_string(minimum));
  }
}

void require_subcritical(const BirthDeathParams& params) {
  if (params.mu() > params.lambda()) {
    throw UnsupportedCondition("uniform age prior requires mu <= lambda (rho <= 1)");
  }
}

double checked(const QuadResult& r, const char* what) {
  if (!r.converged) {
    std::ostringstream os;
    os.precision(6);
    os << what << ": quadrature did not converge (value " << r.value << ", error estimate "
       << r.error_estimate << ", " << r.subdivisions_used << " subdivisions)";
    throw AccuracyError(os.str(), r.value, r.error_estimate);
  }
  return r.value;
}

// f / (1 + f) from log f.
double logistic(double log_f) { return std::exp(log_f - log1p_exp(log_f)); }

// C(total, k) f^k / (1 + f)^total.
double binomial_odds_term(int total, int k, double log_f) {
  if (total == 0) return 1.0;
  const double log_term = log_binomial(total, k) + (k == 0 ? 0.0 : k * log_f) - total * log1p_exp(log_f);
  return std::exp(log_term);
}

// Time unit that makes the uniform-prior integrands decay on an O(1) scale.
double natural_timescale(const BirthDeathParams& params) {
  return params.delta() > 0.0 ? params.delta() : params.lambda();
}

HalfLineMap natural_map(const BirthDeathParams& params) {
  return params.delta() > 0.0 ? HalfLineMap::kExponential : HalfLineMap::kRational;
}

}  // namespace

double descendants_pmf(double sigma, double t, int m, const BirthDeathParams& params) {
  if (!(sigma >= 0.0 && sigma < 1.0)) throw DomainError("descendants_pmf: sigma must lie in [0, 1)");
  require_age(t);
  require_count(m, 1, "descendant count m");
  const double remaining = (1.0 - sigma) * t;
  const double u = u_of_t(remaining, params);
  const double one_minus_u = std::exp(-params.delta() * remaining) * p_survival(remaining, params);
  return m == 1 ? one_minus_u : one_minus_u * std::pow(u, m - 1);
}

double unconditional_pmf(double sigma, double t, int m, const BirthDeathParams& params) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw DomainError("unconditional_pmf: sigma must lie in (0, 1]");
  require_age(t);
  require_count(m, 1, "lineage count m");
  const double before = sigma * t;
  const double after = t - before;
  const double log_p_t = std::log(p_survival(t, params));
  // q = u(st) P(t) / P(st) = lambda r(st) P(t);  1 - q = e^{-delta st} P(t) / P((1-s)t).
  const double log_q = std::log(params.lambda()) + log_elapsed_weight(params.delta(), before) + log_p_t;
  const double log_one_minus_q = -params.delta() * before + log_p_t - std::log(p_survival(after, params));
  return std::exp(log_one_minus_q + (m == 1 ? 0.0 : (m - 1) * log_q));
}

double extant_count_pmf(double t, int n, const BirthDeathParams& params) {
  if (!(t >= 0.0) || std::isnan(t)) throw DomainError("extant_count_pmf: t must be >= 0");
  require_count(n, 0, "extant count n");
  const double p = p_survival(t, params);
  if (n == 0) return 1.0 - p;
  if (t == 0.0) return n == 1 ? 1.0 : 0.0;
  const double log_one_minus_u = -params.delta() * t + std::log(p);
  const double log_u = std::log(u_of_t(t, params));
  return std::exp(std::log(p) + log_one_minus_u + (n == 1 ? 0.0 : (n - 1) * log_u));
}

double density_given_origin(int n, int m, double sigma, double t, const BirthDeathParams& params) {
  require_count(n, 1, "extant species n");
  require_sigma(sigma);
  require_age(t);
  if (m < 1 || m > n) return 0.0;
  if (sigma == 0.0) return m == 1 ? 1.0 : 0.0;
  if (sigma == 1.0) return m == n ? 1.0 : 0.0;
  const FFactor f = f_factor(sigma, t, params);
  return binomial_odds_term(n - 1, m - 1, f.log_value);
}

LineagePmf pmf_given_origin(int n, double sigma, double t, const BirthDeathParams& params) {
  LineagePmf pmf{n, sigma, OriginAge{t}, 1, {}};
  pmf.probs.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int m = 1; m <= n; ++m) pmf.probs.push_back(density_given_origin(n, m, sigma, t, params));
  return pmf;
}

double expect_given_origin(int n, double sigma, double t, const BirthDeathParams& params) {
  require_count(n, 1, "extant species n");
  require_sigma(sigma);
  require_age(t);
  if (sigma == 0.0) return 1.0;
  if (sigma == 1.0) return static_cast<double>(n);
  const FFactor f = f_factor(sigma, t, params);
  return 1.0 + (n - 1) * logistic(f.log_value);
}

double density_given_mrca(int n, int m, double sigma, double t, const BirthDeathParams& params) {
  require_count(n, 2, "extant species n (MRCA conditioning)");
  require_sigma(sigma);
  require_age(t);
  if (m < 2 || m > n) return 0.0;
  if (sigma == 0.0) return m == 2 ? 1.0 : 0.0;
  if (sigma == 1.0) return m == n ? 1.0 : 0.0;
  const FFactor f = f_factor(sigma, t, params);
  return binomial_odds_term(n - 2, m - 2, f.log_value);
}

LineagePmf pmf_given_mrca(int n, double sigma, double t, const BirthDeathParams& params) {
  require_count(n, 2, "extant species n (MRCA conditioning)");
  LineagePmf pmf{n, sigma, MrcaAge{t}, 2, {}};
  pmf.probs.reserve(static_cast<std::size_t>(n - 1));
  for (int m = 2; m <= n; ++m) pmf.probs.push_back(density_given_mrca(n, m, sigma, t, params));
  return pmf;
}

double expect_given_mrca(int n, double sigma, double t, const BirthDeathParams& params) {
  require_count(n, 2, "extant species n (MRCA conditioning)");
  require_sigma(sigma);
  require_age(t);
  if (sigma == 0.0) return 2.0;
  if (sigma == 1.0) return static_cast<double>(n);
  const FFactor f = f_factor(sigma, t, params);
  return 2.0 + (n - 2) * logistic(f.log_value);
}

double expect_given_survival(double sigma, double t, const BirthDeathParams& params) {
  require_sigma(sigma);
  require_age(t);
  if (sigma == 0.0) return 1.0;
  // lambda - mu e^{-delta s} = delta / P(s), so the ratio is P((1-sigma)t) / P(t).
  const double log_e = params.delta() * sigma * t + std::log(p_survival((1.0 - sigma) * t, params)) -
                       std::log(p_survival(t, params));
  return std::exp(log_e);
}

double age_density(double t, int n, const BirthDeathParams& params) {
  require_subcritical(params);
  require_count(n, 1, "extant species n");
  if (!(t > 0.0)) throw DomainError("age_density: t must be positive");
  if (t == kInf) return 0.0;
  const double log_r = log_elapsed_weight(params.delta(), t);
  const double log_p = std::log(p_survival(t, params));  // -ln(1 + mu r)
  const double log_q = std::log(static_cast<double>(n)) + n * std::log(params.lambda()) +
                       (n == 1 ? 0.0 : (n - 1) * log_r) - params.delta() * t + (n + 1) * log_p;
  return std::exp(log_q);
}

double density_unknown_age(int n, int m, double sigma, const BirthDeathParams& params, const QuadratureSpec& quad) {
  require_subcritical(params);
  require_count(n, 1, "extant species n");
  require_sigma(sigma);
  if (m < 1 || m > n) return 0.0;
  if (n == 1 || sigma == 0.0) return m == 1 ? 1.0 : 0.0;
  if (sigma == 1.0) return m == n ? 1.0 : 0.0;

  const double c = natural_timescale(params);
  auto integrand = [&](double tau) {
    const double t = tau / c;
    if (!(t > 0.0) || !std::isfinite(t)) return 0.0;
    const double q = age_density(t, n, params);
    if (q == 0.0) return 0.0;
    return density_given_origin(n, m, sigma, t, params) * q / c;
  };
  return checked(integrate_semi_infinite(integrand, quad, natural_map(params)), "density_unknown_age");
}

LineagePmf pmf_unknown_age(int n, double sigma, const BirthDeathParams& params, const QuadratureSpec& quad) {
  require_count(n, 1, "extant species n");
  LineagePmf pmf{n, sigma, UniformAgePrior{}, 1, {}};
  pmf.probs.reserve(static_cast<std::size_t>(n));
  for (int m = 1; m <= n; ++m) pmf.probs.push_back(density_unknown_age(n, m, sigma, params, quad));
  return pmf;
}

namespace unknown_age {

double yule_closed_sum(int n, double sigma) {
  require_count(n, 1, "extant species n");
  require_sigma(sigma);
  if (n == 1) return 1.0;
  // Alternating sum; long double keeps the cancellation error below 1e-9 up
  // to n = 35.
  const long double s = sigma;
  long double binom = 1.0L;  // C(n-2, k)
  long double acc = 0.0L;
  for (int k = 0; k <= n - 2; ++k) {
    const long double kk = k;
    const long double term = binom / (kk + 2.0L) * s / (kk + 2.0L - s);
    acc += (k % 2 == 0) ? term : -term;
    binom = binom * static_cast<long double>(n - 2 - k) / static_cast<long double>(k + 1);
  }
  return static_cast<double>(1.0L + static_cast<long double>(n) * (n - 1) * acc);
}

double yule_integral(int n, double sigma, const QuadratureSpec& quad) {
  require_count(n, 1, "extant species n");
  require_sigma(sigma);
  if (n == 1) return 1.0;
  const double scale = static_cast<double>(n) * (n - 1);
  auto kernel = [&](double t) {
    if (!(t > 0.0) || !std::isfinite(t)) return 0.0;
    const double log_part = -2.0 * t + (n == 2 ? 0.0 : (n - 2) * std::log(-std::expm1(-t)));
    return scale * std::expm1(sigma * t) * std::exp(log_part);
  };
  return 1.0 + checked(integrate_semi_infinite(kernel, quad, HalfLineMap::kExponential), "yule_integral");
}

double critical_integral(int n, double sigma, const QuadratureSpec& quad) {
  require_count(n, 1, "extant species n");
  require_sigma(sigma);
  if (n == 1) return 1.0;
  const double scale = static_cast<double>(n) * (n - 1) * sigma;
  auto kernel = [&](double t) {
    if (!(t > 0.0) || !std::isfinite(t)) return 0.0;
    // t^{n-1} / (1+t)^{n+1} = (t/(1+t))^{n-1} / (1+t)^2
    const double log_part = (n - 1) * std::log(t / (1.0 + t)) - 2.0 * std::log1p(t);
    return scale * std::exp(log_part) / (1.0 + (1.0 - sigma) * t);
  };
  return 1.0 + checked(integrate_semi_infinite(kernel, quad, HalfLineMap::kRational), "critical_integral");
}

double general_integral(int n, double sigma, double rho, const QuadratureSpec& quad) {
  require_count(n, 1, "extant species n");
  require_sigma(sigma);
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("general_integral: rho must lie in [0, 1)");
  if (n == 1) return 1.0;
  const double scale = static_cast<double>(n) * (n - 1) * (1.0 - rho) * (1.0 - rho);
  auto kernel = [&](double t) {
    if (!(t > 0.0) || !std::isfinite(t)) return 0.0;
    const double log_part = -2.0 * t + (n == 2 ? 0.0 : (n - 2) * std::log(-std::expm1(-t))) -
                            (n + 1) * std::log1p(-rho * std::exp(-t));
    return scale * std::expm1(sigma * t) * std::exp(log_part) / (1.0 - rho * std::exp(-(1.0 - sigma) * t));
  };
  return 1.0 + checked(integrate_semi_infinite(kernel, quad, HalfLineMap::kExponential), "general_integral");
}

}  // namespace unknown_age

double expect_unknown_age(int n, double sigma, const BirthDeathParams& params, const QuadratureSpec& quad) {
  require_subcritical(params);
  require_count(n, 1, "extant species n");
  require_sigma(sigma);
  if (sigma == 0.0 || n == 1) return 1.0;
  if (sigma == 1.0) return static_cast<double>(n);
  if (params.is_yule()) {
    return n <= unknown_age::kYuleSumMaxN ? unknown_age::yule_closed_sum(n, sigma)
                                          : unknown_age::yule_integral(n, sigma, quad);
  }
  if (params.is_critical()) return unknown_age::critical_integral(n, sigma, quad);
  return unknown_age::general_integral(n, sigma, params.rho(), quad);
}

LttCurve ltt_curve(const Condition& condition, int n, const BirthDeathParams& params,
                   const std::vector<double>& sigma_grid, const QuadratureSpec& quad) {
  validate(condition);
  validate_sigma_grid(sigma_grid);
  if (std::holds_alternative<UniformAgePrior>(condition)) require_subcritical(params);

  LttCurve curve{condition, n, params, {}, CurveSource::kAnalytic, std::nullopt};
  curve.points.reserve(sigma_grid.size());
  for (double sigma : sigma_grid) {
    try {
      const double e = std::visit(
          [&](const auto& c) -> double {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, OriginAge>) {
              return expect_given_origin(n, sigma, c.t, params);
            } else if constexpr (std::is_same_v<C, MrcaAge>) {
              return expect_given_mrca(n, sigma, c.t, params);
            } else if constexpr (std::is_same_v<C, Survival>) {
              return expect_given_survival(sigma, c.t, params);
            } else {
              return expect_unknown_age(n, sigma, params, quad);
            }
          },
          condition);
      curve.points.push_back(LttPoint{sigma, e, std::nullopt});
    } catch (Error& e) {
      e.attach_sigma(sigma);
      throw;
    }
  }
  return curve;
}

}  // namespace ltt
