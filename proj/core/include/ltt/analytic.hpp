#pragma once

#include <vector>

#include "ltt/curve.hpp"
#include "ltt/params.hpp"
#include "ltt/quad.hpp"

namespace ltt {

/// Lineage-count distributions and expectations of the reconstructed tree
/// of a constant-rate birth-death process, conditioned on n extant species.
///
/// Timed operations take the tree age t and a relative time sigma in [0, 1]
/// (sigma = 0 is the origin, or the MRCA for the MRCA-conditioned variants;
/// sigma = 1 is the present). Probabilities are evaluated in log space.
/// Invalid arguments raise DomainError; the uniform-prior operations raise
/// UnsupportedCondition when mu > lambda and AccuracyError when the
/// quadrature misses its tolerance.

/// Number of extant descendants of one reconstructed lineage alive at
/// sigma*t: geometric on m >= 1 with parameter u((1 - sigma) t).
double descendants_pmf(double sigma, double t, int m, const BirthDeathParams& params);

/// Reconstructed lineage count at sigma*t for a process surviving to t,
/// without conditioning on the extant count:
/// (1 - u(st)P(t)/P(st)) (u(st)P(t)/P(st))^(m-1).
/// At sigma = 1 this is the extant-count distribution given survival.
double unconditional_pmf(double sigma, double t, int m, const BirthDeathParams& params);

/// P[N_t = n] from a single lineage, including the extinction mass:
/// P(t)(1 - u(t))u(t)^(n-1) for n >= 1, 1 - P(t) for n = 0.
double extant_count_pmf(double t, int n, const BirthDeathParams& params);

/// P[M_{sigma,t} = m | M_{1,t} = n], tree of known origin age t.
double density_given_origin(int n, int m, double sigma, double t, const BirthDeathParams& params);
LineagePmf pmf_given_origin(int n, double sigma, double t, const BirthDeathParams& params);

/// E[M_{sigma,t} | M_{1,t} = n] = (1 + n f) / (1 + f).
double expect_given_origin(int n, double sigma, double t, const BirthDeathParams& params);

/// Lineage count when t is the age of the MRCA (n >= 2). The two daughter
/// clades split the n species uniformly, which collapses to
/// C(n-2, m-2) f^(m-2) / (1 + f)^(n-2) on 2 <= m <= n.
double density_given_mrca(int n, int m, double sigma, double t, const BirthDeathParams& params);
LineagePmf pmf_given_mrca(int n, double sigma, double t, const BirthDeathParams& params);

/// (2 + n f) / (1 + f).
double expect_given_mrca(int n, double sigma, double t, const BirthDeathParams& params);

/// E[M_{sigma,t} | M_{1,t} > 0]
///   = e^(delta sigma t) (lambda - mu e^(-delta t)) / (lambda - mu e^(-delta (1-sigma) t)).
double expect_given_survival(double sigma, double t, const BirthDeathParams& params);

/// Posterior density of the origin age given n extant species under a
/// uniform prior on [0, inf). Requires rho <= 1.
double age_density(double t, int n, const BirthDeathParams& params);

/// Lineage-count distribution with the origin age integrated against
/// age_density.
double density_unknown_age(int n, int m, double sigma, const BirthDeathParams& params,
                           const QuadratureSpec& quad = {});
LineagePmf pmf_unknown_age(int n, double sigma, const BirthDeathParams& params,
                           const QuadratureSpec& quad = {});

/// E[M_sigma | M_1 = n] under the uniform age prior. Depends on the rates
/// only through rho. Dispatches to the pure-birth closed form, the critical
/// integral, or the general integral.
double expect_unknown_age(int n, double sigma, const BirthDeathParams& params,
                          const QuadratureSpec& quad = {});

// The individual routes behind expect_unknown_age, exposed for
// cross-validation.
namespace unknown_age {

/// Largest n evaluated by the alternating closed sum; above it the pure-birth
/// case switches to quadrature.
inline constexpr int kYuleSumMaxN = 30;

double yule_closed_sum(int n, double sigma);
double yule_integral(int n, double sigma, const QuadratureSpec& quad = {});
double critical_integral(int n, double sigma, const QuadratureSpec& quad = {});
double general_integral(int n, double sigma, double rho, const QuadratureSpec& quad = {});

}  // namespace unknown_age

/// Expected lineage count at each sigma of the grid, dispatched on the
/// condition. Errors carry the failing sigma.
LttCurve ltt_curve(const Condition& condition, int n, const BirthDeathParams& params,
                   const std::vector<double>& sigma_grid, const QuadratureSpec& quad = {});

}  // namespace ltt
