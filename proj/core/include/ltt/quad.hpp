#pragma once

#include <functional>

namespace ltt {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;

  // Throws DomainError unless both tolerances are positive and
  // max_subdivisions >= 1.
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions_used = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) integration over the open unit interval.
// Panels are refined worst-first (ties broken by creation index) and the
// final sums are taken pairwise in left-to-right panel order, so a result is
// bit-reproducible for a given integrand and spec. Endpoints are never
// evaluated. On failure the best estimate is returned with converged=false.
QuadResult integrate_unit(const Integrand& f, const QuadratureSpec& spec = {});

// Same over (a, b), by affine map onto the unit interval.
QuadResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

// Change of variables used to bring (0, inf) onto (0, 1).
enum class HalfLineMap {
  kExponential,  // t = -ln(x) / scale; for integrands with exponential decay
  kRational,     // t = x / ((1 - x) scale); for algebraic decay
};

QuadResult integrate_semi_infinite(const Integrand& f,
                                   const QuadratureSpec& spec = {},
                                   HalfLineMap map = HalfLineMap::kExponential,
                                   double scale = 1.0);

}  // namespace ltt
