#include <cmath>
#include <sstream>
#include <tuple>
#include <utility>
#include <vector>

#include "cli.hpp"
#include "ltt/analytic.hpp"
#include "ltt/bdmath.hpp"

namespace ltt::cli {
namespace {

struct Worst {
  double deviation = 0.0;
  std::string where;

  void update(double dev, const std::string& label) {
    if (!(dev <= deviation)) {  // NaN counts as worst
      deviation = dev;
      where = label;
    }
  }
};

std::string point_label(double lambda, double mu, double t, int n, double sigma) {
  std::ostringstream os;
  os << "lambda=" << lambda << " mu=" << mu << " t=" << t << " n=" << n << " sigma=" << sigma;
  return os.str();
}

PropertyResult finish(const std::string& name, const Worst& w, double tol) {
  return PropertyResult{name, w.deviation <= tol, w.deviation, tol, w.where};
}

const std::vector<std::pair<double, double>> kRates = {{1.0, 0.0}, {1.0, 0.5}, {1.0, 0.99}, {1.0, 1.0}};
const std::vector<double> kAges = {1.0, 10.0};
const std::vector<int> kCounts = {2, 5, 10, 50};
const std::vector<double> kSigmas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

// Neumaier-compensated sum of E[M | n] P[n | survival] over n >= 1.
double survival_series(double sigma, double t, const BirthDeathParams& p) {
  const double u = u_of_t(t, p);
  double sum = 0.0;
  double comp = 0.0;
  auto add = [&](double x) {
    const double s = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - s) + x : (x - s) + sum;
    sum = s;
  };
  for (int n = 1;; ++n) {
    const double weight = unconditional_pmf(1.0, t, n, p);
    add(expect_given_origin(n, sigma, t, p) * weight);
    // Remaining mass times the largest remaining expectation bounds the tail.
    const double tail_mass = std::pow(u, n);
    if (tail_mass * (n + 1.0 / (1.0 - u)) < 1e-13 || n > 50'000'000) break;
  }
  return sum + comp;
}

}  // namespace

std::vector<PropertyResult> run_verify_suite(const QuadratureSpec& quad) {
  std::vector<PropertyResult> results;

  Worst norm;
  Worst mean;
  for (auto [lambda, mu] : kRates) {
    const BirthDeathParams p(lambda, mu);
    for (double t : kAges) {
      for (int n : kCounts) {
        for (double sigma : kSigmas) {
          const LineagePmf origin = pmf_given_origin(n, sigma, t, p);
          const LineagePmf mrca = pmf_given_mrca(n, sigma, t, p);
          const std::string at = point_label(lambda, mu, t, n, sigma);
          norm.update(std::abs(origin.total() - 1.0), "origin " + at);
          norm.update(std::abs(mrca.total() - 1.0), "mrca " + at);
          mean.update(std::abs(origin.mean() - expect_given_origin(n, sigma, t, p)), "origin " + at);
          mean.update(std::abs(mrca.mean() - expect_given_mrca(n, sigma, t, p)), "mrca " + at);
        }
      }
    }
  }
  results.push_back(finish("normalization (origin, mrca)", norm, 1e-12));
  results.push_back(finish("expectation consistency (origin, mrca)", mean, 1e-10));

  Worst boundary;
  for (auto [lambda, mu] : kRates) {
    const BirthDeathParams p(lambda, mu);
    for (int n : kCounts) {
      const std::string at = point_label(lambda, mu, 3.0, n, 0.0);
      boundary.update(std::abs(expect_given_origin(n, 0.0, 3.0, p) - 1.0), "origin sigma=0 " + at);
      boundary.update(std::abs(expect_given_survival(0.0, 3.0, p) - 1.0), "survival sigma=0 " + at);
      boundary.update(std::abs(expect_given_mrca(n, 0.0, 3.0, p) - 2.0), "mrca sigma=0 " + at);
      boundary.update(std::abs(expect_given_origin(n, 1.0, 3.0, p) - n), "origin sigma=1 " + at);
      boundary.update(std::abs(expect_given_mrca(n, 1.0, 3.0, p) - n), "mrca sigma=1 " + at);
      boundary.update(std::abs(expect_unknown_age(n, 0.0, p, quad) - 1.0), "uniform sigma=0 " + at);
      boundary.update(std::abs(expect_unknown_age(n, 1.0, p, quad) - n), "uniform sigma=1 " + at);
    }
  }
  results.push_back(finish("boundary exactness", boundary, 0.0));

  Worst scaling;
  for (double rho : {0.0, 0.3, 0.75, 0.99}) {
    for (double delta : {0.05, 0.7, 2.5}) {
      const double lambda = delta / (1.0 - rho);
      const BirthDeathParams p(lambda, rho * lambda);
      const BirthDeathParams unit = BirthDeathParams::unit_delta(rho);
      for (double t : {0.5, 4.0}) {
        for (double sigma : {0.2, 0.5, 0.8}) {
          for (int m = 1; m <= 10; ++m) {
            const double a = density_given_origin(10, m, sigma, t, p);
            const double b = density_given_origin(10, m, sigma, p.delta() * t, unit);
            scaling.update(std::abs(a - b) / std::max(std::abs(b), 1e-300) * (b > 1e-300 ? 1.0 : 0.0),
                           point_label(lambda, rho * lambda, t, 10, sigma));
          }
        }
      }
    }
  }
  results.push_back(finish("time-rescaling symmetry (relative)", scaling, 1e-12));

  Worst survival;
  for (auto [lambda, mu, t] : std::vector<std::tuple<double, double, double>>{
           {1.0, 0.0, 2.0}, {1.0, 0.5, 3.0}, {2.0, 1.0, 1.5}, {1.0, 1.0, 4.0}, {0.5, 0.9, 3.0}}) {
    const BirthDeathParams p(lambda, mu);
    for (double sigma : {0.25, 0.5, 0.75}) {
      survival.update(std::abs(expect_given_survival(sigma, t, p) - survival_series(sigma, t, p)),
                      point_label(lambda, mu, t, 0, sigma));
    }
  }
  results.push_back(finish("survival decomposition", survival, 1e-8));

  Worst age_norm;
  for (auto [lambda, mu] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {1.0, 0.5}, {1.0, 1.0}}) {
    const BirthDeathParams p(lambda, mu);
    for (int n : {1, 2, 5, 10}) {
      const auto map = p.is_critical() ? HalfLineMap::kRational : HalfLineMap::kExponential;
      const QuadResult r = integrate_semi_infinite([&](double t) { return t > 0.0 ? age_density(t, n, p) : 0.0; },
                                                   quad, map);
      age_norm.update(std::abs(r.value - 1.0), point_label(lambda, mu, 0.0, n, 0.0));
    }
  }
  results.push_back(finish("age density normalization", age_norm, 1e-8));

  Worst unknown;
  for (double mu : {0.0, 0.5}) {
    const BirthDeathParams p(1.0, mu);
    const LineagePmf pmf = pmf_unknown_age(5, 0.5, p, quad);
    unknown.update(std::abs(pmf.total() - 1.0), "total " + point_label(1.0, mu, 0.0, 5, 0.5));
    unknown.update(std::abs(pmf.mean() - expect_unknown_age(5, 0.5, p, quad)),
                   "mean " + point_label(1.0, mu, 0.0, 5, 0.5));
  }
  results.push_back(finish("uniform-prior pmf consistency", unknown, 1e-6));

  return results;
}

}  // namespace ltt::cli
