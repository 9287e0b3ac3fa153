#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "ltt/bdmath.hpp"
#include "ltt/errors.hpp"
#include "ltt/params.hpp"

namespace ltt {
namespace {

TEST(Params, DerivedQuantitiesAreExact) {
  const BirthDeathParams p(1.5, 0.6);
  EXPECT_EQ(p.delta(), 1.5 - 0.6);
  EXPECT_EQ(p.rho(), 0.6 / 1.5);
  EXPECT_TRUE(BirthDeathParams(2.0, 0.0).is_yule());
  EXPECT_TRUE(BirthDeathParams(2.0, 2.0).is_critical());
}

TEST(Params, RejectsInvalidRates) {
  EXPECT_THROW(BirthDeathParams(0.0, 0.0), DomainError);
  EXPECT_THROW(BirthDeathParams(-1.0, 0.0), DomainError);
  EXPECT_THROW(BirthDeathParams(1.0, -0.1), DomainError);
  EXPECT_THROW(BirthDeathParams(NAN, 0.0), DomainError);
  EXPECT_THROW(BirthDeathParams(INFINITY, 0.0), DomainError);
  EXPECT_NO_THROW(BirthDeathParams(1.0, 3.0));  // rho > 1 is fine for known ages
}

TEST(Survival, Examples) {
  EXPECT_EQ(p_survival(0.0, BirthDeathParams(1.0, 0.5)), 1.0);
  EXPECT_EQ(p_survival(5.0, BirthDeathParams(1.0, 0.0)), 1.0);
  EXPECT_NEAR(p_survival(2.0, BirthDeathParams(1.0, 0.5)), 0.5 / (1.0 - 0.5 * std::exp(-1.0)), 1e-15);
}

TEST(Survival, UExamples) {
  EXPECT_EQ(u_of_t(0.0, BirthDeathParams(1.0, 0.5)), 0.0);
  EXPECT_NEAR(u_of_t(60.0, BirthDeathParams(1.0, 0.0)), 1.0, 1e-15);
  const double expected = (1.0 - std::exp(-1.0)) / (1.0 - 0.5 * std::exp(-1.0));
  EXPECT_NEAR(u_of_t(2.0, BirthDeathParams(1.0, 0.5)), expected, 1e-15);
}

// The textbook forms, evaluated independently of the r(s) rewrite.
double textbook_p(double t, double lambda, double mu) {
  const double d = lambda - mu;
  return d / (lambda - mu * std::exp(-d * t));
}

double textbook_u(double t, double lambda, double mu) {
  const double d = lambda - mu;
  return lambda * (1.0 - std::exp(-d * t)) / (lambda - mu * std::exp(-d * t));
}

TEST(Survival, MatchesTextbookFormsAcrossRegimes) {
  for (auto [lambda, mu] : std::vector<std::pair<double, double>>{{1, 0}, {1, 0.5}, {2, 1.9}, {0.5, 1.5}, {3, 0.1}}) {
    const BirthDeathParams p(lambda, mu);
    for (double t : {0.01, 0.5, 2.0, 7.0}) {
      EXPECT_NEAR(p_survival(t, p), textbook_p(t, lambda, mu), 1e-13);
      EXPECT_NEAR(u_of_t(t, p), textbook_u(t, lambda, mu), 1e-13);
    }
  }
}

TEST(Survival, ContinuousAcrossCriticality) {
  for (double t : {0.3, 1.0, 5.0, 20.0}) {
    const BirthDeathParams crit(1.0, 1.0);
    for (double eps : {1e-8, -1e-8}) {
      const BirthDeathParams near(1.0 + eps, 1.0);
      EXPECT_LT(std::abs(p_survival(t, near) - p_survival(t, crit)), 1e-6);
      EXPECT_LT(std::abs(u_of_t(t, near) - u_of_t(t, crit)), 1e-6);
    }
    EXPECT_NEAR(p_survival(t, crit), 1.0 / (1.0 + t), 1e-15);
    EXPECT_NEAR(u_of_t(t, crit), t / (1.0 + t), 1e-15);
  }
}

TEST(Survival, Monotone) {
  for (auto [lambda, mu] : std::vector<std::pair<double, double>>{{1, 0.5}, {1, 1}, {1, 2}}) {
    const BirthDeathParams p(lambda, mu);
    double prev_p = 1.0;
    double prev_u = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double t = 0.1 * i;
      EXPECT_LE(p_survival(t, p), prev_p);
      EXPECT_GE(u_of_t(t, p), prev_u);
      prev_p = p_survival(t, p);
      prev_u = u_of_t(t, p);
    }
  }
}

TEST(ElapsedWeight, LimitBranchIsContinuous) {
  for (double s : {0.5, 3.0, 40.0}) {
    EXPECT_EQ(elapsed_weight(0.0, s), s);
    for (double delta : {1e-7, -1e-7, 1e-10, 1e-12}) {
      const long double direct = -std::expm1l(-static_cast<long double>(delta) * s) / delta;
      EXPECT_NEAR(elapsed_weight(delta, s), static_cast<double>(direct), 1e-14 * s);
      EXPECT_NEAR(log_elapsed_weight(delta, s), std::log(static_cast<double>(direct)), 1e-14);
    }
  }
}

TEST(FFactor, Examples) {
  EXPECT_EQ(f_factor(0.0, 3.0, BirthDeathParams(1.0, 0.5)).value(), 0.0);
  EXPECT_TRUE(f_factor(1.0, 3.0, BirthDeathParams(1.0, 0.5)).pole);
  EXPECT_NEAR(f_factor(0.5, 2.0, BirthDeathParams(1.0, 0.0)).value(), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(f_factor(0.5, 1.0, BirthDeathParams(1.0, 1.0)).value(), 0.5, 1e-15);
  EXPECT_NEAR(f_factor(0.5, 1.0, BirthDeathParams(1.0 + 1e-8, 1.0)).value(), 0.5, 1e-8);
}

TEST(FFactor, CriticalLimitFormula) {
  for (double sigma : {0.1, 0.5, 0.9}) {
    for (double t : {0.5, 2.0, 10.0}) {
      const double expected = sigma / ((1.0 - sigma) * (1.0 + t));
      EXPECT_NEAR(f_factor(sigma, t, BirthDeathParams(1.0, 1.0)).value(), expected, 1e-14 * expected);
    }
  }
}

TEST(FFactor, ScalingInvariance) {
  for (double rho : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    for (double delta : {0.01, 0.3, 1.0, 4.0}) {
      if (rho == 1.0) continue;
      const double lambda = delta / (1.0 - rho);
      const BirthDeathParams p(lambda, rho * lambda);
      const BirthDeathParams unit = BirthDeathParams::unit_delta(rho);
      for (double sigma : {0.1, 0.4, 0.8}) {
        for (double t : {0.2, 3.0, 15.0}) {
          const double a = f_factor(sigma, t, p).value();
          const double b = f_factor(sigma, p.delta() * t, unit).value();
          EXPECT_NEAR(a, b, 1e-12 * b);
        }
      }
    }
  }
}

TEST(FFactor, StrictlyIncreasingInSigma) {
  for (auto [lambda, mu] : std::vector<std::pair<double, double>>{{1, 0}, {1, 0.5}, {1, 1}, {0.5, 1.0}}) {
    const BirthDeathParams p(lambda, mu);
    double prev = 0.0;
    for (int i = 1; i < 100; ++i) {
      const double f = f_factor(i / 100.0, 5.0, p).value();
      EXPECT_GT(f, prev);
      prev = f;
    }
  }
}

TEST(FFactor, RejectsBadArguments) {
  const BirthDeathParams p(1.0, 0.5);
  EXPECT_THROW(f_factor(-0.1, 1.0, p), DomainError);
  EXPECT_THROW(f_factor(1.1, 1.0, p), DomainError);
  EXPECT_THROW(f_factor(0.5, 0.0, p), DomainError);
  EXPECT_THROW(f_factor(NAN, 1.0, p), DomainError);
}

double exact_log_binomial(unsigned n, unsigned k) {
  using boost::multiprecision::cpp_int;
  cpp_int c = 1;
  for (unsigned i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  // ln(c) = ln(mantissa) + exponent ln 2, taken from the top 64 bits.
  const unsigned bits = static_cast<unsigned>(msb(c)) + 1;
  const unsigned shift = bits > 64 ? bits - 64 : 0;
  const cpp_int top = c >> shift;
  return std::log(static_cast<double>(top.convert_to<unsigned long long>())) + shift * std::log(2.0);
}

TEST(LogBinomial, SmallExact) {
  EXPECT_EQ(log_binomial(5, 0), 0.0);
  EXPECT_EQ(log_binomial(5, 5), 0.0);
  EXPECT_NEAR(log_binomial(4, 2), std::log(6.0), 1e-15);
  EXPECT_NEAR(log_binomial(4, 2), 1.791759, 1e-6);
}

TEST(LogBinomial, BigIntegerOracle) {
  const double expected = exact_log_binomial(100, 50);
  EXPECT_NEAR(log_binomial(100, 50), expected, 1e-14 * expected);
  for (unsigned n : {7u, 30u, 61u, 250u, 1000u}) {
    for (unsigned k : {1u, 3u, n / 3, n / 2, n - 1}) {
      const double e = exact_log_binomial(n, k);
      EXPECT_NEAR(log_binomial(n, k), e, 2e-14 * std::max(1.0, e)) << n << " " << k;
    }
  }
}

TEST(LogBinomial, LargeArguments) {
  for (long long n : {10'000LL, 1'000'000LL}) {
    for (long long k : {n / 7, n / 2, n - 3}) {
      const long double e = std::lgammal(n + 1.0L) - std::lgammal(k + 1.0L) - std::lgammal(n - k + 1.0L);
      EXPECT_NEAR(log_binomial(n, k), static_cast<double>(e), 1e-13 * static_cast<double>(e));
    }
  }
  // Frozen from a 40-digit evaluation of ln C(n, k).
  EXPECT_NEAR(log_binomial(50'000'000, 7'142'857), 20505806.925779906736, 1e-14 * 2.1e7);
  EXPECT_NEAR(log_binomial(50'000'000, 25'000'000), 34657349.938439126130, 1e-14 * 3.5e7);
  EXPECT_NEAR(log_binomial(50'000'000, 49'999'997), 51.390841160949204487, 1e-13);
  EXPECT_NEAR(log_binomial(1'000'000, 999'997), 39.654769204662267309, 1e-13);
}

TEST(LogBinomial, RejectsOutOfRange) {
  EXPECT_THROW(log_binomial(3, 4), DomainError);
  EXPECT_THROW(log_binomial(3, -1), DomainError);
}

TEST(Helpers, Log1pExpAndLogAbsExpm1) {
  for (double x : {-800.0, -30.0, -1.0, 0.0, 2.0, 40.0, 800.0}) {
    const long double expected = x > 30 ? x + std::log1pl(::expl(-x)) : std::log1pl(::expl(x));
    EXPECT_NEAR(log1p_exp(x), static_cast<double>(expected), 1e-15 * std::max(1.0, std::abs(x)));
  }
  for (double x : {-50.0, -1e-9, 1e-9, 0.7, 30.0}) {
    const long double expected = ::logl(std::abs(std::expm1l(x)));
    EXPECT_NEAR(log_abs_expm1(x), static_cast<double>(expected), 1e-14 * std::max(1.0, std::abs(x)));
  }
}

}  // namespace
}  // namespace ltt
