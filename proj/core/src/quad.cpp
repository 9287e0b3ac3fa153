#include "ltt/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "ltt/errors.hpp"

namespace ltt {
namespace {

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss
// rule (odd indices of kNodes plus the centre).
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Panel {
  double a;
  double b;
  double value;
  double error;
  std::size_t id;
};

// Heap order: largest error on top, earliest panel first among equals.
bool less_urgent(const Panel& x, const Panel& y) {
  if (x.error != y.error) return x.error < y.error;
  return x.id > y.id;
}

Panel kronrod15(const Integrand& f, double a, double b, std::size_t id) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);
  // Nodes of very narrow panels can round onto an endpoint; keep them open.
  auto open = [&](double x) {
    if (x <= a) return std::nextafter(a, b);
    if (x >= b) return std::nextafter(b, a);
    return x;
  };

  std::array<double, 7> lo{};
  std::array<double, 7> hi{};
  const double fc = f(centre);
  double gauss = fc * kGaussWeights[3];
  double kronrod = fc * kKronrodWeights[7];
  double resabs = std::abs(kronrod);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    lo[j] = f(open(centre - dx));
    hi[j] = f(open(centre + dx));
    const double pair = lo[j] + hi[j];
    kronrod += kKronrodWeights[j] * pair;
    resabs += kKronrodWeights[j] * (std::abs(lo[j]) + std::abs(hi[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double resasc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    resasc += kKronrodWeights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));
  }
  resasc *= abs_half;
  resabs *= abs_half;

  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > kTiny / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return Panel{a, b, kronrod * half, err, id};
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t mid = xs.size() / 2;
  return pairwise_sum(xs.first(mid)) + pairwise_sum(xs.subspan(mid));
}

double tolerance(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("quadrature needs max_subdivisions >= 1");
}

QuadResult integrate_unit(const Integrand& f, const QuadratureSpec& spec) {
  spec.validate();

  std::vector<Panel> heap;
  heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
  std::size_t next_id = 0;
  heap.push_back(kronrod15(f, 0.0, 1.0, next_id++));

  double value = heap.front().value;
  double error = heap.front().error;
  int splits = 0;
  bool finite = std::isfinite(value) && std::isfinite(error);

  while (finite && error > tolerance(spec, value) && splits < spec.max_subdivisions) {
    std::pop_heap(heap.begin(), heap.end(), less_urgent);
    const Panel worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // panel at machine resolution
    heap.pop_back();

    Panel left = kronrod15(f, worst.a, mid, next_id++);
    Panel right = kronrod15(f, mid, worst.b, next_id++);
    value += (left.value + right.value) - worst.value;
    error += (left.error + right.error) - worst.error;
    finite = std::isfinite(value) && std::isfinite(error);

    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), less_urgent);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), less_urgent);
    ++splits;
  }

  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> values(heap.size());
  std::vector<double> errors(heap.size());
  for (std::size_t i = 0; i < heap.size(); ++i) {
    values[i] = heap[i].value;
    errors[i] = heap[i].error;
  }

  QuadResult result;
  result.value = pairwise_sum(values);
  result.error_estimate = pairwise_sum(errors);
  result.subdivisions_used = splits;
  result.converged = std::isfinite(result.value) && std::isfinite(result.error_estimate) &&
                     result.error_estimate <= tolerance(spec, result.value);
  return result;
}

QuadResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_interval: bounds must be finite");
  const double width = b - a;
  QuadResult r = integrate_unit([&](double x) { return width * f(a + width * x); }, spec);
  return r;
}

QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec, HalfLineMap map, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("integrate_semi_infinite: scale must be positive");
  switch (map) {
    case HalfLineMap::kExponential:
      // t = -ln(x) / c, dt = dx / (c x)
      return integrate_unit(
          [&](double x) {
            const double t = -std::log(x) / scale;
            const double g = f(t);
            return g == 0.0 ? 0.0 : g / (scale * x);
          },
          spec);
    case HalfLineMap::kRational:
      // t = x / ((1 - x) c), dt = dx / (c (1 - x)^2)
      return integrate_unit(
          [&](double x) {
            const double w = 1.0 - x;
            const double t = x / (w * scale);
            const double g = f(t);
            return g == 0.0 ? 0.0 : g / (scale * w * w);
          },
          spec);
  }
  throw DomainError("integrate_semi_infinite: unknown map");
}

}  // namespace ltt
