#include "ltt/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "ltt/analytic.hpp"
#include "ltt/errors.hpp"

namespace ltt {
namespace {

struct Genealogy {
  std::vector<double> birth_time;
  std::vector<LineageId> parent;
};

Genealogy genealogy_of(const EventLog& log) {
  Genealogy g;
  for (const Event& e : log.events) {
    if (e.kind != EventKind::kBirth) continue;
    if (e.lineage != g.birth_time.size()) throw DomainError("event log lineage ids are not dense in birth order");
    g.birth_time.push_back(e.time);
    g.parent.push_back(e.parent);
  }
  return g;
}

// Runs the process; returns false early (log incomplete) once more than
// `abort_above` lineages are alive. abort_above == 0 disables the check.
bool run_process(const BirthDeathParams& params, double t_end, int start_lineages, Rng& rng,
                 std::size_t abort_above, EventLog& log) {
  log.events.clear();
  log.extant_at_end.clear();
  log.t_end = t_end;

  std::vector<LineageId> alive;
  std::vector<LineageId> parent_of;
  for (int i = 0; i < start_lineages; ++i) {
    const auto id = static_cast<LineageId>(i);
    log.events.push_back(Event{0.0, EventKind::kBirth, id, kNoParent});
    alive.push_back(id);
    parent_of.push_back(kNoParent);
  }

  const double total_rate = params.lambda() + params.mu();
  const double p_birth = params.lambda() / total_rate;
  std::exponential_distribution<double> exponential(1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  double now = 0.0;
  while (!alive.empty()) {
    now += exponential(rng) / (static_cast<double>(alive.size()) * total_rate);
    if (now >= t_end) break;
    std::uniform_int_distribution<std::size_t> pick(0, alive.size() - 1);
    const std::size_t slot = pick(rng);
    const LineageId chosen = alive[slot];
    if (uniform(rng) < p_birth) {
      const auto child = static_cast<LineageId>(parent_of.size());
      log.events.push_back(Event{now, EventKind::kBirth, child, chosen});
      alive.push_back(child);
      parent_of.push_back(chosen);
      if (abort_above != 0 && alive.size() > abort_above) return false;
    } else {
      log.events.push_back(Event{now, EventKind::kDeath, chosen, parent_of[chosen]});
      alive[slot] = alive.back();
      alive.pop_back();
    }
  }
  std::sort(alive.begin(), alive.end());
  log.extant_at_end = std::move(alive);
  return true;
}

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

Rng replicate_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6c7474u};
  return Rng(seq);
}

std::size_t EventLog::lineage_count() const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [](const Event& e) { return e.kind == EventKind::kBirth; }));
}

EventLog simulate_complete(const BirthDeathParams& params, double t_end, int start_lineages, Rng& rng) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("simulate_complete: t_end must be positive");
  if (start_lineages < 1) throw DomainError("simulate_complete: need at least one starting lineage");
  EventLog log;
  run_process(params, t_end, start_lineages, rng, 0, log);
  return log;
}

std::vector<int> reconstructed_counts(const EventLog& log, std::span<const double> times) {
  const Genealogy g = genealogy_of(log);
  std::vector<std::size_t> stamp(g.parent.size(), 0);
  std::vector<int> counts;
  counts.reserve(times.size());
  std::size_t round = 0;
  for (double at : times) {
    if (!(at >= 0.0 && at <= log.t_end)) throw DomainError("reconstructed_count: time outside [0, t_end]");
    ++round;
    int count = 0;
    for (LineageId leaf : log.extant_at_end) {
      LineageId cur = leaf;
      while (g.birth_time[cur] > at) cur = g.parent[cur];
      if (stamp[cur] != round) {
        stamp[cur] = round;
        ++count;
      }
    }
    counts.push_back(count);
  }
  return counts;
}

int reconstructed_count(const EventLog& log, double at) {
  return reconstructed_counts(log, std::span<const double>(&at, 1)).front();
}

std::vector<int> extant_per_founder(const EventLog& log) {
  const Genealogy g = genealogy_of(log);
  const auto founders = static_cast<std::size_t>(std::count(g.parent.begin(), g.parent.end(), kNoParent));
  std::vector<int> per(founders, 0);
  for (LineageId leaf : log.extant_at_end) {
    LineageId cur = leaf;
    while (g.parent[cur] != kNoParent) cur = g.parent[cur];
    ++per[cur];
  }
  return per;
}

AgeSampler::AgeSampler(int n, const BirthDeathParams& params, const QuadratureSpec& quad)
    : timescale_(params.delta() > 0.0 ? params.delta() : params.lambda()) {
  if (params.mu() > params.lambda()) {
    throw UnsupportedCondition("uniform age prior requires mu <= lambda (rho <= 1)");
  }
  if (n < 1) throw DomainError("AgeSampler: n must be >= 1");

  constexpr int kGridPoints = 10000;
  const double lo = 1e-8;
  const double hi = params.delta() > 0.0 ? 60.0 : 1e16;
  ages_.reserve(kGridPoints);
  ages_.push_back(0.0);
  const double step = std::log(hi / lo) / (kGridPoints - 2);
  for (int i = 0; i < kGridPoints - 1; ++i) ages_.push_back(lo * std::exp(step * i));
  ages_.back() = hi;

  const double c = timescale_;
  auto density = [&](double tau) {
    const double t = tau / c;
    return t > 0.0 ? age_density(t, n, params) / c : 0.0;
  };
  cdf_.assign(ages_.size(), 0.0);
  double mass = 0.0;
  for (std::size_t i = 1; i < ages_.size(); ++i) {
    const QuadResult seg = integrate_interval(density, ages_[i - 1], ages_[i], quad);
    if (!seg.converged) {
      throw AccuracyError("AgeSampler: age CDF segment did not converge", seg.value, seg.error_estimate);
    }
    mass += seg.value;
    cdf_[i] = mass;
  }
  captured_mass_ = mass;
  if (std::abs(mass - 1.0) > 1e-6) {
    throw AccuracyError("AgeSampler: tabulated age CDF misses normalisation", mass, std::abs(mass - 1.0));
  }
  for (double& v : cdf_) v /= mass;
  cdf_.back() = 1.0;
}

double AgeSampler::sample(Rng& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  const auto i = static_cast<std::size_t>(it - cdf_.begin());
  const double c0 = cdf_[i - 1];
  const double c1 = cdf_[i];
  const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
  double tau = ages_[i - 1] + frac * (ages_[i] - ages_[i - 1]);
  if (!(tau > 0.0)) tau = 0.5 * ages_[1];
  return tau / timescale_;
}

double AgeSampler::cdf(double t) const {
  const double tau = t * timescale_;
  if (tau <= 0.0) return 0.0;
  if (tau >= ages_.back()) return 1.0;
  auto it = std::upper_bound(ages_.begin(), ages_.end(), tau);
  const auto i = static_cast<std::size_t>(it - ages_.begin());
  const double frac = (tau - ages_[i - 1]) / (ages_[i] - ages_[i - 1]);
  return cdf_[i - 1] + frac * (cdf_[i] - cdf_[i - 1]);
}

ConditionedSampler::ConditionedSampler(const Condition& condition, int n, const BirthDeathParams& params,
                                       const QuadratureSpec& quad)
    : condition_(condition), n_(n), params_(params) {
  validate(condition);
  const bool mrca = std::holds_alternative<MrcaAge>(condition);
  if (n < (mrca ? 2 : 1)) throw DomainError(mrca ? "MRCA conditioning needs n >= 2" : "n must be >= 1");
  if (std::holds_alternative<UniformAgePrior>(condition)) {
    ages_ = std::make_shared<const AgeSampler>(n, params, quad);
  }
  if (!std::holds_alternative<Survival>(condition)) {
    if (params.is_yule()) {
      // Pure birth never loses lineages: overshooting n is final.
      abort_above_ = static_cast<std::size_t>(n);
    } else if (params.rho() < 1.0) {
      // From n + k lineages the count ever returns to n with probability
      // rho^k; past kOvershootMass that is below double resolution.
      constexpr double kOvershootMass = 1e-17;
      const double k = std::ceil(std::log(kOvershootMass) / std::log(params.rho()));
      if (k < 1e7) abort_above_ = static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
    }
  }
}

bool ConditionedSampler::accepts(const EventLog& log) const {
  const auto extant = static_cast<int>(log.extant_at_end.size());
  switch (condition_.index()) {
    case 1: {  // MrcaAge
      if (extant != n_) return false;
      const std::vector<int> per = extant_per_founder(log);
      return per.size() == 2 && per[0] >= 1 && per[1] >= 1;
    }
    case 2:  // Survival
      return extant >= 1;
    default:  // OriginAge, UniformAgePrior
      return extant == n_;
  }
}

ConditionedSample ConditionedSampler::sample(Rng& rng, std::uint64_t max_attempts) const {
  const double t = ages_ ? ages_->sample(rng) : *condition_age(condition_);
  const bool mrca = std::holds_alternative<MrcaAge>(condition_);

  ConditionedSample out;
  while (out.attempts < max_attempts) {
    ++out.attempts;
    if (!run_process(params_, t, mrca ? 2 : 1, rng, abort_above_, out.log)) continue;
    if (accepts(out.log)) return out;
  }
  std::ostringstream os;
  os << "rejection budget of " << max_attempts << " attempts exhausted for condition '"
     << condition_name(condition_) << "' (acceptance rate 0/" << out.attempts << ")";
  throw BudgetError(os.str(), 0, out.attempts);
}

ConditionedSample sample_conditioned(const Condition& condition, int n, const BirthDeathParams& params, Rng& rng,
                                     std::uint64_t max_attempts) {
  return ConditionedSampler(condition, n, params).sample(rng, max_attempts);
}

McEstimate summarize(std::span<const double> samples, std::uint64_t attempted, std::uint64_t seed) {
  McEstimate est;
  est.accepted = samples.size();
  est.attempted = attempted;
  est.seed = seed;
  if (samples.empty()) return est;
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double count = static_cast<double>(samples.size());
  est.mean = sum / count;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - est.mean) * (x - est.mean);
    est.standard_error = std::sqrt(ss / (count - 1.0) / count);
  }
  return est;
}

McLtt mc_ltt_detailed(const Condition& condition, int n, const BirthDeathParams& params,
                      const std::vector<double>& sigma_grid, const McOptions& options) {
  if (options.reps < 100) throw DomainError("mc_ltt: reps must be >= 100");
  validate_sigma_grid(sigma_grid);
  const ConditionedSampler sampler(condition, n, params, options.quad);

  const std::size_t reps = options.reps;
  std::vector<std::vector<int>> counts(reps);
  std::vector<std::uint64_t> attempts(reps, 0);
  std::vector<std::exception_ptr> failures(reps);

  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));

  auto worker = [&](unsigned offset) {
    std::vector<double> times(sigma_grid.size());
    for (std::size_t i = offset; i < reps; i += threads) {
      try {
        Rng rng = replicate_stream(options.seed, i);
        ConditionedSample s = sampler.sample(rng, options.max_attempts_per_rep);
        for (std::size_t j = 0; j < sigma_grid.size(); ++j) times[j] = sigma_grid[j] * s.log.t_end;
        counts[i] = reconstructed_counts(s.log, times);
        attempts[i] = s.attempts;
      } catch (...) {
        failures[i] = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker, k);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::uint64_t attempted = 0;
  for (std::uint64_t a : attempts) attempted += a;

  McLtt out;
  out.curve.condition = condition;
  out.curve.n = n;
  out.curve.params = params;
  out.curve.source = CurveSource::kMonteCarlo;
  out.curve.sampling = SamplingStats{options.seed, reps, attempted};
  std::vector<double> column(reps);
  for (std::size_t j = 0; j < sigma_grid.size(); ++j) {
    for (std::size_t i = 0; i < reps; ++i) column[i] = counts[i][j];
    McEstimate est = summarize(column, attempted, options.seed);
    out.curve.points.push_back(LttPoint{sigma_grid[j], est.mean, est.standard_error});
    out.estimates.push_back(est);
  }

  if (options.records != nullptr) {
    std::ostream& os = *options.records;
    os << "replicate,sigma,count\n";
    for (std::size_t i = 0; i < reps; ++i) {
      for (std::size_t j = 0; j < sigma_grid.size(); ++j) {
        os << i << ',' << format_double(sigma_grid[j]) << ',' << counts[i][j] << '\n';
      }
    }
  }
  out.counts = std::move(counts);
  return out;
}

LttCurve mc_ltt(const Condition& condition, int n, const BirthDeathParams& params,
                const std::vector<double>& sigma_grid, const McOptions& options) {
  return mc_ltt_detailed(condition, n, params, sigma_grid, options).curve;
}

}  // namespace ltt
