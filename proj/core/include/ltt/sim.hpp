#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "ltt/curve.hpp"
#include "ltt/params.hpp"
#include "ltt/quad.hpp"

namespace ltt {

using Rng = std::mt19937_64;

// Independent stream for one replicate; the same (seed, index) always
// yields the same stream regardless of how replicates are scheduled.
Rng replicate_stream(std::uint64_t seed, std::uint64_t index);

using LineageId = std::uint32_t;
inline constexpr LineageId kNoParent = std::numeric_limits<LineageId>::max();

enum class EventKind : std::uint8_t { kBirth, kDeath };

// For a birth, `lineage` is the newly created lineage and `parent` the
// lineage it split from (which continues under its own id). Founding
// lineages are born at time 0 with parent kNoParent. For a death, `parent`
// repeats the dying lineage's parent.
struct Event {
  double time = 0.0;
  EventKind kind = EventKind::kBirth;
  LineageId lineage = 0;
  LineageId parent = kNoParent;

  bool operator==(const Event&) const = default;
};

// Complete tree: every lineage ever alive. Lineage ids are dense and
// assigned in birth order.
struct EventLog {
  std::vector<Event> events;
  std::vector<LineageId> extant_at_end;  // sorted
  double t_end = 0.0;

  std::size_t lineage_count() const;
  bool operator==(const EventLog&) const = default;
};

// Gillespie simulation from `start_lineages` founders until t_end or
// extinction.
EventLog simulate_complete(const BirthDeathParams& params, double t_end, int start_lineages, Rng& rng);

// Lineages alive at `at` with at least one extant descendant.
int reconstructed_count(const EventLog& log, double at);
std::vector<int> reconstructed_counts(const EventLog& log, std::span<const double> times);

// Founder index (0-based, in founding order) of each extant lineage's clade;
// result[i] counts the extant species descending from founder i.
std::vector<int> extant_per_founder(const EventLog& log);

struct ConditionedSample {
  EventLog log;
  std::uint64_t attempts = 0;
};

// Draws origin ages from age_density by inverting its CDF, tabulated on a
// log-spaced grid of 1e4 points with linear interpolation between nodes.
class AgeSampler {
 public:
  AgeSampler(int n, const BirthDeathParams& params, const QuadratureSpec& quad = {});

  double sample(Rng& rng) const;
  double cdf(double t) const;

  // Mass of age_density captured by the grid before normalisation.
  double captured_mass() const { return captured_mass_; }

 private:
  double timescale_;
  std::vector<double> ages_;  // in units of 1 / timescale_
  std::vector<double> cdf_;
  double captured_mass_;
};

// Rejection sampler for trees satisfying a condition. For UniformAgePrior
// the age CDF is tabulated once at construction.
//   OriginAge(t):  one founder run to t, accept iff n extant.
//   MrcaAge(t):    two founders run to t, accept iff both clades survive and
//                  n are extant in total.
//   Survival(t):   one founder, accept iff anything survives (n unused).
//   UniformAgePrior: age drawn from age_density, then OriginAge at that age.
// Attempts that overshoot n are abandoned: immediately under pure birth, and
// for rho < 1 once n + k lineages are alive with rho^k < 1e-17, the bound on
// ever returning to n.
class ConditionedSampler {
 public:
  ConditionedSampler(const Condition& condition, int n, const BirthDeathParams& params,
                     const QuadratureSpec& quad = {});

  // Throws BudgetError once max_attempts trees have been rejected.
  ConditionedSample sample(Rng& rng, std::uint64_t max_attempts) const;

  const Condition& condition() const { return condition_; }
  int n() const { return n_; }

 private:
  bool accepts(const EventLog& log) const;

  Condition condition_;
  int n_;
  BirthDeathParams params_;
  std::shared_ptr<const AgeSampler> ages_;
  std::size_t abort_above_ = 0;  // reject once more lineages are alive; 0 = never
};

ConditionedSample sample_conditioned(const Condition& condition, int n, const BirthDeathParams& params,
                                     Rng& rng, std::uint64_t max_attempts);

struct McEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t accepted = 0;
  std::uint64_t attempted = 0;
  std::uint64_t seed = 0;

  bool operator==(const McEstimate&) const = default;
};

struct McOptions {
  std::uint64_t reps = 10000;  // accepted trees, >= 100
  std::uint64_t seed = 1;
  std::uint64_t max_attempts_per_rep = 10'000'000;
  unsigned threads = 0;               // 0: hardware concurrency
  std::ostream* records = nullptr;    // "replicate,sigma,count" lines
  QuadratureSpec quad{};
};

struct McLtt {
  LttCurve curve;
  std::vector<McEstimate> estimates;  // one per sigma
  std::vector<std::vector<int>> counts;  // [replicate][sigma index]
};

// Monte-Carlo LTT curve: per-sigma mean and standard error of the
// reconstructed lineage count at sigma * (tree age) over accepted trees.
McLtt mc_ltt_detailed(const Condition& condition, int n, const BirthDeathParams& params,
                      const std::vector<double>& sigma_grid, const McOptions& options);

LttCurve mc_ltt(const Condition& condition, int n, const BirthDeathParams& params,
                const std::vector<double>& sigma_grid, const McOptions& options);

McEstimate summarize(std::span<const double> samples, std::uint64_t attempted, std::uint64_t seed);

}  // namespace ltt
