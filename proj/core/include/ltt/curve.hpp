#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ltt/params.hpp"

namespace ltt {

// Probability vector over the reconstructed lineage count m at relative
// time sigma. probs[i] is P[M = min_m + i]; counts outside
// [min_m, min_m + probs.size()) have probability zero.
struct LineagePmf {
  int n = 1;
  double sigma = 0.0;
  Condition condition = OriginAge{1.0};
  int min_m = 1;
  std::vector<double> probs;

  double at(int m) const;
  int max_m() const { return min_m + static_cast<int>(probs.size()) - 1; }
  double total() const;
  double mean() const;
};

enum class CurveSource { kAnalytic, kMonteCarlo };

struct LttPoint {
  double sigma = 0.0;
  double expected_lineages = 0.0;
  std::optional<double> standard_error;  // Monte-Carlo curves only

  bool operator==(const LttPoint&) const = default;
};

struct SamplingStats {
  std::uint64_t seed = 0;
  std::uint64_t accepted = 0;
  std::uint64_t attempted = 0;

  bool operator==(const SamplingStats&) const = default;
};

struct LttCurve {
  Condition condition = OriginAge{1.0};
  int n = 1;
  BirthDeathParams params{1.0, 0.0};
  std::vector<LttPoint> points;
  CurveSource source = CurveSource::kAnalytic;
  std::optional<SamplingStats> sampling;

  bool operator==(const LttCurve&) const = default;
};

// Uniform grid of `count` points on [0, 1], endpoints included. count >= 2.
std::vector<double> uniform_sigma_grid(int count);

// Throws DomainError unless the grid is non-empty, strictly increasing and
// within [0, 1].
void validate_sigma_grid(const std::vector<double>& grid);

}  // namespace ltt
