#include "ltt/curve.hpp"

#include <cmath>

#include "ltt/errors.hpp"

namespace ltt {

double LineagePmf::at(int m) const {
  if (m < min_m || m > max_m()) return 0.0;
  return probs[static_cast<std::size_t>(m - min_m)];
}

double LineagePmf::total() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

double LineagePmf::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    s += static_cast<double>(min_m + static_cast<int>(i)) * probs[i];
  }
  return s;
}

std::vector<double> uniform_sigma_grid(int count) {
  if (count < 2) throw DomainError("sigma grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double last = static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / last;
  }
  grid.back() = 1.0;
  return grid;
}

void validate_sigma_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("sigma grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid[i];
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("sigma grid values must lie in [0, 1]");
    if (i > 0 && !(s > grid[i - 1])) throw DomainError("sigma grid must be strictly increasing");
  }
}

}  // namespace ltt
