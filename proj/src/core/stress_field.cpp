#include "empost/core/stress_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace empost::core {

StressField StressField::zeros(std::string segment_id, std::vector<double> x,
                               std::vector<double> t) {
  StressField f;
  f.segment_id = std::move(segment_id);
  f.x_grid = std::move(x);
  f.t_grid = std::move(t);
  f.values.assign(f.nx() * f.nt(), 0.0);
  return f;
}

namespace {
// index i with grid[i] <= v <= grid[i+1], clamped
std::size_t bracket(const std::vector<double>& grid, double v) {
  if (grid.size() < 2) return 0;
  auto it = std::upper_bound(grid.begin(), grid.end(), v);
  std::size_t i = (it == grid.begin()) ? 0 : (it - grid.begin() - 1);
  return std::min(i, grid.size() - 2);
}
}  // namespace

double StressField::sample(double x, double t) const {
  if (nx() == 1 && nt() == 1) return values[0];
  if (nx() == 1) {
    const std::size_t k = bracket(t_grid, t);
    const double w =
        std::clamp((t - t_grid[k]) / (t_grid[k + 1] - t_grid[k]), 0.0, 1.0);
    return (1 - w) * at(0, k) + w * at(0, k + 1);
  }
  if (nt() == 1) {
    const std::size_t i = bracket(x_grid, x);
    const double w =
        std::clamp((x - x_grid[i]) / (x_grid[i + 1] - x_grid[i]), 0.0, 1.0);
    return (1 - w) * at(i, 0) + w * at(i + 1, 0);
  }
  const std::size_t i = bracket(x_grid, x);
  const std::size_t k = bracket(t_grid, t);
  const double wx =
      std::clamp((x - x_grid[i]) / (x_grid[i + 1] - x_grid[i]), 0.0, 1.0);
  const double wt =
      std::clamp((t - t_grid[k]) / (t_grid[k + 1] - t_grid[k]), 0.0, 1.0);
  return (1 - wx) * ((1 - wt) * at(i, k) + wt * at(i, k + 1)) +
         wx * ((1 - wt) * at(i + 1, k) + wt * at(i + 1, k + 1));
}

void StressField::validate() const {
  if (values.size() != nx() * nt()) {
    throw std::invalid_argument("StressField: value count mismatch");
  }
  for (std::size_t i = 0; i + 1 < x_grid.size(); ++i) {
    if (!(x_grid[i] < x_grid[i + 1])) {
      throw std::invalid_argument("StressField: x grid must increase");
    }
  }
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    if (!(t_grid[i] < t_grid[i + 1])) {
      throw std::invalid_argument("StressField: t grid must increase");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("StressField: non-finite value");
    }
  }
}

}  // namespace empost::core
