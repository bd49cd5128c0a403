#pragma once

#include <string>
#include <vector>

namespace empost::core {

// Stress samples on an (x, t) grid for one segment. Values are stored
// row-major, x outer: values[ix * nt() + it].
struct StressField {
  std::string segment_id;
  std::vector<double> x_grid;  // strictly increasing
  std::vector<double> t_grid;  // strictly increasing
  std::vector<double> values;
  bool scaled = false;

  static StressField zeros(std::string segment_id, std::vector<double> x,
                           std::vector<double> t);

  std::size_t nx() const { return x_grid.size(); }
  std::size_t nt() const { return t_grid.size(); }
  double& at(std::size_t ix, std::size_t it) { return values[ix * nt() + it]; }
  double at(std::size_t ix, std::size_t it) const {
    return values[ix * nt() + it];
  }

  // bilinear interpolation; clamps outside the grid
  double sample(double x, double t) const;

  void validate() const;
};

struct EvaluationPoint {
  enum class End { Minus, Plus };
  std::string segment_id;
  End endpoint = End::Minus;
  double time = 0.0;
};

}  // namespace empost::core
