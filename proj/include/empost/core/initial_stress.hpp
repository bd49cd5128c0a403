#pragma once

#include <utility>
#include <vector>

namespace empost::core {

// Initial stress state h(x) of a segment over [0, L]. Restricted to shapes
// whose cosine/sine moments have closed forms, so the analytic series never
// needs numerical quadrature over x.
//
//   Constant:        h(x) = c
//   PiecewiseLinear: knots (x_i, sigma_i), x_0 = 0 < x_1 < ... < x_n = L
//   CosineMode:      h(x) = offset + amplitude*cos(frequency*pi*x/L + phase)
struct InitialStressProfile {
  enum class Kind { Constant, PiecewiseLinear, CosineMode };

  Kind kind = Kind::Constant;
  double constant_value = 0.0;
  std::vector<std::pair<double, double>> knots;  // (x, sigma)
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 1.0;  // in units of pi/L
  double phase = 0.0;

  static InitialStressProfile make_constant(double c);
  static InitialStressProfile make_piecewise(
      std::vector<std::pair<double, double>> knots);
  static InitialStressProfile make_cosine(double offset, double amplitude,
                                          double frequency,
                                          double phase = 0.0);

  void validate(double length) const;

  double value(double x, double length) const;
  double derivative(double x, double length) const;

  // (1/L) * integral of h over [0, L]
  double mean(double length) const;

  // integral_0^L h(u) * cos(alpha*u) du, closed form. alpha = 0 gives the
  // plain integral.
  double cosine_moment(double alpha, double length) const;

  // h~(x) = h(L - x)
  InitialStressProfile reflected(double length) const;
};

}  // namespace empost::core
