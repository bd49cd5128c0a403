#pragma once

#include <functional>
#include <vector>

namespace empost::analytic {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached rule of the given order (Newton iteration on the Legendre
// polynomial; nodes accurate to ~1e-15).
const GaussLegendre& gauss_legendre(int order);

// Convolution (a*b)(t) = integral_0^t a(tau) b(t - tau) dtau approximated
// with the given Gauss-Legendre order. Exact for integrands of polynomial
// degree <= 2*order - 1.
double convolve_gl(const std::function<double(double)>& a,
                   const std::function<double(double)>& b, double t,
                   int order);

}  // namespace empost::analytic
