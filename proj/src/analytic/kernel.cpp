#include "empost/analytic/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace empost::analytic {

double g_kernel(double x, double t, double kappa) {
  if (!(t > 0.0)) throw std::domain_error("g_kernel: t must be > 0");
  if (!(kappa > 0.0)) throw std::domain_error("g_kernel: kappa must be > 0");
  if (x < 0.0) throw std::domain_error("g_kernel: x must be >= 0");
  const double s = std::sqrt(kappa * t);
  const double z = x / (2.0 * s);
  // g(z)/g(0) < 1e-28 beyond z = 8: far images contribute nothing
  if (z > 8.0) return 0.0;
  return 2.0 * s / std::sqrt(3.14159265358979323846) * std::exp(-z * z) -
         x * std::erfc(z);
}

double zeta(int variant, int p, double x, double length) {
  switch (variant) {
    case 1: return (2.0 * p + 2.0) * length - x;
    case 2: return (2.0 * p + 1.0) * length - x;
    case 3: return 2.0 * p * length + x;
    case 4: return (2.0 * p + 1.0) * length + x;
    default: throw std::invalid_argument("zeta: variant must be 1..4");
  }
}

}  // namespace empost::analytic
