#include "empost/analytic/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace empost::analytic {

namespace {

GaussLegendre compute_rule(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(z)
    double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

std::map<int, GaussLegendre> g_rules;
std::mutex g_rules_mutex;

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order >= 1");
  std::lock_guard<std::mutex> lock(g_rules_mutex);
  auto it = g_rules.find(order);
  if (it == g_rules.end()) {
    it = g_rules.emplace(order, compute_rule(order)).first;
  }
  return it->second;
}

double convolve_gl(const std::function<double(double)>& a,
                   const std::function<double(double)>& b, double t,
                   int order) {
  if (order < 2) throw std::invalid_argument("convolve_gl: order >= 2");
  if (t < 0.0) throw std::invalid_argument("convolve_gl: t >= 0");
  if (t == 0.0) return 0.0;
  const GaussLegendre& rule = gauss_legendre(order);
  const double half = 0.5 * t;
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double tau = half * (rule.nodes[i] + 1.0);
    sum += rule.weights[i] * a(tau) * b(t - tau);
  }
  return half * sum;
}

}  // namespace empost::analytic
