#pragma once

#include <vector>

#include "empost/core/problem.hpp"
#include "empost/core/stress_field.hpp"

namespace empost::core {

// Standardization constants for space, time and stress. All other scaled
// quantities follow by composition:
//   x_sc = k_x*x, t_sc = k_t*t, sigma_sc = k_sigma*sigma,
//   kappa_sc = (k_x^2/k_t)*kappa, G_sc = (k_sigma/k_x)*G,
//   phi_sc = (k_sigma/k_x)*phi, d(phi_sc)/d(t_sc) = k_sigma/(k_x*k_t)*dphi/dt.
struct ScalingConstants {
  double k_x = 1e-5;
  double k_t = 1e-7;
  double k_sigma = 1e-8;

  void validate() const;

  double kappa_factor() const { return k_x * k_x / k_t; }
  double drive_factor() const { return k_sigma / k_x; }
  double gradient_factor() const { return k_sigma / k_x; }
  double rate_factor() const { return k_sigma / (k_x * k_t); }

  static ScalingConstants identity() { return {1.0, 1.0, 1.0}; }
};

// Maps a physical-unit problem (and grids) into scaled coordinates.
TreePhysics scale_problem(const TreePhysics& physics,
                          const ScalingConstants& sc);
SegmentProblem scale_problem(const SegmentProblem& problem,
                             const ScalingConstants& sc);
InitialStressProfile scale_profile(const InitialStressProfile& h,
                                   const ScalingConstants& sc);
std::vector<double> scale_x_grid(const std::vector<double>& x,
                                 const ScalingConstants& sc);
std::vector<double> scale_t_grid(const std::vector<double>& t,
                                 const ScalingConstants& sc);

// Converts a scaled stress field back to physical units (values / k_sigma,
// grids mapped back). Throws if the field is already physical.
StressField unscale_stress(const StressField& field,
                           const ScalingConstants& sc);
// Inverse companion, physical -> scaled.
StressField scale_stress(const StressField& field, const ScalingConstants& sc);

}  // namespace empost::core
