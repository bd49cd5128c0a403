#pragma once

#include <functional>
#include <vector>

#include "empost/core/problem.hpp"
#include "empost/core/stress_field.hpp"

namespace empost::analytic {

// Truncation orders of the image-series solution.
struct SeriesConfig {
  int p_max = 2;       // image sum 0..P
  int m_max = 5;       // eigenmode sum 1..M
  int quad_order = 16; // Gauss-Legendre nodes per convolution

  void validate() const;
};

// Time-varying boundary stress gradients of one segment. phi(0) values are
// explicit; the rate functions are d(phi)/dt. An empty function means a zero
// rate.
struct BoundaryFluxSpec {
  double phi_minus_0 = 0.0;
  double phi_plus_0 = 0.0;
  std::function<double(double)> rate_minus;
  std::function<double(double)> rate_plus;
};

// Flux spec of the single non-void end of a voided segment.
struct VoidEndFlux {
  double phi0 = 0.0;
  std::function<double(double)> rate;
};

// Reflected-image kernel sums of the boundary response, shared by the direct
// solvers and the precomputed affine maps.
//   voidless minus end:  sum_p [g(zeta1) + g(zeta3)]
//   voidless plus end:   sum_p [g(zeta2) + g(zeta4)]
//   void at plus, minus end: sum_p (-1)^p [g(zeta1) - g(zeta3)]
double voidless_minus_sum(int p_max, double x, double length, double t,
                          double kappa);
double voidless_plus_sum(int p_max, double x, double length, double t,
                         double kappa);
double void_minus_sum(int p_max, double x, double length, double t,
                      double kappa);

// Initial-condition eigenseries, evaluated in closed form per profile kind.
// Voidless: mean term plus cosine modes decaying as exp(-kappa*(m*pi/L)^2*t).
double ic_projection_voidless(const core::InitialStressProfile& h,
                              double length, double kappa, int m_max, double x,
                              double t);
// Mixed Neumann/Dirichlet eigenseries for a segment voided at one end; no
// mean term (the void pins sigma = 0).
double ic_projection_void(const core::InitialStressProfile& h, double length,
                          double kappa, int m_max, double x, double t,
                          core::VoidEnd void_at);

// Point evaluations.
double evaluate_voidless(const core::SegmentProblem& problem,
                         const BoundaryFluxSpec& flux, const SeriesConfig& cfg,
                         double x, double t);
double evaluate_void(const core::SegmentProblem& problem,
                     core::VoidEnd void_at, const VoidEndFlux& nonvoid_end,
                     const SeriesConfig& cfg, double x, double t);

// Full-grid solves.
core::StressField solve_voidless_segment(const core::SegmentProblem& problem,
                                         const BoundaryFluxSpec& flux,
                                         const SeriesConfig& cfg,
                                         std::vector<double> x_grid,
                                         std::vector<double> t_grid,
                                         std::string segment_id = {});
core::StressField solve_void_segment(const core::SegmentProblem& problem,
                                     core::VoidEnd void_at,
                                     const VoidEndFlux& nonvoid_end,
                                     const SeriesConfig& cfg,
                                     std::vector<double> x_grid,
                                     std::vector<double> t_grid,
                                     std::string segment_id = {});

}  // namespace empost::analytic
