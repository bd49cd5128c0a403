#pragma once

#include <functional>
#include <string>
#include <vector>

#include "empost/core/problem.hpp"
#include "empost/core/stress_field.hpp"

namespace empost::fdm {

// Theta-weighted implicit finite differences for
//   sigma_t = d/dx [ kappa (sigma_x + G) ]
// on segments and trees. Within a segment (kappa, G constant) this is pure
// diffusion; G enters through boundary and junction conditions.
struct FdmConfig {
  double dx_target = 0.0;  // 0 -> L/64 per segment
  double dt = 0.0;         // 0 -> t_end/1000
  double t_end = 0.0;
  enum class VoidBc { DirichletZero, RobinDelta };
  VoidBc void_bc = VoidBc::DirichletZero;
  double theta = 1.0;   // 1 implicit Euler, 0.5 Crank-Nicolson
  double delta = 1e-9;  // Robin void interface thickness

  void validate() const;
};

// Boundary handling of one segment end.
//   Flux:    sigma_x = phi0 + integral of rate
//   Blocked: kappa (sigma_x + G) = 0, i.e. sigma_x = -G
//   Void:    sigma = 0 (or Robin with delta)
struct SegmentBc {
  enum class Kind { Flux, Blocked, Void };
  Kind kind = Kind::Blocked;
  double phi0 = 0.0;
  std::function<double(double)> rate;  // d(phi)/dt, may be empty

  static SegmentBc flux(double phi0, std::function<double(double)> rate = {}) {
    return {Kind::Flux, phi0, std::move(rate)};
  }
  static SegmentBc blocked() { return {Kind::Blocked, 0.0, {}}; }
  static SegmentBc void_end() { return {Kind::Void, 0.0, {}}; }
};

// Single-segment solve on the native node grid, sampled at out_times
// (nearest time step; 0 gives the initial state).
core::StressField solve_segment_fdm(const core::SegmentProblem& problem,
                                    const SegmentBc& minus,
                                    const SegmentBc& plus,
                                    const FdmConfig& cfg,
                                    const std::vector<double>& out_times,
                                    std::string segment_id = {});

// Whole-tree solve: one coupled linear system per time step with shared
// junction unknowns (stress continuity by construction), flux-conservation
// rows at interior junctions, zero-flux ghost rows at blocked terminals and
// a pinned (or Robin) void node.
std::vector<core::StressField> solve_tree_fdm(
    const core::TreePhysics& physics, const FdmConfig& cfg,
    const std::vector<double>& out_times);

}  // namespace empost::fdm
