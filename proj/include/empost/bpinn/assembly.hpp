#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "empost/analytic/segment.hpp"
#include "empost/bnn/network.hpp"
#include "empost/core/problem.hpp"
#include "empost/core/scaling.hpp"

namespace empost::bpinn {

// Maps raw quantities to the network's input/output ranges.
//   time input      t_sc / t_sc_end in (0, 1]
//   current inputs  (J - mean_j) / max(relative_std*|mean_j|, floor)
//   flux rates      rate_scale * network output (scaled Pa/(m s) units)
struct InputNormalizer {
  double t_sc_end = 1.0;
  std::vector<double> j_mean;  // per segment, A/m^2
  std::vector<double> j_std;   // per segment, absolute
  double rate_scale = 1.0;

  // rate_scale defaults to rate_gain * max_s |G_sc,s| / t_sc_end; the gain
  // gives the network headroom above the drive-force scale
  static InputNormalizer make(const core::InterconnectTree& tree,
                              const core::ScalingConstants& sc,
                              double t_end_physical, double relative_std,
                              double rate_gain = 4.0);

  double normalized_current(int segment, double j) const;
};

// Network outputs (F_U, F_R, F_D) at one junction plus the conservation
// completion F_L = F_U + F_R + F_D over occupied slots.
struct FluxAssembly {
  Eigen::Vector3d raw = Eigen::Vector3d::Zero();  // masked (F_U, F_R, F_D)
  std::array<bool, 4> occupied = {false, false, false, false};

  double f_left() const { return raw.sum(); }
  double slot_flux(core::Direction d) const;
};

// Combination of the three outputs that yields the flux through slot d,
// already masked by occupancy: U -> e0, R -> e1, D -> e2, L -> sum of the
// occupied masks. Unoccupied slots give the zero vector.
Eigen::Vector3d slot_selector(const core::TreePhysics::Jn& junction,
                              core::Direction d);

// Network input x = (T, J_L, J_U, J_R, J_D) for an interior junction at
// scaled time t_sc under the given physical per-segment currents.
Eigen::VectorXd junction_inputs(const core::TreePhysics& physics,
                                int junction, double t_sc,
                                std::span<const double> currents,
                                const InputNormalizer& norm);

// Raw (masked) outputs at one junction.
FluxAssembly assemble_junction_flux(const core::TreePhysics& physics,
                                    int junction, const bnn::NetParams& params,
                                    const InputNormalizer& norm, double t_sc,
                                    std::span<const double> currents);

// Boundary data of every segment in scaled units. Interior junction ends get
// phi0 = h'(endpoint) and the network-backed rate of the facing slot; blocked
// terminals get phi0 = -G and zero rate; void ends carry no spec (the void
// solver pins sigma = 0 there).
struct SegmentBoundary {
  analytic::BoundaryFluxSpec flux;     // used when void_end == None
  analytic::VoidEndFlux nonvoid_end;   // used when void_end != None
};
std::vector<SegmentBoundary> assemble_segment_fluxes(
    const core::TreePhysics& scaled_physics, const bnn::NetParams& params,
    const InputNormalizer& norm, std::vector<double> currents);

}  // namespace empost::bpinn
