#pragma once

#include "empost/core/tree.hpp"

namespace empost::fixtures {

// Copper-like material at the given temperature.
core::MaterialParams copper(double temperature = 345.0);

// One horizontal segment between two blocked terminals (n0 at x=0, n1 at L).
core::InterconnectTree single_voidless(double length, double current,
                                       core::InitialStressProfile h,
                                       double temperature = 345.0);

// One horizontal segment with a void node at one end and a blocked terminal
// at the other.
core::InterconnectTree single_void(double length, double current,
                                   core::VoidEnd void_end,
                                   core::InitialStressProfile h,
                                   double temperature = 345.0);

// Horizontal chain of n segments with blocked outer terminals; initial
// stress is the zero-flux steady state (per-segment slope -G, continuous at
// junctions) anchored at sigma_root on the left terminal. With
// void_at_root the left terminal becomes a void node.
core::InterconnectTree chain(const std::vector<double>& lengths,
                             const std::vector<double>& currents,
                             double sigma_root, bool void_at_root = false,
                             double temperature = 345.0);

// Ten-segment fixture: a six-segment spine with four vertical branches, a
// void node at the left spine end, steady-state initial stress. All lengths
// and currents are synthetic but sit in realistic ranges.
core::InterconnectTree ten_segment(double temperature = 345.0);

}  // namespace empost::fixtures
