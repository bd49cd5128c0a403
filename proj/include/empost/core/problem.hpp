#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "empost/core/tree.hpp"

namespace empost::core {

// Solver-facing view of one segment: geometry, diffusivity, drive force and
// the initial stress, all in one unit system (physical or scaled).
struct SegmentProblem {
  double length = 0.0;
  double kappa = 0.0;
  double drive = 0.0;  // G
  InitialStressProfile h;
};

// Frozen index-based view of a validated tree with per-segment physics.
// current densities may be overridden per Monte-Carlo draw.
struct TreePhysics {
  struct Seg {
    std::string id;
    int jminus = -1;
    int jplus = -1;
    double length = 0.0;
    double kappa = 0.0;
    double drive = 0.0;
    VoidEnd void_end = VoidEnd::None;
    InitialStressProfile h;

    SegmentProblem problem() const { return {length, kappa, drive, h}; }
  };
  struct Jn {
    std::string id;
    JunctionKind kind = JunctionKind::Interior;
    std::array<int, 4> slot_segment = {-1, -1, -1, -1};  // by Direction

    bool occupied(Direction d) const {
      return slot_segment[static_cast<int>(d)] >= 0;
    }
    int segment(Direction d) const {
      return slot_segment[static_cast<int>(d)];
    }
    int degree() const {
      int n = 0;
      for (int s : slot_segment) n += (s >= 0) ? 1 : 0;
      return n;
    }
  };

  std::vector<Seg> segments;
  std::vector<Jn> junctions;
  bool scaled = false;

  std::vector<int> interior_junctions() const;
};

// Builds the physics view from a validated tree; throws on validation
// failure. With `currents`, per-segment current densities replace the tree's
// nominal ones (same order as tree.segments).
TreePhysics make_physics(const InterconnectTree& tree);
TreePhysics make_physics(const InterconnectTree& tree,
                         std::span<const double> currents);

}  // namespace empost::core
