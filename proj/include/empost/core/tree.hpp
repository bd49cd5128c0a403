#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "empost/core/initial_stress.hpp"
#include "empost/core/material.hpp"

namespace empost::core {

// Slot directions around a junction, in the fixed (L, U, R, D) order used
// everywhere fluxes or adjacent segments are enumerated.
enum class Direction { Left = 0, Up = 1, Right = 2, Down = 3 };
inline constexpr std::array<Direction, 4> kDirections = {
    Direction::Left, Direction::Up, Direction::Right, Direction::Down};

enum class Orientation { Horizontal, Vertical };
enum class VoidEnd { None, AtMinus, AtPlus };
enum class JunctionKind { Interior, BlockedTerminal, VoidNode };

struct Segment {
  std::string id;
  std::string node_minus;  // left/bottom end, x = 0
  std::string node_plus;   // right/top end, x = L
  double length = 0.0;     // m
  double width = 1e-6;     // m
  double current_density = 0.0;  // A/m^2, signed along +x
  Orientation orientation = Orientation::Horizontal;
  VoidEnd void_end = VoidEnd::None;
  InitialStressProfile initial_stress;
};

struct Junction {
  std::string id;
  std::array<std::optional<std::string>, 4> slots;  // indexed by Direction
  JunctionKind kind = JunctionKind::Interior;

  int degree() const;
  const std::optional<std::string>& slot(Direction d) const {
    return slots[static_cast<int>(d)];
  }
  std::optional<std::string>& slot(Direction d) {
    return slots[static_cast<int>(d)];
  }
};

struct InterconnectTree {
  std::vector<Junction> junctions;
  std::vector<Segment> segments;
  MaterialParams material;

  int junction_index(const std::string& id) const;  // -1 if absent
  int segment_index(const std::string& id) const;
};

// A horizontal segment occupies the R slot of its minus-end junction and the
// L slot of its plus-end junction; a vertical segment occupies U at the minus
// (bottom) end and D at the plus (top) end. Hence a segment seen through slot
// d touches the junction with:
inline bool slot_faces_segment_plus(Direction d) {
  return d == Direction::Left || d == Direction::Down;
}

struct TreeDiagnostics {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Checks every structural invariant and reports all violations; never throws.
TreeDiagnostics validate_tree(const InterconnectTree& tree);

}  // namespace empost::core
