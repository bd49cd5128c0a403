#include "empost/core/problem.hpp"

#include <stdexcept>

namespace empost::core {

std::vector<int> TreePhysics::interior_junctions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < junctions.size(); ++i) {
    if (junctions[i].kind == JunctionKind::Interior) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

TreePhysics make_physics(const InterconnectTree& tree) {
  return make_physics(tree, {});
}

TreePhysics make_physics(const InterconnectTree& tree,
                         std::span<const double> currents) {
  const TreeDiagnostics diag = validate_tree(tree);
  if (!diag.ok()) {
    std::string msg = "make_physics: invalid tree:";
    for (const auto& s : diag.issues) msg += "\n  " + s;
    throw std::invalid_argument(msg);
  }
  if (!currents.empty() && currents.size() != tree.segments.size()) {
    throw std::invalid_argument(
        "make_physics: current override count mismatch");
  }

  TreePhysics ph;
  const double kappa = diffusivity(tree.material);
  ph.segments.reserve(tree.segments.size());
  for (std::size_t i = 0; i < tree.segments.size(); ++i) {
    const Segment& s = tree.segments[i];
    const double j = currents.empty() ? s.current_density : currents[i];
    TreePhysics::Seg seg;
    seg.id = s.id;
    seg.jminus = tree.junction_index(s.node_minus);
    seg.jplus = tree.junction_index(s.node_plus);
    seg.length = s.length;
    seg.kappa = kappa;
    seg.drive = drive_force(j, tree.material);
    seg.void_end = s.void_end;
    seg.h = s.initial_stress;
    ph.segments.push_back(std::move(seg));
  }
  ph.junctions.reserve(tree.junctions.size());
  for (const auto& j : tree.junctions) {
    TreePhysics::Jn jn;
    jn.id = j.id;
    jn.kind = j.kind;
    for (Direction d : kDirections) {
      if (j.slot(d).has_value()) {
        jn.slot_segment[static_cast<int>(d)] = tree.segment_index(*j.slot(d));
      }
    }
    ph.junctions.push_back(std::move(jn));
  }
  return ph;
}

}  // namespace empost::core
