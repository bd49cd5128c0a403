#include "empost/core/tree.hpp"

#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace empost::core {

int Junction::degree() const {
  int n = 0;
  for (const auto& s : slots) {
    if (s.has_value()) ++n;
  }
  return n;
}

int InterconnectTree::junction_index(const std::string& id) const {
  for (std::size_t i = 0; i < junctions.size(); ++i) {
    if (junctions[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int InterconnectTree::segment_index(const std::string& id) const {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

namespace {

const char* dir_name(Direction d) {
  switch (d) {
    case Direction::Left: return "L";
    case Direction::Up: return "U";
    case Direction::Right: return "R";
    case Direction::Down: return "D";
  }
  return "?";
}

// slot that segment seg must occupy at the given junction end
Direction expected_slot(const Segment& seg, bool at_plus) {
  if (seg.orientation == Orientation::Horizontal) {
    return at_plus ? Direction::Left : Direction::Right;
  }
  return at_plus ? Direction::Down : Direction::Up;
}

}  // namespace

TreeDiagnostics validate_tree(const InterconnectTree& tree) {
  TreeDiagnostics diag;
  auto issue = [&](const std::string& msg) { diag.issues.push_back(msg); };

  try {
    tree.material.validate();
  } catch (const std::exception& e) {
    issue(std::string("material: ") + e.what());
  }

  std::set<std::string> jids, sids;
  for (const auto& j : tree.junctions) {
    if (!jids.insert(j.id).second) issue("duplicate junction id " + j.id);
  }
  for (const auto& s : tree.segments) {
    if (!sids.insert(s.id).second) issue("duplicate segment id " + s.id);
  }

  int void_segments = 0;
  for (const auto& s : tree.segments) {
    if (!(s.length > 0.0)) issue("segment " + s.id + ": length must be > 0");
    if (!(s.width > 0.0)) issue("segment " + s.id + ": width must be > 0");
    if (!std::isfinite(s.current_density)) {
      issue("segment " + s.id + ": non-finite current density");
    }
    if (s.node_minus == s.node_plus) {
      issue("segment " + s.id + ": endpoints coincide");
    }
    if (s.void_end != VoidEnd::None) ++void_segments;
    if (s.length > 0.0) {
      try {
        s.initial_stress.validate(s.length);
      } catch (const std::exception& e) {
        issue("segment " + s.id + ": initial stress: " + e.what());
      }
    }
    for (const auto& end : {false, true}) {
      const std::string& node = end ? s.node_plus : s.node_minus;
      const int ji = tree.junction_index(node);
      if (ji < 0) {
        issue("segment " + s.id + ": dangling endpoint " + node);
        continue;
      }
      const Direction want = expected_slot(s, end);
      const auto& slot = tree.junctions[ji].slot(want);
      if (!slot.has_value() || *slot != s.id) {
        issue("segment " + s.id + ": junction " + node + " slot " +
              dir_name(want) + " does not reference it");
      }
      // the endpoint must appear in exactly this one slot tree-wide
      int refs = 0;
      for (const auto& j : tree.junctions) {
        for (Direction d : kDirections) {
          if (j.slot(d).has_value() && *j.slot(d) == s.id &&
              slot_faces_segment_plus(d) == end) {
            ++refs;
          }
        }
      }
      if (refs > 1) {
        issue("segment " + s.id + ": endpoint " + node +
              " referenced by multiple slots");
      }
    }
  }
  if (void_segments > 1) issue("multiple voids: tree may contain at most one");

  int void_nodes = 0;
  for (const auto& j : tree.junctions) {
    int occupied = 0;
    for (Direction d : kDirections) {
      const auto& slot = j.slot(d);
      if (!slot.has_value()) continue;
      ++occupied;
      const int si = tree.segment_index(*slot);
      if (si < 0) {
        issue("junction " + j.id + ": slot " + dir_name(d) +
              " references missing segment " + *slot);
        continue;
      }
      const Segment& s = tree.segments[si];
      const bool plus = slot_faces_segment_plus(d);
      const std::string& node = plus ? s.node_plus : s.node_minus;
      if (node != j.id) {
        issue("junction " + j.id + ": slot " + dir_name(d) + " segment " +
              s.id + " is not incident at that end");
      }
      const bool want_horizontal =
          d == Direction::Left || d == Direction::Right;
      if ((s.orientation == Orientation::Horizontal) != want_horizontal) {
        issue("junction " + j.id + ": slot " + dir_name(d) + " segment " +
              s.id + " has the wrong orientation");
      }
    }
    switch (j.kind) {
      case JunctionKind::Interior:
        if (occupied < 2) {
          issue("junction " + j.id + ": interior junction needs >= 2 slots");
        }
        break;
      case JunctionKind::BlockedTerminal:
        if (occupied != 1) {
          issue("junction " + j.id + ": blocked terminal needs exactly 1 slot");
        }
        break;
      case JunctionKind::VoidNode: {
        ++void_nodes;
        if (occupied != 1) {
          issue("junction " + j.id + ": void node needs exactly 1 slot");
        } else {
          for (Direction d : kDirections) {
            const auto& slot = j.slot(d);
            if (!slot.has_value()) continue;
            const int si = tree.segment_index(*slot);
            if (si < 0) break;
            const VoidEnd want = slot_faces_segment_plus(d) ? VoidEnd::AtPlus
                                                            : VoidEnd::AtMinus;
            if (tree.segments[si].void_end != want) {
              issue("junction " + j.id + ": segment " + *slot +
                    " void_end does not match the void node");
            }
          }
        }
        break;
      }
    }
  }
  if (void_nodes > 1) issue("multiple void nodes");
  if (void_segments == 1 && void_nodes == 0) {
    issue("void segment present but no void node junction");
  }

  // connectivity over the junction graph
  if (diag.ok() && !tree.junctions.empty()) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& s : tree.segments) {
      adj[s.node_minus].push_back(s.node_plus);
      adj[s.node_plus].push_back(s.node_minus);
    }
    std::set<std::string> seen;
    std::queue<std::string> q;
    q.push(tree.junctions.front().id);
    seen.insert(tree.junctions.front().id);
    while (!q.empty()) {
      auto cur = q.front();
      q.pop();
      for (const auto& nxt : adj[cur]) {
        if (seen.insert(nxt).second) q.push(nxt);
      }
    }
    for (const auto& j : tree.junctions) {
      if (!seen.count(j.id)) {
        issue("junction " + j.id + ": not connected to the rest of the tree");
      }
    }
  }

  return diag;
}

}  // namespace empost::core
