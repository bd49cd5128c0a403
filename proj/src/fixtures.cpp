#include "empost/fixtures.hpp"

#include <map>
#include <stdexcept>

namespace empost::fixtures {

core::MaterialParams copper(double temperature) {
  core::MaterialParams m;
  m.e_charge = 1.6e-19;
  m.rho = 2.2e-8;
  m.z_star = 10.0;
  m.omega_atomic = 8.78e-30;
  m.bulk_modulus = 1.0e11;
  m.d0 = 5.2e-5;
  m.ea_ev = 1.1;
  m.temperature = temperature;
  m.sigma_crit = 5.0e8;
  return m;
}

namespace {

core::Junction make_junction(std::string id, core::JunctionKind kind) {
  core::Junction j;
  j.id = std::move(id);
  j.kind = kind;
  return j;
}

core::Segment make_segment(std::string id, std::string minus,
                           std::string plus, double length, double current,
                           core::Orientation orient,
                           core::InitialStressProfile h,
                           core::VoidEnd void_end = core::VoidEnd::None) {
  core::Segment s;
  s.id = std::move(id);
  s.node_minus = std::move(minus);
  s.node_plus = std::move(plus);
  s.length = length;
  s.width = 1e-6;
  s.current_density = current;
  s.orientation = orient;
  s.void_end = void_end;
  s.initial_stress = std::move(h);
  return s;
}

void attach(core::InterconnectTree& tree, const core::Segment& s) {
  const bool horizontal = s.orientation == core::Orientation::Horizontal;
  auto& jm = tree.junctions[tree.junction_index(s.node_minus)];
  auto& jp = tree.junctions[tree.junction_index(s.node_plus)];
  jm.slot(horizontal ? core::Direction::Right : core::Direction::Up) = s.id;
  jp.slot(horizontal ? core::Direction::Left : core::Direction::Down) = s.id;
}

// straight-line initial stress with slope -G, from the value at the minus end
core::InitialStressProfile steady_profile(double sigma_minus, double length,
                                          double drive) {
  return core::InitialStressProfile::make_piecewise(
      {{0.0, sigma_minus}, {length, sigma_minus - drive * length}});
}

}  // namespace

core::InterconnectTree single_voidless(double length, double current,
                                       core::InitialStressProfile h,
                                       double temperature) {
  core::InterconnectTree tree;
  tree.material = copper(temperature);
  tree.junctions.push_back(
      make_junction("n0", core::JunctionKind::BlockedTerminal));
  tree.junctions.push_back(
      make_junction("n1", core::JunctionKind::BlockedTerminal));
  auto s = make_segment("s1", "n0", "n1", length, current,
                        core::Orientation::Horizontal, std::move(h));
  tree.segments.push_back(s);
  attach(tree, s);
  return tree;
}

core::InterconnectTree single_void(double length, double current,
                                   core::VoidEnd void_end,
                                   core::InitialStressProfile h,
                                   double temperature) {
  if (void_end == core::VoidEnd::None) {
    throw std::invalid_argument("single_void: void_end must name an end");
  }
  core::InterconnectTree tree;
  tree.material = copper(temperature);
  const bool at_minus = void_end == core::VoidEnd::AtMinus;
  tree.junctions.push_back(make_junction(
      "n0", at_minus ? core::JunctionKind::VoidNode
                     : core::JunctionKind::BlockedTerminal));
  tree.junctions.push_back(make_junction(
      "n1", at_minus ? core::JunctionKind::BlockedTerminal
                     : core::JunctionKind::VoidNode));
  auto s = make_segment("s1", "n0", "n1", length, current,
                        core::Orientation::Horizontal, std::move(h), void_end);
  tree.segments.push_back(s);
  attach(tree, s);
  return tree;
}

core::InterconnectTree chain(const std::vector<double>& lengths,
                             const std::vector<double>& currents,
                             double sigma_root, bool void_at_root,
                             double temperature) {
  if (lengths.size() != currents.size() || lengths.empty()) {
    throw std::invalid_argument("chain: lengths/currents mismatch");
  }
  core::InterconnectTree tree;
  tree.material = copper(temperature);
  const int n = static_cast<int>(lengths.size());
  for (int j = 0; j <= n; ++j) {
    core::JunctionKind kind = core::JunctionKind::Interior;
    if (j == 0) {
      kind = void_at_root ? core::JunctionKind::VoidNode
                          : core::JunctionKind::BlockedTerminal;
    } else if (j == n) {
      kind = core::JunctionKind::BlockedTerminal;
    }
    tree.junctions.push_back(make_junction("j" + std::to_string(j), kind));
  }
  double sigma = sigma_root;
  for (int i = 0; i < n; ++i) {
    const double g = core::drive_force(currents[i], tree.material);
    auto s = make_segment(
        "s" + std::to_string(i + 1), "j" + std::to_string(i),
        "j" + std::to_string(i + 1), lengths[i], currents[i],
        core::Orientation::Horizontal, steady_profile(sigma, lengths[i], g),
        void_at_root && i == 0 ? core::VoidEnd::AtMinus : core::VoidEnd::None);
    tree.segments.push_back(s);
    attach(tree, s);
    sigma -= g * lengths[i];
  }
  return tree;
}

core::InterconnectTree ten_segment(double temperature) {
  core::InterconnectTree tree;
  tree.material = copper(temperature);

  // spine junctions j0..j6: j0 carries the void, j6 is blocked
  tree.junctions.push_back(make_junction("j0", core::JunctionKind::VoidNode));
  for (int j = 1; j <= 5; ++j) {
    tree.junctions.push_back(
        make_junction("j" + std::to_string(j), core::JunctionKind::Interior));
  }
  tree.junctions.push_back(
      make_junction("j6", core::JunctionKind::BlockedTerminal));
  for (const char* id : {"t7", "t8", "t9", "t10"}) {
    tree.junctions.push_back(
        make_junction(id, core::JunctionKind::BlockedTerminal));
  }

  const double um = 1e-6;
  struct Spec {
    const char* id;
    const char* minus;
    const char* plus;
    double length;
    double current;
    core::Orientation orient;
  };
  // branches: s7 rises from j1, s8 hangs from j2, s9 rises from j3,
  // s10 hangs from j4
  const Spec specs[] = {
      {"s1", "j0", "j1", 18 * um, 2.2e9, core::Orientation::Horizontal},
      {"s2", "j1", "j2", 24 * um, 1.6e9, core::Orientation::Horizontal},
      {"s3", "j2", "j3", 30 * um, 1.1e9, core::Orientation::Horizontal},
      {"s4", "j3", "j4", 22 * um, -0.9e9, core::Orientation::Horizontal},
      {"s5", "j4", "j5", 26 * um, 1.4e9, core::Orientation::Horizontal},
      {"s6", "j5", "j6", 20 * um, -1.8e9, core::Orientation::Horizontal},
      {"s7", "j1", "t7", 14 * um, 2.4e9, core::Orientation::Vertical},
      {"s8", "t8", "j2", 16 * um, 1.2e9, core::Orientation::Vertical},
      {"s9", "j3", "t9", 12 * um, -1.5e9, core::Orientation::Vertical},
      {"s10", "t10", "j4", 15 * um, 0.8e9, core::Orientation::Vertical},
  };

  // zero-flux steady state: junction stresses from a walk over the spine,
  // then branch terminals
  std::map<std::string, double> node_sigma;
  node_sigma["j0"] = 4.2e8;
  auto drive = [&](double j) { return core::drive_force(j, tree.material); };
  for (const auto& sp : specs) {
    const double g = drive(sp.current);
    if (node_sigma.count(sp.minus)) {
      node_sigma[sp.plus] = node_sigma[sp.minus] - g * sp.length;
    } else if (node_sigma.count(sp.plus)) {
      node_sigma[sp.minus] = node_sigma[sp.plus] + g * sp.length;
    } else {
      throw std::logic_error("ten_segment: disconnected walk");
    }
  }

  for (const auto& sp : specs) {
    const double g = drive(sp.current);
    const bool voided = std::string(sp.id) == "s1";
    // the void segment starts from the released state: pinned to zero at the
    // void, continuous with the spine at j1, first mixed eigenmode shape
    auto h = voided ? core::InitialStressProfile::make_cosine(
                          0.0, node_sigma[sp.plus], 0.5,
                          -0.5 * 3.14159265358979323846)
                    : steady_profile(node_sigma[sp.minus], sp.length, g);
    auto s = make_segment(sp.id, sp.minus, sp.plus, sp.length, sp.current,
                          sp.orient, std::move(h),
                          voided ? core::VoidEnd::AtMinus
                                 : core::VoidEnd::None);
    tree.segments.push_back(s);
    attach(tree, s);
  }
  return tree;
}

}  // namespace empost::fixtures
