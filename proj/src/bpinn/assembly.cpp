#include "empost/bpinn/assembly.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace empost::bpinn {

InputNormalizer InputNormalizer::make(const core::InterconnectTree& tree,
                                      const core::ScalingConstants& sc,
                                      double t_end_physical,
                                      double relative_std, double rate_gain) {
  InputNormalizer n;
  n.t_sc_end = sc.k_t * t_end_physical;
  double g_sc_max = 0.0;
  for (const auto& s : tree.segments) {
    n.j_mean.push_back(s.current_density);
    const double spread = relative_std * std::abs(s.current_density);
    const double floor = 1e-3 * std::abs(s.current_density) + 1.0;
    n.j_std.push_back(std::max(spread, floor));
    const double g_sc = std::abs(sc.drive_factor() *
                                 core::drive_force(s.current_density,
                                                   tree.material));
    g_sc_max = std::max(g_sc_max, g_sc);
  }
  n.rate_scale = g_sc_max > 0.0 ? rate_gain * g_sc_max / n.t_sc_end : 1.0;
  return n;
}

double InputNormalizer::normalized_current(int segment, double j) const {
  return (j - j_mean[segment]) / j_std[segment];
}

double FluxAssembly::slot_flux(core::Direction d) const {
  switch (d) {
    case core::Direction::Up: return raw[0];
    case core::Direction::Right: return raw[1];
    case core::Direction::Down: return raw[2];
    case core::Direction::Left: return f_left();
  }
  return 0.0;
}

Eigen::Vector3d slot_selector(const core::TreePhysics::Jn& junction,
                              core::Direction d) {
  Eigen::Vector3d sel = Eigen::Vector3d::Zero();
  if (!junction.occupied(d)) return sel;
  const double occ_u = junction.occupied(core::Direction::Up) ? 1.0 : 0.0;
  const double occ_r = junction.occupied(core::Direction::Right) ? 1.0 : 0.0;
  const double occ_d = junction.occupied(core::Direction::Down) ? 1.0 : 0.0;
  switch (d) {
    case core::Direction::Up: sel << occ_u, 0.0, 0.0; break;
    case core::Direction::Right: sel << 0.0, occ_r, 0.0; break;
    case core::Direction::Down: sel << 0.0, 0.0, occ_d; break;
    case core::Direction::Left: sel << occ_u, occ_r, occ_d; break;
  }
  return sel;
}

Eigen::VectorXd junction_inputs(const core::TreePhysics& physics,
                                int junction, double t_sc,
                                std::span<const double> currents,
                                const InputNormalizer& norm) {
  const auto& jn = physics.junctions.at(junction);
  if (jn.kind != core::JunctionKind::Interior) {
    throw std::invalid_argument("junction_inputs: junction is not interior");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(5);
  x[0] = t_sc / norm.t_sc_end;
  // (J_L, J_U, J_R, J_D) in slots 1..4
  const core::Direction order[4] = {core::Direction::Left, core::Direction::Up,
                                    core::Direction::Right,
                                    core::Direction::Down};
  for (int i = 0; i < 4; ++i) {
    const int s = jn.segment(order[i]);
    if (s >= 0) x[1 + i] = norm.normalized_current(s, currents[s]);
  }
  return x;
}

FluxAssembly assemble_junction_flux(const core::TreePhysics& physics,
                                    int junction, const bnn::NetParams& params,
                                    const InputNormalizer& norm, double t_sc,
                                    std::span<const double> currents) {
  const auto& jn = physics.junctions.at(junction);
  FluxAssembly fa;
  for (core::Direction d : core::kDirections) {
    fa.occupied[static_cast<int>(d)] = jn.occupied(d);
  }
  const Eigen::VectorXd out = bnn::forward(
      params, junction_inputs(physics, junction, t_sc, currents, norm));
  fa.raw[0] = jn.occupied(core::Direction::Up) ? out[0] : 0.0;
  fa.raw[1] = jn.occupied(core::Direction::Right) ? out[1] : 0.0;
  fa.raw[2] = jn.occupied(core::Direction::Down) ? out[2] : 0.0;
  return fa;
}

std::vector<SegmentBoundary> assemble_segment_fluxes(
    const core::TreePhysics& ph, const bnn::NetParams& params,
    const InputNormalizer& norm, std::vector<double> currents) {
  auto shared_params = std::make_shared<const bnn::NetParams>(params);
  auto shared_currents =
      std::make_shared<const std::vector<double>>(std::move(currents));

  // rate of the slot of junction j facing segment s
  auto make_rate = [&](int junction,
                       core::Direction d) -> std::function<double(double)> {
    const Eigen::Vector3d sel =
        slot_selector(ph.junctions[junction], d) * norm.rate_scale;
    const core::TreePhysics* phys = &ph;
    return [phys, junction, sel, shared_params, shared_currents,
            norm](double t_sc) {
      const Eigen::VectorXd x = junction_inputs(*phys, junction, t_sc,
                                                *shared_currents, norm);
      return sel.dot(bnn::forward(*shared_params, x));
    };
  };

  auto facing_slot = [&](int junction, int segment,
                         bool at_plus) -> core::Direction {
    const auto& jn = ph.junctions[junction];
    for (core::Direction d : core::kDirections) {
      if (jn.segment(d) == segment &&
          core::slot_faces_segment_plus(d) == at_plus) {
        return d;
      }
    }
    throw std::logic_error("assemble_segment_fluxes: slot lookup failed");
  };

  std::vector<SegmentBoundary> out(ph.segments.size());
  for (std::size_t s = 0; s < ph.segments.size(); ++s) {
    const auto& seg = ph.segments[s];
    for (bool at_plus : {false, true}) {
      const int j = at_plus ? seg.jplus : seg.jminus;
      const auto kind = ph.junctions[j].kind;
      const bool is_void_end =
          (seg.void_end == core::VoidEnd::AtMinus && !at_plus) ||
          (seg.void_end == core::VoidEnd::AtPlus && at_plus);
      if (is_void_end) continue;

      double phi0 = 0.0;
      std::function<double(double)> rate;
      if (kind == core::JunctionKind::Interior) {
        phi0 = seg.h.derivative(at_plus ? seg.length : 0.0, seg.length);
        rate = make_rate(j, facing_slot(j, static_cast<int>(s), at_plus));
      } else if (kind == core::JunctionKind::BlockedTerminal) {
        phi0 = -seg.drive;
      } else {
        throw std::invalid_argument(
            "assemble_segment_fluxes: non-void segment touching a void node");
      }

      if (seg.void_end == core::VoidEnd::None) {
        if (at_plus) {
          out[s].flux.phi_plus_0 = phi0;
          out[s].flux.rate_plus = std::move(rate);
        } else {
          out[s].flux.phi_minus_0 = phi0;
          out[s].flux.rate_minus = std::move(rate);
        }
      } else {
        out[s].nonvoid_end.phi0 = phi0;
        out[s].nonvoid_end.rate = std::move(rate);
      }
    }
  }
  return out;
}

}  // namespace empost::bpinn
