#include "empost/bpinn/stress_map.hpp"

#include <algorithm>
#include <stdexcept>

#include "empost/analytic/quadrature.hpp"
#include "empost/bpinn/assembly.hpp"

namespace empost::bpinn {

TreeStressMap TreeStressMap::build(const core::TreePhysics& ph,
                                   std::vector<std::vector<double>> x_grids,
                                   std::vector<double> t_grid,
                                   const analytic::SeriesConfig& cfg,
                                   double rate_scale) {
  cfg.validate();
  if (x_grids.size() != ph.segments.size()) {
    throw std::invalid_argument("TreeStressMap: x grid count mismatch");
  }
  const int nt = static_cast<int>(t_grid.size());
  const int Q = cfg.quad_order;
  const auto& rule = analytic::gauss_legendre(Q);

  TreeStressMap map;
  map.x_grids_ = std::move(x_grids);
  map.t_grid_ = std::move(t_grid);
  map.quad_order_ = Q;
  map.scaled_ = ph.scaled;
  map.n_junctions_ = static_cast<int>(ph.junctions.size());

  map.node_times_.assign(static_cast<std::size_t>(nt) * Q, 0.0);
  for (int k = 0; k < nt; ++k) {
    const double half = 0.5 * map.t_grid_[k];
    for (int q = 0; q < Q; ++q) {
      map.node_times_[k * Q + q] = half * (rule.nodes[q] + 1.0);
    }
  }

  auto facing_slot = [&](int junction, int segment,
                         bool at_plus) -> core::Direction {
    const auto& jn = ph.junctions[junction];
    for (core::Direction d : core::kDirections) {
      if (jn.segment(d) == segment &&
          core::slot_faces_segment_plus(d) == at_plus) {
        return d;
      }
    }
    throw std::logic_error("TreeStressMap: slot lookup failed");
  };

  // sequential pass: ids, endpoint bookkeeping, terminal registry
  map.segments_.resize(ph.segments.size());
  for (std::size_t s = 0; s < ph.segments.size(); ++s) {
    const auto& seg = ph.segments[s];
    map.segment_ids_.push_back(seg.id);
    for (double& x : map.x_grids_[s]) {
      x = std::min(std::max(x, 0.0), seg.length);
    }
    for (bool at_plus : {false, true}) {
      const bool is_void_end =
          (seg.void_end == core::VoidEnd::AtMinus && !at_plus) ||
          (seg.void_end == core::VoidEnd::AtPlus && at_plus);
      if (is_void_end) continue;
      EndpointMap& em = map.segments_[s].ends[at_plus ? 1 : 0];
      const int j = at_plus ? seg.jplus : seg.jminus;
      const auto kind = ph.junctions[j].kind;
      if (kind == core::JunctionKind::Interior) {
        em.kind = EndpointMap::Kind::Junction;
        em.junction = j;
        em.selector =
            slot_selector(ph.junctions[j],
                          facing_slot(j, static_cast<int>(s), at_plus)) *
            rate_scale;
      } else if (kind == core::JunctionKind::BlockedTerminal) {
        em.kind = EndpointMap::Kind::Terminal;
        map.terminals_.push_back({static_cast<int>(s), at_plus});
      } else {
        throw std::invalid_argument(
            "TreeStressMap: non-void segment end touching a void node");
      }
    }
  }

  // parallel pass: kernel sums and quadrature weights per segment
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::ptrdiff_t sp = 0; sp < std::ptrdiff_t(ph.segments.size()); ++sp) {
    const std::size_t s = static_cast<std::size_t>(sp);
    const auto& seg = ph.segments[s];
    const auto& xs = map.x_grids_[s];
    const int nx = static_cast<int>(xs.size());
    const std::size_t np = static_cast<std::size_t>(nx) * nt;
    SegmentMap& sm = map.segments_[s];
    sm.base.assign(np, 0.0);

    // kernel sum of one end as a function of (x, elapsed time)
    auto end_sum = [&](bool at_plus, double x, double dt_) {
      switch (seg.void_end) {
        case core::VoidEnd::None:
          return at_plus ? analytic::voidless_plus_sum(cfg.p_max, x,
                                                       seg.length, dt_,
                                                       seg.kappa)
                         : analytic::voidless_minus_sum(cfg.p_max, x,
                                                        seg.length, dt_,
                                                        seg.kappa);
        case core::VoidEnd::AtPlus:
          return analytic::void_minus_sum(cfg.p_max, x, seg.length, dt_,
                                          seg.kappa);
        case core::VoidEnd::AtMinus:
          return analytic::void_minus_sum(cfg.p_max, seg.length - x,
                                          seg.length, dt_, seg.kappa);
      }
      return 0.0;
    };
    auto end_sign = [&](bool at_plus) {
      if (seg.void_end == core::VoidEnd::None) return at_plus ? 1.0 : -1.0;
      // voided segments: mirrored end flips the gradient sign
      return seg.void_end == core::VoidEnd::AtPlus ? 1.0 : -1.0;
    };

    // initial-condition part of the base
    for (int ix = 0; ix < nx; ++ix) {
      for (int k = 0; k < nt; ++k) {
        const double x = xs[ix];
        const double t = map.t_grid_[k];
        double ic = 0.0;
        if (seg.void_end == core::VoidEnd::None) {
          ic = analytic::ic_projection_voidless(seg.h, seg.length, seg.kappa,
                                                cfg.m_max, x, t);
        } else {
          ic = analytic::ic_projection_void(seg.h, seg.length, seg.kappa,
                                            cfg.m_max, x, t, seg.void_end);
        }
        sm.base[ix * nt + k] = ic;
      }
    }

    for (bool at_plus : {false, true}) {
      EndpointMap& em = sm.ends[at_plus ? 1 : 0];
      if (em.kind == EndpointMap::Kind::None) continue;
      const double sign = end_sign(at_plus);

      double phi0_fixed = 0.0;
      if (em.kind == EndpointMap::Kind::Junction) {
        phi0_fixed =
            seg.h.derivative(at_plus ? seg.length : 0.0, seg.length);
      } else {
        em.phi_basis.assign(np, 0.0);
      }

      em.conv_w.assign(np * Q, 0.0);
      for (int ix = 0; ix < nx; ++ix) {
        for (int k = 0; k < nt; ++k) {
          const double t = map.t_grid_[k];
          if (!(t > 0.0)) continue;
          const double x = xs[ix];
          const std::size_t pt = static_cast<std::size_t>(ix) * nt + k;
          const double s_now = end_sum(at_plus, x, t);
          if (em.kind == EndpointMap::Kind::Terminal) {
            em.phi_basis[pt] = sign * s_now;
          } else {
            sm.base[pt] += sign * phi0_fixed * s_now;
          }
          const double half = 0.5 * t;
          for (int q = 0; q < Q; ++q) {
            const double tau = map.node_times_[k * Q + q];
            em.conv_w[pt * Q + q] =
                sign * half * rule.weights[q] * end_sum(at_plus, x, t - tau);
          }
        }
      }
    }
  }
  return map;
}

std::vector<core::StressField> TreeStressMap::evaluate(
    const std::vector<Eigen::MatrixXd>& junction_outputs,
    std::span<const double> terminal_phi0) const {
  if (static_cast<int>(junction_outputs.size()) != n_junctions_) {
    throw std::invalid_argument("TreeStressMap: junction output count");
  }
  if (terminal_phi0.size() != terminals_.size()) {
    throw std::invalid_argument("TreeStressMap: terminal phi0 count");
  }
  // terminal index lookup by (segment, end)
  auto terminal_phi = [&](int segment, bool at_plus) {
    for (std::size_t i = 0; i < terminals_.size(); ++i) {
      if (terminals_[i].segment == segment &&
          terminals_[i].at_plus == at_plus) {
        return terminal_phi0[i];
      }
    }
    throw std::logic_error("TreeStressMap: terminal lookup failed");
  };

  const int nt = static_cast<int>(t_grid_.size());
  const int Q = quad_order_;
  std::vector<core::StressField> fields;
  fields.reserve(segments_.size());
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const SegmentMap& sm = segments_[s];
    auto f = core::StressField::zeros(segment_ids_[s], x_grids_[s], t_grid_);
    f.scaled = scaled_;
    f.values = sm.base;
    for (int e = 0; e < 2; ++e) {
      const EndpointMap& em = sm.ends[e];
      if (em.kind == EndpointMap::Kind::None) continue;
      if (em.kind == EndpointMap::Kind::Terminal) {
        const double phi0 = terminal_phi(static_cast<int>(s), e == 1);
        for (std::size_t pt = 0; pt < f.values.size(); ++pt) {
          f.values[pt] += phi0 * em.phi_basis[pt];
        }
        continue;
      }
      const Eigen::MatrixXd& F = junction_outputs[em.junction];
      if (F.rows() != 3 || F.cols() != node_count()) {
        throw std::invalid_argument("TreeStressMap: bad junction output shape");
      }
      const Eigen::RowVectorXd rates = em.selector.transpose() * F;
      for (std::size_t pt = 0; pt < f.values.size(); ++pt) {
        const int k = static_cast<int>(pt) % nt;
        double acc = 0.0;
        const double* w = &em.conv_w[pt * Q];
        const double* rv = rates.data() + k * Q;
        for (int q = 0; q < Q; ++q) acc += w[q] * rv[q];
        f.values[pt] += acc;
      }
    }
    fields.push_back(std::move(f));
  }
  return fields;
}

void TreeStressMap::accumulate_upstream(
    const std::vector<std::vector<double>>& upstream_sigma,
    std::vector<Eigen::MatrixXd>& junction_upstream) const {
  if (upstream_sigma.size() != segments_.size()) {
    throw std::invalid_argument("TreeStressMap: upstream segment count");
  }
  if (static_cast<int>(junction_upstream.size()) != n_junctions_) {
    throw std::invalid_argument("TreeStressMap: upstream junction count");
  }
  const int nt = static_cast<int>(t_grid_.size());
  const int Q = quad_order_;
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const SegmentMap& sm = segments_[s];
    const auto& up = upstream_sigma[s];
    for (int e = 0; e < 2; ++e) {
      const EndpointMap& em = sm.ends[e];
      if (em.kind != EndpointMap::Kind::Junction) continue;
      Eigen::MatrixXd& J = junction_upstream[em.junction];
      for (std::size_t pt = 0; pt < up.size(); ++pt) {
        if (up[pt] == 0.0) continue;
        const int k = static_cast<int>(pt) % nt;
        const double* w = &em.conv_w[pt * Q];
        for (int q = 0; q < Q; ++q) {
          if (w[q] == 0.0) continue;
          J.col(k * Q + q) += em.selector * (w[q] * up[pt]);
        }
      }
    }
  }
}

}  // namespace empost::bpinn
