#include "empost/fdm/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace empost::fdm {

namespace {

int interval_count(double length, double dx_target) {
  const double dx = dx_target > 0.0 ? dx_target : length / 64.0;
  int n = static_cast<int>(std::lround(length / dx));
  return std::max(n, 8);
}

int step_count(const FdmConfig& cfg) {
  const double dt = cfg.dt > 0.0 ? cfg.dt : cfg.t_end / 1000.0;
  if (dt > cfg.t_end) {
    throw std::invalid_argument("FdmConfig: dt exceeds t_end");
  }
  return std::max(1, static_cast<int>(std::lround(cfg.t_end / dt)));
}

// snapshot step indices: for each requested time the nearest step (0 = IC)
std::vector<int> snapshot_steps(const std::vector<double>& out_times,
                                double dt, int nsteps) {
  std::vector<int> steps(out_times.size());
  for (std::size_t i = 0; i < out_times.size(); ++i) {
    int s = static_cast<int>(std::lround(out_times[i] / dt));
    steps[i] = std::clamp(s, 0, nsteps);
  }
  return steps;
}

// Thomas tridiagonal solve, in-place on rhs
void solve_tridiag(std::vector<double>& lo, std::vector<double>& di,
                   std::vector<double>& up, std::vector<double>& rhs) {
  const std::size_t n = di.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= di[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
  }
}

}  // namespace

void FdmConfig::validate() const {
  if (!(t_end > 0.0)) throw std::invalid_argument("FdmConfig: t_end > 0");
  if (dx_target < 0.0 || dt < 0.0) {
    throw std::invalid_argument("FdmConfig: negative step");
  }
  if (theta < 0.5 || theta > 1.0) {
    throw std::invalid_argument("FdmConfig: theta in [0.5, 1]");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("FdmConfig: delta > 0");
}

core::StressField solve_segment_fdm(const core::SegmentProblem& pr,
                                    const SegmentBc& minus,
                                    const SegmentBc& plus,
                                    const FdmConfig& cfg,
                                    const std::vector<double>& out_times,
                                    std::string segment_id) {
  cfg.validate();
  pr.h.validate(pr.length);
  if (out_times.empty()) {
    throw std::invalid_argument("solve_segment_fdm: no output times");
  }
  const int n_int = interval_count(pr.length, cfg.dx_target);
  const double dx = pr.length / n_int;
  const int nsteps = step_count(cfg);
  const double dt = cfg.t_end / nsteps;
  const int n = n_int + 1;
  const double mu = pr.kappa * dt / (dx * dx);
  const double th = cfg.theta;

  // phi(t) at both ends, tabulated per step boundary (trapezoid-integrated
  // rate so flux BCs stay consistent with the analytic convolution input)
  auto tabulate_phi = [&](const SegmentBc& bc) {
    std::vector<double> phi(nsteps + 1, 0.0);
    if (bc.kind == SegmentBc::Kind::Blocked) {
      std::fill(phi.begin(), phi.end(), -pr.drive);
    } else if (bc.kind == SegmentBc::Kind::Flux) {
      phi[0] = bc.phi0;
      double prev_rate = bc.rate ? bc.rate(0.0) : 0.0;
      for (int s = 1; s <= nsteps; ++s) {
        const double r = bc.rate ? bc.rate(s * dt) : 0.0;
        phi[s] = phi[s - 1] + 0.5 * dt * (prev_rate + r);
        prev_rate = r;
      }
    }
    return phi;
  };
  const std::vector<double> phi_minus = tabulate_phi(minus);
  const std::vector<double> phi_plus = tabulate_phi(plus);

  const bool void_minus = minus.kind == SegmentBc::Kind::Void;
  const bool void_plus = plus.kind == SegmentBc::Kind::Void;
  const bool robin = cfg.void_bc == FdmConfig::VoidBc::RobinDelta;

  // constant tridiagonal matrix of the implicit side
  std::vector<double> lo0(n, 0.0), di0(n, 0.0), up0(n, 0.0);
  for (int i = 1; i < n - 1; ++i) {
    lo0[i] = -th * mu;
    di0[i] = 1.0 + 2.0 * th * mu;
    up0[i] = -th * mu;
  }
  if (void_minus && !robin) {
    di0[0] = 1.0;
  } else if (void_minus && robin) {
    di0[0] = 1.0 + 2.0 * th * mu * (1.0 + dx / cfg.delta);
    up0[0] = -2.0 * th * mu;
  } else {
    di0[0] = 1.0 + 2.0 * th * mu;
    up0[0] = -2.0 * th * mu;
  }
  if (void_plus && !robin) {
    di0[n - 1] = 1.0;
  } else if (void_plus && robin) {
    di0[n - 1] = 1.0 + 2.0 * th * mu * (1.0 + dx / cfg.delta);
    lo0[n - 1] = -2.0 * th * mu;
  } else {
    di0[n - 1] = 1.0 + 2.0 * th * mu;
    lo0[n - 1] = -2.0 * th * mu;
  }

  std::vector<double> sig(n);
  for (int i = 0; i < n; ++i) sig[i] = pr.h.value(i * dx, pr.length);

  const std::vector<int> snaps = snapshot_steps(out_times, dt, nsteps);
  auto field = core::StressField::zeros(std::move(segment_id),
                                        std::vector<double>(n),
                                        out_times);
  for (int i = 0; i < n; ++i) field.x_grid[i] = i * dx;
  auto record = [&](int step) {
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      if (snaps[k] == step) {
        for (int i = 0; i < n; ++i) field.at(i, k) = sig[i];
      }
    }
  };
  record(0);

  std::vector<double> lo(n), di(n), up(n), rhs(n);
  for (int s = 1; s <= nsteps; ++s) {
    lo = lo0;
    di = di0;
    up = up0;
    for (int i = 1; i < n - 1; ++i) {
      rhs[i] = sig[i] + (1.0 - th) * mu * (sig[i - 1] - 2.0 * sig[i] +
                                           sig[i + 1]);
    }
    if (void_minus && !robin) {
      rhs[0] = 0.0;
    } else if (void_minus && robin) {
      rhs[0] = sig[0] + (1.0 - th) * mu *
                            (2.0 * sig[1] - 2.0 * sig[0] -
                             2.0 * dx / cfg.delta * sig[0]);
    } else {
      rhs[0] = sig[0] + (1.0 - th) * mu * (2.0 * sig[1] - 2.0 * sig[0]) -
               2.0 * pr.kappa * dt / dx *
                   (th * phi_minus[s] + (1.0 - th) * phi_minus[s - 1]);
    }
    if (void_plus && !robin) {
      rhs[n - 1] = 0.0;
    } else if (void_plus && robin) {
      rhs[n - 1] = sig[n - 1] + (1.0 - th) * mu *
                                    (2.0 * sig[n - 2] - 2.0 * sig[n - 1] -
                                     2.0 * dx / cfg.delta * sig[n - 1]);
    } else {
      rhs[n - 1] = sig[n - 1] +
                   (1.0 - th) * mu * (2.0 * sig[n - 2] - 2.0 * sig[n - 1]) +
                   2.0 * pr.kappa * dt / dx *
                       (th * phi_plus[s] + (1.0 - th) * phi_plus[s - 1]);
    }
    solve_tridiag(lo, di, up, rhs);
    sig = rhs;
    record(s);
  }
  return field;
}

std::vector<core::StressField> solve_tree_fdm(
    const core::TreePhysics& ph, const FdmConfig& cfg,
    const std::vector<double>& out_times) {
  cfg.validate();
  if (out_times.empty()) {
    throw std::invalid_argument("solve_tree_fdm: no output times");
  }
  const int nj = static_cast<int>(ph.junctions.size());
  const int ns = static_cast<int>(ph.segments.size());
  const int nsteps = step_count(cfg);
  const double dt = cfg.t_end / nsteps;
  const bool robin = cfg.void_bc == FdmConfig::VoidBc::RobinDelta;

  std::vector<int> n_int(ns), base(ns);
  int ndof = nj;
  for (int s = 0; s < ns; ++s) {
    n_int[s] = interval_count(ph.segments[s].length, cfg.dx_target);
    base[s] = ndof;
    ndof += n_int[s] - 1;  // interior nodes only
  }
  // global index of node i (0..N) of segment s
  auto gid = [&](int s, int i) -> int {
    const auto& seg = ph.segments[s];
    if (i == 0) return seg.jminus;
    if (i == n_int[s]) return seg.jplus;
    return base[s] + i - 1;
  };

  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> ta, tb;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(ndof);  // constant rhs part
  const double th = cfg.theta;

  // PDE rows of interior nodes
  for (int s = 0; s < ns; ++s) {
    const auto& seg = ph.segments[s];
    const double dx = seg.length / n_int[s];
    const double mu = seg.kappa * dt / (dx * dx);
    for (int i = 1; i < n_int[s]; ++i) {
      const int r = gid(s, i);
      ta.emplace_back(r, gid(s, i - 1), -th * mu);
      ta.emplace_back(r, r, 1.0 + 2.0 * th * mu);
      ta.emplace_back(r, gid(s, i + 1), -th * mu);
      tb.emplace_back(r, gid(s, i - 1), (1.0 - th) * mu);
      tb.emplace_back(r, r, 1.0 - 2.0 * (1.0 - th) * mu);
      tb.emplace_back(r, gid(s, i + 1), (1.0 - th) * mu);
    }
  }

  // junction rows
  for (int j = 0; j < nj; ++j) {
    const auto& jn = ph.junctions[j];
    switch (jn.kind) {
      case core::JunctionKind::BlockedTerminal: {
        // zero-flux ghost row of the single incident segment end
        for (core::Direction d : core::kDirections) {
          if (!jn.occupied(d)) continue;
          const int s = jn.segment(d);
          const auto& seg = ph.segments[s];
          const double dx = seg.length / n_int[s];
          const double mu = seg.kappa * dt / (dx * dx);
          const bool at_plus = core::slot_faces_segment_plus(d);
          const int nb = at_plus ? gid(s, n_int[s] - 1) : gid(s, 1);
          ta.emplace_back(j, j, 1.0 + 2.0 * th * mu);
          ta.emplace_back(j, nb, -2.0 * th * mu);
          tb.emplace_back(j, j, 1.0 - 2.0 * (1.0 - th) * mu);
          tb.emplace_back(j, nb, 2.0 * (1.0 - th) * mu);
          // phi = -G at both time levels
          const double flux_term = 2.0 * seg.kappa * dt / dx * seg.drive;
          c[j] += at_plus ? -flux_term : flux_term;
        }
        break;
      }
      case core::JunctionKind::VoidNode: {
        if (!robin) {
          ta.emplace_back(j, j, 1.0);
          // rhs stays 0
        } else {
          for (core::Direction d : core::kDirections) {
            if (!jn.occupied(d)) continue;
            const int s = jn.segment(d);
            const auto& seg = ph.segments[s];
            const double dx = seg.length / n_int[s];
            const double mu = seg.kappa * dt / (dx * dx);
            const bool at_plus = core::slot_faces_segment_plus(d);
            const int nb = at_plus ? gid(s, n_int[s] - 1) : gid(s, 1);
            ta.emplace_back(j, j,
                            1.0 + 2.0 * th * mu * (1.0 + dx / cfg.delta));
            ta.emplace_back(j, nb, -2.0 * th * mu);
            tb.emplace_back(
                j, j, 1.0 - 2.0 * (1.0 - th) * mu * (1.0 + dx / cfg.delta));
            tb.emplace_back(j, nb, 2.0 * (1.0 - th) * mu);
          }
        }
        break;
      }
      case core::JunctionKind::Interior: {
        // sum over incident ends of kappa (sigma_x + G) . n = 0 with
        // second-order one-sided differences, enforced at the new time.
        // The row is normalized to O(1) coefficients so the factorization
        // does not mix it with the O(1) PDE rows at wildly different scales.
        double norm = 0.0;
        for (core::Direction d : core::kDirections) {
          if (!jn.occupied(d)) continue;
          const int s = jn.segment(d);
          norm += ph.segments[s].kappa * n_int[s] /
                  (2.0 * ph.segments[s].length);
        }
        for (core::Direction d : core::kDirections) {
          if (!jn.occupied(d)) continue;
          const int s = jn.segment(d);
          const auto& seg = ph.segments[s];
          const double dx = seg.length / n_int[s];
          const double w = seg.kappa / (2.0 * dx) / norm;
          if (!core::slot_faces_segment_plus(d)) {
            // junction at the segment minus end, inward normal +x
            ta.emplace_back(j, j, -3.0 * w);
            ta.emplace_back(j, gid(s, 1), 4.0 * w);
            ta.emplace_back(j, gid(s, 2), -w);
            c[j] += -seg.kappa * seg.drive / norm;
          } else {
            ta.emplace_back(j, j, -3.0 * w);
            ta.emplace_back(j, gid(s, n_int[s] - 1), 4.0 * w);
            ta.emplace_back(j, gid(s, n_int[s] - 2), -w);
            c[j] += seg.kappa * seg.drive / norm;
          }
        }
        break;
      }
    }
  }

  Eigen::SparseMatrix<double> A(ndof, ndof), B(ndof, ndof);
  A.setFromTriplets(ta.begin(), ta.end());
  B.setFromTriplets(tb.begin(), tb.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) {
    std::string hint = ph.junctions.empty() ? "" : ph.junctions[0].id;
    for (const auto& jn : ph.junctions) {
      if (jn.kind == core::JunctionKind::Interior) {
        hint = jn.id;
        break;
      }
    }
    throw std::runtime_error(
        "solve_tree_fdm: singular step matrix (check junction " + hint + ")");
  }

  // initial state
  Eigen::VectorXd sig(ndof);
  for (int j = 0; j < nj; ++j) {
    const auto& jn = ph.junctions[j];
    for (core::Direction d : core::kDirections) {
      if (!jn.occupied(d)) continue;
      const int s = jn.segment(d);
      const auto& seg = ph.segments[s];
      const double x = core::slot_faces_segment_plus(d) ? seg.length : 0.0;
      sig[j] = seg.h.value(x, seg.length);
      break;
    }
  }
  for (int s = 0; s < ns; ++s) {
    const auto& seg = ph.segments[s];
    const double dx = seg.length / n_int[s];
    for (int i = 1; i < n_int[s]; ++i) {
      sig[base[s] + i - 1] = seg.h.value(i * dx, seg.length);
    }
  }

  const std::vector<int> snaps = snapshot_steps(out_times, dt, nsteps);
  std::vector<core::StressField> fields;
  fields.reserve(ns);
  for (int s = 0; s < ns; ++s) {
    std::vector<double> x(n_int[s] + 1);
    const double dx = ph.segments[s].length / n_int[s];
    for (int i = 0; i <= n_int[s]; ++i) x[i] = i * dx;
    auto f = core::StressField::zeros(ph.segments[s].id, std::move(x),
                                      out_times);
    f.scaled = ph.scaled;
    fields.push_back(std::move(f));
  }
  auto record = [&](int step) {
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      if (snaps[k] != step) continue;
      for (int s = 0; s < ns; ++s) {
        for (int i = 0; i <= n_int[s]; ++i) {
          fields[s].at(i, k) = sig[gid(s, i)];
        }
      }
    }
  };
  record(0);

  Eigen::VectorXd rhs(ndof);
  for (int step = 1; step <= nsteps; ++step) {
    rhs = B * sig + c;
    sig = lu.solve(rhs);
    record(step);
  }
  return fields;
}

}  // namespace empost::fdm
