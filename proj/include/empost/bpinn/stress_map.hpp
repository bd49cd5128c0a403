#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "empost/analytic/segment.hpp"
#include "empost/core/problem.hpp"
#include "empost/core/stress_field.hpp"

namespace empost::bpinn {

// Precomputed affine map from (network slot fluxes at quadrature nodes,
// blocked-terminal phi0 values) to segment stress on fixed grids.
//
// Each boundary stress is affine in the rate samples because the
// Gauss-Legendre convolution is a finite linear combination: for grid point
// (x, t_k) and quadrature node tau_(k,q),
//   sigma = base(x, t_k)
//         + sum_ends phi0_end * phi_basis_end(x, t_k)            (terminals)
//         + sum_ends sum_q W_end[x, t_k, q] * rate_end(tau_(k,q)).
// Rates come from the shared network: rate_end = selector . F(junction),
// so the whole field is affine in the raw junction outputs. The same node
// set and weights back both the potential gradient and fast prediction.
//
// Kernel sums, quadrature nodes and the initial-condition projections are
// exactly those of the direct analytic solvers, so both paths agree to
// rounding.
class TreeStressMap {
 public:
  // All grids are in the same (scaled) units as `physics`. Every segment
  // shares the t grid; x grids are per segment. t values must be >= 0 and
  // increasing; t = 0 entries get the initial state.
  static TreeStressMap build(const core::TreePhysics& physics,
                             std::vector<std::vector<double>> x_grids,
                             std::vector<double> t_grid,
                             const analytic::SeriesConfig& cfg,
                             double rate_scale);

  // Quadrature node times, size nt * quad_order, node (k, q) at k*Q + q.
  const std::vector<double>& node_times() const { return node_times_; }
  int node_count() const { return static_cast<int>(node_times_.size()); }
  int quad_order() const { return quad_order_; }
  // total junction count of the physics the map was built from; sizes the
  // junction_outputs / junction_upstream vectors
  int junction_count() const { return n_junctions_; }

  struct TerminalEnd {
    int segment;
    bool at_plus;
  };
  // Blocked-terminal ends whose phi0 (= -G, per draw) the caller supplies to
  // evaluate(), in this order.
  const std::vector<TerminalEnd>& terminals() const { return terminals_; }

  // junction_outputs: per junction of `physics` (any kind; only interior ones
  // are read) the raw network outputs, 3 x node_count. terminal_phi0 matches
  // terminals().
  std::vector<core::StressField> evaluate(
      const std::vector<Eigen::MatrixXd>& junction_outputs,
      std::span<const double> terminal_phi0) const;

  // Reverse sweep: given dU/dsigma per segment grid point, accumulates
  // dU/d(raw junction outputs) into per-junction 3 x node_count matrices
  // (zero-initialized by the caller).
  void accumulate_upstream(
      const std::vector<std::vector<double>>& upstream_sigma,
      std::vector<Eigen::MatrixXd>& junction_upstream) const;

 private:
  struct EndpointMap {
    enum class Kind { None, Junction, Terminal };
    Kind kind = Kind::None;
    int junction = -1;
    Eigen::Vector3d selector = Eigen::Vector3d::Zero();  // rate_scale folded
    std::vector<double> conv_w;     // np * Q, 0 rows for t = 0 points
    std::vector<double> phi_basis;  // np (terminals only)
  };
  struct SegmentMap {
    std::vector<double> base;  // np = nx * nt
    EndpointMap ends[2];       // minus, plus
  };

  std::vector<SegmentMap> segments_;
  std::vector<std::vector<double>> x_grids_;
  std::vector<double> t_grid_;
  std::vector<double> node_times_;
  std::vector<TerminalEnd> terminals_;
  std::vector<std::string> segment_ids_;
  bool scaled_ = false;
  int quad_order_ = 0;
  int n_junctions_ = 0;
};

}  // namespace empost::bpinn
