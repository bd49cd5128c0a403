#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "empost/bnn/network.hpp"
#include "empost/bpinn/assembly.hpp"
#include "empost/bpinn/stress_map.hpp"
#include "empost/core/scaling.hpp"
#include "empost/core/tree.hpp"

namespace empost::bpinn {

// Stress-continuity observations: every interior junction at N_t evaluation
// times, for each training current draw. Targets default to zero (exact
// continuity); var_l is the tolerated violation in scaled stress^2 units.
struct ContinuityDataset {
  std::vector<double> eval_times;  // physical seconds, > 0, increasing
  std::vector<std::vector<double>> current_draws;  // per draw, per segment
  std::vector<double> targets;  // flattened (draw, time); empty = zeros
  double var_l = 1e-2;

  static ContinuityDataset uniform_times(double t_end, int n_times,
                                         std::vector<std::vector<double>>
                                             current_draws,
                                         double var_l = 1e-2);
  void validate(std::size_t n_segments) const;
  std::size_t observation_count() const {
    return eval_times.size() * current_draws.size();
  }
};

// Gaussian log-likelihood of observed continuity losses.
double log_likelihood(std::span<const double> loss_values,
                      std::span<const double> targets, double var_l);

// Per-evaluation-time continuity loss
//   sum_i (1/(N_I*K_i)) sum_k (sigma_k - sigma_(k-1))^2
// over interior junctions, adjacent segments taken in occupied (L, U, R, D)
// order. boundary_fields hold x = {0, L} per segment on a shared t grid.
std::vector<double> junction_continuity_losses(
    const core::TreePhysics& physics,
    const std::vector<core::StressField>& boundary_fields);

// Bundles the scaled physics, the boundary stress map on the evaluation
// grid and cached network inputs; provides U(omega) and its exact gradient.
class PotentialContext {
 public:
  PotentialContext(const core::InterconnectTree& tree,
                   const core::ScalingConstants& sc, ContinuityDataset data,
                   bnn::NetArchitecture arch, bnn::PriorSpec prior,
                   analytic::SeriesConfig series, double relative_std,
                   double rate_gain = 4.0);

  const bnn::NetArchitecture& architecture() const { return arch_; }
  const bnn::PriorSpec& prior() const { return prior_; }
  const InputNormalizer& normalizer() const { return norm_; }
  const ContinuityDataset& dataset() const { return data_; }
  const core::TreePhysics& scaled_physics() const { return physics_sc_; }

  // per-(draw, time) continuity losses L_i
  std::vector<double> observation_losses(const bnn::NetParams& params) const;
  // mean of the observation losses
  double continuity_loss(const bnn::NetParams& params) const;
  double log_likelihood_value(const bnn::NetParams& params) const;
  double potential(const bnn::NetParams& params) const;
  bnn::NetParams gradient(const bnn::NetParams& params) const;

  double potential_flat(const Eigen::VectorXd& flat) const;
  Eigen::VectorXd gradient_flat(const Eigen::VectorXd& flat) const;

  // boundary stresses (x = {0, L} per segment) for one draw; diagnostics
  std::vector<core::StressField> boundary_fields(const bnn::NetParams& params,
                                                 int draw) const;

  // worst junction |sigma_k - sigma_(k-1)| over junctions and eval times,
  // computed from per-segment boundary fields already on the loss grid
  double max_junction_mismatch(
      const std::vector<core::StressField>& boundary_fields) const;

 private:
  struct DrawData {
    std::vector<Eigen::MatrixXd> inputs;  // per junction, 5 x n_nodes
    std::vector<double> terminal_phi0;    // -G_sc per map terminal
  };

  void forward_draw(const bnn::NetParams& params, const DrawData& draw,
                    std::vector<Eigen::MatrixXd>& outputs,
                    std::vector<bnn::ForwardCache>* caches) const;
  std::vector<double> draw_losses(
      const std::vector<core::StressField>& fields) const;

  core::TreePhysics physics_sc_;
  ContinuityDataset data_;
  bnn::NetArchitecture arch_;
  bnn::PriorSpec prior_;
  analytic::SeriesConfig series_;
  InputNormalizer norm_;
  TreeStressMap map_;
  std::vector<DrawData> draws_;
  std::vector<int> interior_;  // junction indices
};

// Free-function forms of the per-operation contracts.
double continuity_loss(const core::InterconnectTree& tree,
                       const core::ScalingConstants& sc,
                       const bnn::NetParams& params,
                       const ContinuityDataset& data,
                       const analytic::SeriesConfig& series,
                       double relative_std = 0.15);
double potential_energy(const core::InterconnectTree& tree,
                        const core::ScalingConstants& sc,
                        const bnn::NetParams& params,
                        const ContinuityDataset& data,
                        const bnn::PriorSpec& prior,
                        const analytic::SeriesConfig& series,
                        double relative_std = 0.15);
bnn::NetParams grad_potential(const core::InterconnectTree& tree,
                              const core::ScalingConstants& sc,
                              const bnn::NetParams& params,
                              const ContinuityDataset& data,
                              const bnn::PriorSpec& prior,
                              const analytic::SeriesConfig& series,
                              double relative_std = 0.15);

}  // namespace empost::bpinn
