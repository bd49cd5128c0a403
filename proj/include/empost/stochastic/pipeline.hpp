#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "empost/analytic/segment.hpp"
#include "empost/bnn/network.hpp"
#include "empost/core/scaling.hpp"
#include "empost/core/tree.hpp"
#include "empost/fdm/solver.hpp"
#include "empost/hmc/sampler.hpp"

namespace empost::stochastic {

// Per-segment Gaussian input-current variation.
struct CurrentVariationSpec {
  std::vector<double> mean_j;  // A/m^2 per segment
  double relative_std = 0.15;
  int n_samples = 30;
  std::uint64_t seed = 0;

  static CurrentVariationSpec from_tree(const core::InterconnectTree& tree,
                                        double relative_std, int n_samples,
                                        std::uint64_t seed);
  void validate() const;
};

// n_samples i.i.d. draws, deterministic under seed.
std::vector<std::vector<double>> sample_currents(
    const CurrentVariationSpec& spec);

// Pointwise mean and population standard deviation over a stress-sample
// ensemble, physical units.
struct VariationalResult {
  std::vector<core::StressField> mean_fields;
  std::vector<core::StressField> std_fields;
  int sample_count = 0;
  std::string provenance;  // "fdm_mc" | "bpinn"
  double wall_seconds = 0.0;
};

// Shared comparison grids: nx points per segment over [0, L], nt times over
// (0, t_end] (t = 0 excluded; every solver returns h there).
struct ComparisonGrids {
  std::vector<std::vector<double>> x;  // per segment
  std::vector<double> t;

  static ComparisonGrids standard(const core::InterconnectTree& tree,
                                  double t_end, int nx = 30, int nt = 100);
};

// Monte-Carlo reference: one FDM tree solve per current draw.
VariationalResult mc_reference(const core::InterconnectTree& tree,
                               const CurrentVariationSpec& spec,
                               const fdm::FdmConfig& cfg,
                               const ComparisonGrids& grids, int threads = 1);

enum class SamplePairing { Paired, FixedMeanCurrents };

// Posterior-chain estimate: each parameter sample, paired with a current
// draw, is pushed through the precomputed analytic map; mean/std aggregated
// and unscaled.
VariationalResult bpinn_estimate(const core::InterconnectTree& tree,
                                 const core::ScalingConstants& sc,
                                 const std::vector<bnn::NetParams>& chain,
                                 const CurrentVariationSpec& spec,
                                 const analytic::SeriesConfig& series,
                                 const ComparisonGrids& grids,
                                 SamplePairing pairing = SamplePairing::Paired,
                                 int threads = 1, double rate_gain = 4.0);

struct RmseSummary {
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
  double combined = 0.0;  // (rmse_mean + rmse_std) / 2
};

// Pooled RMSE over all grid points of all segments; grids must match.
RmseSummary rmse_compare(const VariationalResult& a,
                         const VariationalResult& b);

// max - min over every mean-field grid point; the denominator of the
// relative acceptance metrics
double stress_range(const VariationalResult& r);

}  // namespace empost::stochastic
