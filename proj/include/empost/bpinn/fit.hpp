#pragma once

#include "empost/bpinn/potential.hpp"
#include "empost/hmc/sampler.hpp"

namespace empost::bpinn {

struct FitConfig {
  hmc::HmcConfig hmc;
  int warm_start_iters = 800;   // Adam steps on U before the chain; 0 skips
  double warm_start_lr = 0.02;
};

struct FitResult {
  hmc::HmcChain chain;
  hmc::HmcDiagnostics diagnostics;
  Eigen::VectorXd start_point;  // chain init after the warm start
  double fit_seconds = 0.0;
};

// Adam minimization of a Target's potential; returns the final iterate.
Eigen::VectorXd adam_minimize(const hmc::Target& target,
                              const Eigen::VectorXd& init, int iters,
                              double lr);

// Warm start (optional) followed by HMC sampling of exp(-U).
FitResult fit_posterior(const PotentialContext& ctx, const bnn::NetParams& init,
                        const FitConfig& cfg);

}  // namespace empost::bpinn
