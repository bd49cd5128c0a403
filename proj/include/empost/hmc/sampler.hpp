#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace empost::hmc {

// Unnormalized target: potential U and its exact gradient over a flat
// parameter vector. Both must be reentrant.
struct Target {
  std::function<double(const Eigen::VectorXd&)> potential;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

struct HmcConfig {
  double step_size = 0.1;
  int leapfrog_steps = 20;
  int n_samples = 30;   // retained, post burn-in
  int burn_in = 500;
  bool tune = true;     // step-size doubling/halving during burn-in
  std::uint64_t seed = 0;
  double divergence_threshold = 1000.0;  // |dH| aborting a trajectory

  void validate() const;
};

struct HmcChain {
  std::vector<Eigen::VectorXd> samples;
  std::vector<double> energies;      // U at each retained sample
  std::vector<bool> accept_flags;
};

struct HmcDiagnostics {
  double acceptance_rate = 0.0;  // over retained samples
  double mean_abs_dh = 0.0;
  double tuned_step_size = 0.0;
  int divergences = 0;
};

// H = U + r'r/2 (identity mass matrix).
double hamiltonian(double potential_value, const Eigen::VectorXd& momentum);

// Metropolis-Hastings acceptance probability min(1, exp(H_old - H_new)).
double accept_probability(double h_old, double h_new);

// Half-kick / drift / half-kick leapfrog, `steps` times. Returns false and
// leaves (position, momentum) at the last finite state if a gradient turns
// non-finite.
bool leapfrog(Eigen::VectorXd& position, Eigen::VectorXd& momentum,
              const Target& target, double step_size, int steps);

struct HmcState {
  Eigen::VectorXd position;
  double potential_value = 0.0;
};

struct StepResult {
  bool accepted = false;
  bool divergent = false;
  double delta_h = 0.0;
};

// One HMC transition: resample momentum, integrate, accept/reject.
StepResult mh_step(HmcState& state, const Target& target, double step_size,
                   int leapfrog_steps, double divergence_threshold,
                   std::mt19937_64& rng);

// Full chain. Throws if every post-burn-in proposal is rejected.
std::pair<HmcChain, HmcDiagnostics> sample_posterior(
    const Eigen::VectorXd& init, const Target& target, const HmcConfig& cfg);

// Burn-in-style tuning run targeting acceptance in [0.6, 0.9]; returns the
// final step size (the last value if the window is never reached).
double tune_step_size(const Target& target, const Eigen::VectorXd& init,
                      const HmcConfig& cfg);

}  // namespace empost::hmc
