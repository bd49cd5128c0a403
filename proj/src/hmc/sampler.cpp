#include "empost/hmc/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace empost::hmc {

void HmcConfig::validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("HmcConfig: step_size > 0");
  if (leapfrog_steps < 1) {
    throw std::invalid_argument("HmcConfig: leapfrog_steps >= 1");
  }
  if (n_samples < 1) throw std::invalid_argument("HmcConfig: n_samples >= 1");
  if (burn_in < 0) throw std::invalid_argument("HmcConfig: burn_in >= 0");
  if (!(divergence_threshold > 0.0)) {
    throw std::invalid_argument("HmcConfig: divergence_threshold > 0");
  }
}

double hamiltonian(double potential_value, const Eigen::VectorXd& momentum) {
  return potential_value + 0.5 * momentum.squaredNorm();
}

double accept_probability(double h_old, double h_new) {
  const double d = h_old - h_new;
  if (d >= 0.0) return 1.0;
  return std::exp(d);
}

bool leapfrog(Eigen::VectorXd& position, Eigen::VectorXd& momentum,
              const Target& target, double step_size, int steps) {
  if (!(step_size > 0.0)) throw std::invalid_argument("leapfrog: step_size > 0");
  Eigen::VectorXd grad = target.gradient(position);
  if (!grad.allFinite()) return false;
  momentum -= 0.5 * step_size * grad;
  for (int s = 0; s < steps; ++s) {
    position += step_size * momentum;
    grad = target.gradient(position);
    if (!grad.allFinite()) return false;
    // full kick between inner steps, half kick at the end
    momentum -= (s + 1 < steps ? step_size : 0.5 * step_size) * grad;
  }
  return true;
}

StepResult mh_step(HmcState& state, const Target& target, double step_size,
                   int leapfrog_steps, double divergence_threshold,
                   std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd r(state.position.size());
  for (int i = 0; i < r.size(); ++i) r[i] = normal(rng);

  const double h_old = hamiltonian(state.potential_value, r);
  Eigen::VectorXd q = state.position;
  StepResult res;
  if (!leapfrog(q, r, target, step_size, leapfrog_steps)) {
    res.divergent = true;
  }
  double u_new = 0.0, h_new = 0.0;
  if (!res.divergent) {
    u_new = target.potential(q);
    h_new = hamiltonian(u_new, r);
    res.delta_h = h_new - h_old;
    if (!std::isfinite(h_new) || std::abs(res.delta_h) > divergence_threshold) {
      res.divergent = true;
    }
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double roll = unif(rng);  // drawn unconditionally for determinism
  if (!res.divergent && roll < accept_probability(h_old, h_new)) {
    state.position = std::move(q);
    state.potential_value = u_new;
    res.accepted = true;
  }
  return res;
}

namespace {

// Doubling/halving toward acceptance in [0.6, 0.9]. The factor is damped on
// each direction reversal so the step size settles inside the window instead
// of limit-cycling across it.
struct TuneWindow {
  int count = 0;
  int accepted = 0;
  double factor = 2.0;
  int last_direction = 0;

  void update(bool accept, double& eps) {
    ++count;
    if (accept) ++accepted;
    if (count < 25) return;
    const double rate = static_cast<double>(accepted) / count;
    int direction = 0;
    if (rate > 0.9) {
      direction = 1;
    } else if (rate < 0.6) {
      direction = -1;
    }
    if (direction != 0) {
      if (last_direction != 0 && direction != last_direction) {
        factor = std::max(std::sqrt(factor), 1.02);
      }
      eps *= direction > 0 ? factor : 1.0 / factor;
      last_direction = direction;
    }
    count = 0;
    accepted = 0;
  }
};

}  // namespace

std::pair<HmcChain, HmcDiagnostics> sample_posterior(
    const Eigen::VectorXd& init, const Target& target, const HmcConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  HmcState state{init, target.potential(init)};
  if (!std::isfinite(state.potential_value)) {
    throw std::invalid_argument("sample_posterior: non-finite initial U");
  }

  double eps = cfg.step_size;
  TuneWindow window;
  HmcChain chain;
  chain.samples.reserve(cfg.n_samples);
  HmcDiagnostics diag;
  double abs_dh_sum = 0.0;
  int retained_accepts = 0;

  const int total = cfg.burn_in + cfg.n_samples;
  for (int it = 0; it < total; ++it) {
    const StepResult res = mh_step(state, target, eps, cfg.leapfrog_steps,
                                   cfg.divergence_threshold, rng);
    if (res.divergent) ++diag.divergences;
    if (it < cfg.burn_in) {
      if (cfg.tune) window.update(res.accepted, eps);
      continue;
    }
    chain.samples.push_back(state.position);
    chain.energies.push_back(state.potential_value);
    chain.accept_flags.push_back(res.accepted);
    if (res.accepted) ++retained_accepts;
    if (!res.divergent) abs_dh_sum += std::abs(res.delta_h);
  }

  diag.acceptance_rate =
      static_cast<double>(retained_accepts) / cfg.n_samples;
  diag.mean_abs_dh = abs_dh_sum / cfg.n_samples;
  diag.tuned_step_size = eps;
  if (retained_accepts == 0) {
    throw std::runtime_error(
        "sample_posterior: chain rejected every retained proposal");
  }
  return {std::move(chain), diag};
}

double tune_step_size(const Target& target, const Eigen::VectorXd& init,
                      const HmcConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  HmcState state{init, target.potential(init)};
  double eps = cfg.step_size;
  TuneWindow window;
  for (int it = 0; it < cfg.burn_in; ++it) {
    const StepResult res = mh_step(state, target, eps, cfg.leapfrog_steps,
                                   cfg.divergence_threshold, rng);
    window.update(res.accepted, eps);
  }
  return eps;
}

}  // namespace empost::hmc
