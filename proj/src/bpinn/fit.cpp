#include "empost/bpinn/fit.hpp"

#include <chrono>
#include <cmath>

namespace empost::bpinn {

Eigen::VectorXd adam_minimize(const hmc::Target& target,
                              const Eigen::VectorXd& init, int iters,
                              double lr) {
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  Eigen::VectorXd x = init;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
  for (int it = 1; it <= iters; ++it) {
    const Eigen::VectorXd g = target.gradient(x);
    if (!g.allFinite()) break;
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v.array().matrix() + (1.0 - b2) * g.array().square().matrix();
    const double c1 = 1.0 - std::pow(b1, it);
    const double c2 = 1.0 - std::pow(b2, it);
    // linear decay to a tenth of the initial rate
    const double lr_t = lr * (0.1 + 0.9 * (1.0 - double(it) / iters));
    x -= (lr_t * (m / c1).array() / ((v / c2).array().sqrt() + eps)).matrix();
  }
  return x;
}

FitResult fit_posterior(const PotentialContext& ctx,
                        const bnn::NetParams& init, const FitConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  hmc::Target target{
      [&ctx](const Eigen::VectorXd& x) { return ctx.potential_flat(x); },
      [&ctx](const Eigen::VectorXd& x) { return ctx.gradient_flat(x); }};

  Eigen::VectorXd start = init.to_flat();
  if (cfg.warm_start_iters > 0) {
    start = adam_minimize(target, start, cfg.warm_start_iters,
                          cfg.warm_start_lr);
  }

  FitResult result;
  result.start_point = start;
  auto [chain, diag] = hmc::sample_posterior(start, target, cfg.hmc);
  result.chain = std::move(chain);
  result.diagnostics = diag;
  result.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

}  // namespace empost::bpinn
