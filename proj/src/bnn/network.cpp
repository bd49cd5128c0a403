#include "empost/bnn/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace empost::bnn {

void NetArchitecture::validate() const {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("NetArchitecture: dims must be >= 1");
  }
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("NetArchitecture: hidden width >= 1");
  }
}

std::pair<int, int> NetArchitecture::weight_shape(int layer) const {
  const int nl = layer_count();
  if (layer < 0 || layer >= nl) {
    throw std::out_of_range("NetArchitecture: bad layer index");
  }
  const int in = layer == 0 ? input_dim : hidden[layer - 1];
  const int out = layer == nl - 1 ? output_dim : hidden[layer];
  return {out, in};
}

int NetArchitecture::param_count() const {
  int n = 0;
  for (int l = 0; l < layer_count(); ++l) {
    auto [rows, cols] = weight_shape(l);
    n += rows * cols + rows;
  }
  return n;
}

PriorSpec PriorSpec::fan_in(const NetArchitecture& arch) {
  PriorSpec p;
  for (int l = 0; l < arch.layer_count(); ++l) {
    auto [rows, cols] = arch.weight_shape(l);
    p.var_w.push_back(1.0 / cols);
    p.var_b.push_back(1.0);
  }
  return p;
}

void PriorSpec::validate(const NetArchitecture& arch) const {
  if (static_cast<int>(var_w.size()) != arch.layer_count() ||
      static_cast<int>(var_b.size()) != arch.layer_count()) {
    throw std::invalid_argument("PriorSpec: layer count mismatch");
  }
  for (double v : var_w) {
    if (!(v > 0.0)) throw std::invalid_argument("PriorSpec: var_w > 0");
  }
  for (double v : var_b) {
    if (!(v > 0.0)) throw std::invalid_argument("PriorSpec: var_b > 0");
  }
}

NetParams NetParams::zeros(const NetArchitecture& arch) {
  arch.validate();
  NetParams p;
  p.arch = arch;
  for (int l = 0; l < arch.layer_count(); ++l) {
    auto [rows, cols] = arch.weight_shape(l);
    p.w.emplace_back(Eigen::MatrixXd::Zero(rows, cols));
    p.b.emplace_back(Eigen::VectorXd::Zero(rows));
  }
  return p;
}

Eigen::VectorXd NetParams::to_flat() const {
  Eigen::VectorXd flat(size());
  int k = 0;
  for (std::size_t l = 0; l < w.size(); ++l) {
    for (int r = 0; r < w[l].rows(); ++r) {
      for (int c = 0; c < w[l].cols(); ++c) flat[k++] = w[l](r, c);
    }
    for (int r = 0; r < b[l].size(); ++r) flat[k++] = b[l][r];
  }
  return flat;
}

NetParams NetParams::from_flat(const NetArchitecture& arch,
                               const Eigen::VectorXd& flat) {
  if (flat.size() != arch.param_count()) {
    throw std::invalid_argument("NetParams: flat size mismatch");
  }
  NetParams p = zeros(arch);
  int k = 0;
  for (std::size_t l = 0; l < p.w.size(); ++l) {
    for (int r = 0; r < p.w[l].rows(); ++r) {
      for (int c = 0; c < p.w[l].cols(); ++c) p.w[l](r, c) = flat[k++];
    }
    for (int r = 0; r < p.b[l].size(); ++r) p.b[l][r] = flat[k++];
  }
  return p;
}

NetParams init_prior(const NetArchitecture& arch, const PriorSpec& prior,
                     std::uint64_t seed) {
  arch.validate();
  prior.validate(arch);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  NetParams p = NetParams::zeros(arch);
  for (std::size_t l = 0; l < p.w.size(); ++l) {
    const double sw = std::sqrt(prior.var_w[l]);
    const double sb = std::sqrt(prior.var_b[l]);
    for (int r = 0; r < p.w[l].rows(); ++r) {
      for (int c = 0; c < p.w[l].cols(); ++c) p.w[l](r, c) = sw * normal(rng);
    }
    for (int r = 0; r < p.b[l].size(); ++r) p.b[l][r] = sb * normal(rng);
  }
  return p;
}

Eigen::VectorXd forward(const NetParams& params, const Eigen::VectorXd& x) {
  if (x.size() != params.arch.input_dim) {
    throw std::invalid_argument("forward: input size mismatch");
  }
  Eigen::VectorXd z = x;
  const int nl = params.arch.layer_count();
  for (int l = 0; l < nl - 1; ++l) {
    z = (params.w[l] * z + params.b[l]).array().tanh().matrix();
  }
  return params.w[nl - 1] * z + params.b[nl - 1];
}

Eigen::MatrixXd forward_batch(const NetParams& params,
                              const Eigen::MatrixXd& X, ForwardCache* cache) {
  if (X.rows() != params.arch.input_dim) {
    throw std::invalid_argument("forward_batch: input rows mismatch");
  }
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(X);
  }
  Eigen::MatrixXd z = X;
  const int nl = params.arch.layer_count();
  for (int l = 0; l < nl - 1; ++l) {
    z = ((params.w[l] * z).colwise() + params.b[l]).array().tanh().matrix();
    if (cache) cache->activations.push_back(z);
  }
  return (params.w[nl - 1] * z).colwise() + params.b[nl - 1];
}

double log_prior(const NetParams& params, const PriorSpec& prior) {
  prior.validate(params.arch);
  constexpr double kLog2Pi = 1.8378770664093454;
  double lp = 0.0;
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    const double vw = prior.var_w[l];
    const double vb = prior.var_b[l];
    const double nw = static_cast<double>(params.w[l].size());
    const double nb = static_cast<double>(params.b[l].size());
    lp += -0.5 * nw * (kLog2Pi + std::log(vw)) -
          params.w[l].squaredNorm() / (2.0 * vw);
    lp += -0.5 * nb * (kLog2Pi + std::log(vb)) -
          params.b[l].squaredNorm() / (2.0 * vb);
  }
  return lp;
}

NetParams grad_log_prior(const NetParams& params, const PriorSpec& prior) {
  prior.validate(params.arch);
  NetParams g = NetParams::zeros(params.arch);
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    g.w[l] = -params.w[l] / prior.var_w[l];
    g.b[l] = -params.b[l] / prior.var_b[l];
  }
  return g;
}

NetParams backward(const NetParams& params, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& upstream) {
  if (upstream.size() != params.arch.output_dim) {
    throw std::invalid_argument("backward: upstream size mismatch");
  }
  ForwardCache cache;
  forward_batch(params, x, &cache);
  NetParams grad = NetParams::zeros(params.arch);
  backward_batch(params, cache, upstream, grad);
  return grad;
}

void backward_batch(const NetParams& params, const ForwardCache& cache,
                    const Eigen::MatrixXd& upstream, NetParams& grad) {
  const int nl = params.arch.layer_count();
  if (static_cast<int>(cache.activations.size()) != nl) {
    throw std::invalid_argument("backward_batch: stale cache");
  }
  // output layer is affine
  Eigen::MatrixXd delta = upstream;
  grad.w[nl - 1] += delta * cache.activations[nl - 1].transpose();
  grad.b[nl - 1] += delta.rowwise().sum();
  for (int l = nl - 2; l >= 0; --l) {
    // d tanh = 1 - tanh^2, tanh values are the cached activations
    const Eigen::MatrixXd& act = cache.activations[l + 1];
    delta = (params.w[l + 1].transpose() * delta).array() *
            (1.0 - act.array().square());
    grad.w[l] += delta * cache.activations[l].transpose();
    grad.b[l] += delta.rowwise().sum();
  }
}

}  // namespace empost::bnn
