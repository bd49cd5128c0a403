#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace empost::bnn {

// Fully connected tanh network, default 5 inputs -> 3 outputs with an affine
// output layer. hidden may be empty (pure affine map).
struct NetArchitecture {
  int input_dim = 5;
  std::vector<int> hidden = {32, 32};
  int output_dim = 3;

  void validate() const;
  int layer_count() const { return static_cast<int>(hidden.size()) + 1; }
  // (rows, cols) of the weight matrix of layer l
  std::pair<int, int> weight_shape(int layer) const;
  int param_count() const;
  bool operator==(const NetArchitecture&) const = default;
};

// Zero-mean Gaussian prior, one weight and one bias variance per layer.
struct PriorSpec {
  std::vector<double> var_w;
  std::vector<double> var_b;

  // 1/fan_in weight variances, unit bias variances
  static PriorSpec fan_in(const NetArchitecture& arch);
  void validate(const NetArchitecture& arch) const;
};

struct NetParams {
  NetArchitecture arch;
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;

  static NetParams zeros(const NetArchitecture& arch);
  int size() const { return arch.param_count(); }

  // flattening order: per layer, weight matrix row-major, then bias
  Eigen::VectorXd to_flat() const;
  static NetParams from_flat(const NetArchitecture& arch,
                             const Eigen::VectorXd& flat);
};

// i.i.d. draw from the prior, deterministic under seed.
NetParams init_prior(const NetArchitecture& arch, const PriorSpec& prior,
                     std::uint64_t seed);

Eigen::VectorXd forward(const NetParams& params, const Eigen::VectorXd& x);

// Columns of X are inputs; returns output columns. The cache, when given,
// stores post-activation values for backward_batch.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> activations;  // z_0 = X, then per hidden layer
};
Eigen::MatrixXd forward_batch(const NetParams& params,
                              const Eigen::MatrixXd& X,
                              ForwardCache* cache = nullptr);

double log_prior(const NetParams& params, const PriorSpec& prior);
NetParams grad_log_prior(const NetParams& params, const PriorSpec& prior);

// Exact reverse-mode gradient of upstream . f(params, x) in the parameters.
NetParams backward(const NetParams& params, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& upstream);
// Batched variant: sums gradients over column pairs of (X, upstream).
// Accumulates into grad (which must be zero-initialized by the caller).
void backward_batch(const NetParams& params, const ForwardCache& cache,
                    const Eigen::MatrixXd& upstream, NetParams& grad);

}  // namespace empost::bnn
