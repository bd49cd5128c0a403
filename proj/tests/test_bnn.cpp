#include <doctest.h>

#include <cmath>
#include <random>

#include "empost/bnn/network.hpp"
#include "test_support.hpp"

using namespace empost;

namespace {
bnn::NetArchitecture small_arch() {
  bnn::NetArchitecture a;
  a.input_dim = 5;
  a.hidden = {8, 8};
  a.output_dim = 3;
  return a;
}
}  // namespace

TEST_CASE("architecture bookkeeping") {
  const auto arch = small_arch();
  CHECK(arch.layer_count() == 3);
  CHECK(arch.weight_shape(0) == std::pair<int, int>{8, 5});
  CHECK(arch.weight_shape(2) == std::pair<int, int>{3, 8});
  CHECK(arch.param_count() == (8 * 5 + 8) + (8 * 8 + 8) + (3 * 8 + 3));
  bnn::NetArchitecture bad = arch;
  bad.hidden = {0};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("forward") {
  const auto arch = small_arch();
  SUBCASE("bias passthrough with zero weights") {
    auto p = bnn::NetParams::zeros(arch);
    p.b.back() << 0.1, -0.2, 0.3;
    const Eigen::VectorXd out = bnn::forward(p, Eigen::VectorXd::Ones(5));
    CHECK(out[0] == doctest::Approx(0.1));
    CHECK(out[1] == doctest::Approx(-0.2));
    CHECK(out[2] == doctest::Approx(0.3));
  }
  SUBCASE("zero input and biases give zero output") {
    const auto p = bnn::init_prior(arch, bnn::PriorSpec::fan_in(arch), 3);
    auto q = p;
    for (auto& b : q.b) b.setZero();
    const Eigen::VectorXd out = bnn::forward(q, Eigen::VectorXd::Zero(5));
    CHECK(out.norm() == doctest::Approx(0.0));
  }
  SUBCASE("output bound from |tanh| <= 1") {
    const auto p = bnn::init_prior(arch, bnn::PriorSpec::fan_in(arch), 11);
    Eigen::VectorXd x(5);
    x << 3.0, -2.0, 5.0, 0.5, -4.0;
    const Eigen::VectorXd out = bnn::forward(p, x);
    for (int i = 0; i < 3; ++i) {
      const double bound =
          p.w.back().row(i).cwiseAbs().sum() + std::abs(p.b.back()[i]);
      CHECK(std::abs(out[i]) <= bound + 1e-12);
    }
  }
  SUBCASE("batched equals single") {
    const auto p = bnn::init_prior(arch, bnn::PriorSpec::fan_in(arch), 5);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(5, 7);
    const Eigen::MatrixXd Y = bnn::forward_batch(p, X);
    for (int c = 0; c < 7; ++c) {
      CHECK((Y.col(c) - bnn::forward(p, X.col(c))).norm() ==
            doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("prior initialization") {
  const auto arch = small_arch();
  const auto prior = bnn::PriorSpec::fan_in(arch);
  SUBCASE("deterministic under seed") {
    const auto a = bnn::init_prior(arch, prior, 42);
    const auto b = bnn::init_prior(arch, prior, 42);
    CHECK((a.to_flat() - b.to_flat()).norm() == 0.0);
    const auto c = bnn::init_prior(arch, prior, 43);
    CHECK((a.to_flat() - c.to_flat()).norm() > 0.0);
  }
  SUBCASE("layer variances respected statistically") {
    // 1e4 draws of the first weight entry
    double sum = 0.0, sumsq = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const auto p = bnn::init_prior(arch, prior, 1000 + i);
      const double w = p.w[0](0, 0);
      sum += w;
      sumsq += w * w;
    }
    const double var = sumsq / n - (sum / n) * (sum / n);
    CHECK(var == doctest::Approx(prior.var_w[0]).epsilon(0.10));
  }
  SUBCASE("variance validation") {
    auto bad = prior;
    bad.var_w[0] = 0.0;
    CHECK_THROWS(bnn::init_prior(arch, bad, 1));
  }
}

TEST_CASE("log prior") {
  bnn::NetArchitecture tiny;
  tiny.input_dim = 1;
  tiny.hidden = {};
  tiny.output_dim = 1;  // one weight + one bias
  bnn::PriorSpec prior;
  prior.var_w = {1.0};
  prior.var_b = {1.0};

  auto p = bnn::NetParams::zeros(tiny);
  // both parameters zero: 2 * (-0.5 ln 2pi)
  CHECK(bnn::log_prior(p, prior) ==
        doctest::Approx(2.0 * -0.9189385332046727).epsilon(1e-12));
  p.w[0](0, 0) = 1.0;
  CHECK(bnn::log_prior(p, prior) ==
        doctest::Approx(-1.4189385332046727 - 0.9189385332046727)
            .epsilon(1e-12));

  SUBCASE("additive over entries") {
    const auto arch = small_arch();
    const auto pr = bnn::PriorSpec::fan_in(arch);
    auto a = bnn::NetParams::zeros(arch);
    auto b = bnn::NetParams::zeros(arch);
    a.w[0](0, 0) = 0.7;
    b.w[1](2, 3) = -0.4;
    auto both = bnn::NetParams::zeros(arch);
    both.w[0](0, 0) = 0.7;
    both.w[1](2, 3) = -0.4;
    const double zero = bnn::log_prior(bnn::NetParams::zeros(arch), pr);
    CHECK(bnn::log_prior(both, pr) - zero ==
          doctest::Approx((bnn::log_prior(a, pr) - zero) +
                          (bnn::log_prior(b, pr) - zero))
              .epsilon(1e-12));
  }
  SUBCASE("gradient matches finite differences") {
    const auto arch = small_arch();
    const auto pr = bnn::PriorSpec::fan_in(arch);
    const auto p = bnn::init_prior(arch, pr, 9);
    const auto g = bnn::grad_log_prior(p, pr);
    auto f = [&](const Eigen::VectorXd& flat) {
      return bnn::log_prior(bnn::NetParams::from_flat(arch, flat), pr);
    };
    const Eigen::VectorXd fd =
        test_support::central_diff(f, p.to_flat(), 1e-6);
    CHECK((g.to_flat() - fd).norm() / fd.norm() < 1e-8);
  }
}

TEST_CASE("backward") {
  SUBCASE("zero upstream gives zero gradient") {
    const auto arch = small_arch();
    const auto p = bnn::init_prior(arch, bnn::PriorSpec::fan_in(arch), 2);
    const auto g =
        bnn::backward(p, Eigen::VectorXd::Ones(5), Eigen::VectorXd::Zero(3));
    CHECK(g.to_flat().norm() == 0.0);
  }
  SUBCASE("affine net gradient is upstream outer x") {
    bnn::NetArchitecture affine;
    affine.input_dim = 4;
    affine.hidden = {};
    affine.output_dim = 2;
    const auto p = bnn::init_prior(affine, bnn::PriorSpec::fan_in(affine), 3);
    Eigen::VectorXd x(4);
    x << 1.0, -2.0, 0.5, 3.0;
    Eigen::VectorXd up(2);
    up << 2.0, -1.0;
    const auto g = bnn::backward(p, x, up);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 4; ++c) {
        CHECK(g.w[0](r, c) == doctest::Approx(up[r] * x[c]).epsilon(1e-14));
      }
      CHECK(g.b[0][r] == doctest::Approx(up[r]).epsilon(1e-14));
    }
  }
  SUBCASE("matches finite differences on random triples") {
    const auto arch = small_arch();
    const auto prior = bnn::PriorSpec::fan_in(arch);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = bnn::init_prior(arch, prior, 100 + trial);
      Eigen::VectorXd x(5), up(3);
      for (int i = 0; i < 5; ++i) x[i] = normal(rng);
      for (int i = 0; i < 3; ++i) up[i] = normal(rng);
      const auto g = bnn::backward(p, x, up);
      auto f = [&](const Eigen::VectorXd& flat) {
        return up.dot(
            bnn::forward(bnn::NetParams::from_flat(arch, flat), x));
      };
      const Eigen::VectorXd fd =
          test_support::central_diff(f, p.to_flat(), 1e-6);
      CHECK((g.to_flat() - fd).norm() / std::max(fd.norm(), 1e-12) < 1e-6);
    }
  }
  SUBCASE("batched accumulation sums single gradients") {
    const auto arch = small_arch();
    const auto p = bnn::init_prior(arch, bnn::PriorSpec::fan_in(arch), 8);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(5, 6);
    Eigen::MatrixXd Up = Eigen::MatrixXd::Random(3, 6);
    bnn::ForwardCache cache;
    bnn::forward_batch(p, X, &cache);
    auto batched = bnn::NetParams::zeros(arch);
    bnn::backward_batch(p, cache, Up, batched);
    auto summed = bnn::NetParams::zeros(arch);
    for (int c = 0; c < 6; ++c) {
      const auto g = bnn::backward(p, X.col(c), Up.col(c));
      for (std::size_t l = 0; l < g.w.size(); ++l) {
        summed.w[l] += g.w[l];
        summed.b[l] += g.b[l];
      }
    }
    CHECK((batched.to_flat() - summed.to_flat()).norm() /
              summed.to_flat().norm() <
          1e-12);
  }
}

TEST_CASE("flat round trip and serialization order") {
  const auto arch = small_arch();
  const auto p = bnn::init_prior(arch, bnn::PriorSpec::fan_in(arch), 77);
  const auto q = bnn::NetParams::from_flat(arch, p.to_flat());
  CHECK((p.to_flat() - q.to_flat()).norm() == 0.0);
  // row-major weight order: flat[1] is w0(0, 1)
  CHECK(p.to_flat()[1] == p.w[0](0, 1));
  // bias follows the weight block
  CHECK(p.to_flat()[8 * 5] == p.b[0][0]);
}
