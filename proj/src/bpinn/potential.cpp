#include "empost/bpinn/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace empost::bpinn {

namespace {
constexpr double kLog2Pi = 1.8378770664093454;
}

ContinuityDataset ContinuityDataset::uniform_times(
    double t_end, int n_times, std::vector<std::vector<double>> current_draws,
    double var_l) {
  if (n_times < 1) {
    throw std::invalid_argument("ContinuityDataset: n_times >= 1");
  }
  ContinuityDataset d;
  d.eval_times.resize(n_times);
  // (0, t_end]: continuity at t = 0 holds by construction of h
  for (int k = 0; k < n_times; ++k) {
    d.eval_times[k] = t_end * (k + 1) / n_times;
  }
  d.current_draws = std::move(current_draws);
  d.var_l = var_l;
  return d;
}

void ContinuityDataset::validate(std::size_t n_segments) const {
  if (eval_times.empty()) {
    throw std::invalid_argument("ContinuityDataset: no evaluation times");
  }
  for (std::size_t i = 0; i < eval_times.size(); ++i) {
    if (!(eval_times[i] > 0.0)) {
      throw std::invalid_argument("ContinuityDataset: times must be > 0");
    }
    if (i > 0 && !(eval_times[i] > eval_times[i - 1])) {
      throw std::invalid_argument("ContinuityDataset: times must increase");
    }
  }
  if (current_draws.empty()) {
    throw std::invalid_argument("ContinuityDataset: no current draws");
  }
  for (const auto& d : current_draws) {
    if (d.size() != n_segments) {
      throw std::invalid_argument("ContinuityDataset: draw size mismatch");
    }
  }
  if (!targets.empty() && targets.size() != observation_count()) {
    throw std::invalid_argument("ContinuityDataset: target count mismatch");
  }
  if (!(var_l > 0.0)) {
    throw std::invalid_argument("ContinuityDataset: var_l must be > 0");
  }
}

double log_likelihood(std::span<const double> loss_values,
                      std::span<const double> targets, double var_l) {
  if (!(var_l > 0.0)) {
    throw std::invalid_argument("log_likelihood: var_l must be > 0");
  }
  if (loss_values.size() != targets.size()) {
    throw std::invalid_argument("log_likelihood: length mismatch");
  }
  double ll = 0.0;
  for (std::size_t i = 0; i < loss_values.size(); ++i) {
    const double r = loss_values[i] - targets[i];
    ll += -0.5 * (kLog2Pi + std::log(var_l)) - r * r / (2.0 * var_l);
  }
  return ll;
}

PotentialContext::PotentialContext(const core::InterconnectTree& tree,
                                   const core::ScalingConstants& sc,
                                   ContinuityDataset data,
                                   bnn::NetArchitecture arch,
                                   bnn::PriorSpec prior,
                                   analytic::SeriesConfig series,
                                   double relative_std, double rate_gain)
    : data_(std::move(data)), arch_(std::move(arch)), prior_(std::move(prior)),
      series_(series) {
  arch_.validate();
  prior_.validate(arch_);
  series_.validate();
  data_.validate(tree.segments.size());
  sc.validate();

  const core::TreePhysics physical = core::make_physics(tree);
  physics_sc_ = core::scale_problem(physical, sc);
  interior_ = physics_sc_.interior_junctions();
  if (interior_.empty()) {
    throw std::invalid_argument(
        "PotentialContext: tree has no interior junctions");
  }

  norm_ = InputNormalizer::make(tree, sc, data_.eval_times.back(),
                                relative_std, rate_gain);

  std::vector<std::vector<double>> x_grids;
  for (const auto& seg : physics_sc_.segments) {
    x_grids.push_back({0.0, seg.length});
  }
  std::vector<double> t_sc(data_.eval_times.size());
  for (std::size_t k = 0; k < t_sc.size(); ++k) {
    t_sc[k] = sc.k_t * data_.eval_times[k];
  }
  map_ = TreeStressMap::build(physics_sc_, std::move(x_grids), std::move(t_sc),
                              series_, norm_.rate_scale);

  // cache network inputs and terminal phi0 per draw
  for (const auto& draw : data_.current_draws) {
    DrawData dd;
    dd.inputs.resize(physics_sc_.junctions.size());
    for (int j : interior_) {
      Eigen::MatrixXd X(arch_.input_dim, map_.node_count());
      for (int n = 0; n < map_.node_count(); ++n) {
        X.col(n) = junction_inputs(physics_sc_, j, map_.node_times()[n], draw,
                                   norm_);
      }
      dd.inputs[j] = std::move(X);
    }
    for (const auto& term : map_.terminals()) {
      const double g =
          core::drive_force(draw[term.segment], tree.material);
      dd.terminal_phi0.push_back(-sc.drive_factor() * g);
    }
    draws_.push_back(std::move(dd));
  }
}

void PotentialContext::forward_draw(
    const bnn::NetParams& params, const DrawData& draw,
    std::vector<Eigen::MatrixXd>& outputs,
    std::vector<bnn::ForwardCache>* caches) const {
  outputs.assign(physics_sc_.junctions.size(), Eigen::MatrixXd());
  if (caches) caches->assign(physics_sc_.junctions.size(), {});
  for (int j : interior_) {
    outputs[j] = bnn::forward_batch(params, draw.inputs[j],
                                    caches ? &(*caches)[j] : nullptr);
  }
}

std::vector<double> junction_continuity_losses(
    const core::TreePhysics& physics,
    const std::vector<core::StressField>& boundary_fields) {
  const auto interior = physics.interior_junctions();
  if (interior.empty()) {
    throw std::invalid_argument(
        "junction_continuity_losses: no interior junctions");
  }
  const std::size_t nt = boundary_fields.at(0).nt();
  const double n_i = static_cast<double>(interior.size());
  std::vector<double> losses(nt, 0.0);
  for (int j : interior) {
    const auto& jn = physics.junctions[j];
    if (jn.degree() < 2) {
      throw std::invalid_argument(
          "junction_continuity_losses: junction " + jn.id +
          " has fewer than 2 segments");
    }
    const double k_i = static_cast<double>(jn.degree());
    for (std::size_t k = 0; k < nt; ++k) {
      double prev = 0.0;
      bool have_prev = false;
      double acc = 0.0;
      for (core::Direction d : core::kDirections) {
        const int s = jn.segment(d);
        if (s < 0) continue;
        const std::size_t ix = core::slot_faces_segment_plus(d) ? 1 : 0;
        const double v = boundary_fields[s].at(ix, k);
        if (have_prev) {
          const double diff = v - prev;
          acc += diff * diff;
        }
        prev = v;
        have_prev = true;
      }
      losses[k] += acc / (n_i * k_i);
    }
  }
  return losses;
}

std::vector<double> PotentialContext::draw_losses(
    const std::vector<core::StressField>& fields) const {
  return junction_continuity_losses(physics_sc_, fields);
}

std::vector<double> PotentialContext::observation_losses(
    const bnn::NetParams& params) const {
  std::vector<double> all;
  all.reserve(data_.observation_count());
  std::vector<Eigen::MatrixXd> outputs;
  for (const auto& draw : draws_) {
    forward_draw(params, draw, outputs, nullptr);
    const auto fields = map_.evaluate(outputs, draw.terminal_phi0);
    const auto losses = draw_losses(fields);
    all.insert(all.end(), losses.begin(), losses.end());
  }
  return all;
}

double PotentialContext::continuity_loss(const bnn::NetParams& params) const {
  const auto losses = observation_losses(params);
  double sum = 0.0;
  for (double v : losses) sum += v;
  return sum / static_cast<double>(losses.size());
}

double PotentialContext::log_likelihood_value(
    const bnn::NetParams& params) const {
  const auto losses = observation_losses(params);
  std::vector<double> targets = data_.targets;
  if (targets.empty()) targets.assign(losses.size(), 0.0);
  return log_likelihood(losses, targets, data_.var_l);
}

double PotentialContext::potential(const bnn::NetParams& params) const {
  return -log_likelihood_value(params) - bnn::log_prior(params, prior_);
}

bnn::NetParams PotentialContext::gradient(const bnn::NetParams& params) const {
  bnn::NetParams grad = bnn::NetParams::zeros(arch_);
  const std::size_t nt = data_.eval_times.size();
  const double n_i = static_cast<double>(interior_.size());

  std::vector<Eigen::MatrixXd> outputs;
  std::vector<bnn::ForwardCache> caches;
  for (std::size_t d = 0; d < draws_.size(); ++d) {
    const DrawData& draw = draws_[d];
    forward_draw(params, draw, outputs, &caches);
    const auto fields = map_.evaluate(outputs, draw.terminal_phi0);
    const auto losses = draw_losses(fields);

    // dU/dsigma at every (segment, endpoint, time)
    std::vector<std::vector<double>> up_sigma(fields.size());
    for (std::size_t s = 0; s < fields.size(); ++s) {
      up_sigma[s].assign(fields[s].values.size(), 0.0);
    }
    for (std::size_t k = 0; k < nt; ++k) {
      const std::size_t obs = d * nt + k;
      const double target = data_.targets.empty() ? 0.0 : data_.targets[obs];
      const double dl = (losses[k] - target) / data_.var_l;  // dU/dL
      for (int j : interior_) {
        const auto& jn = physics_sc_.junctions[j];
        const double scale = dl / (n_i * static_cast<double>(jn.degree()));
        int prev_seg = -1;
        std::size_t prev_ix = 0;
        for (core::Direction dir : core::kDirections) {
          const int s = jn.segment(dir);
          if (s < 0) continue;
          const std::size_t ix = core::slot_faces_segment_plus(dir) ? 1 : 0;
          if (prev_seg >= 0) {
            const double diff =
                fields[s].at(ix, k) - fields[prev_seg].at(prev_ix, k);
            const double c = scale * 2.0 * diff;
            up_sigma[s][ix * nt + k] += c;
            up_sigma[prev_seg][prev_ix * nt + k] -= c;
          }
          prev_seg = s;
          prev_ix = ix;
        }
      }
    }

    std::vector<Eigen::MatrixXd> j_up(physics_sc_.junctions.size());
    for (int j : interior_) {
      j_up[j] = Eigen::MatrixXd::Zero(3, map_.node_count());
    }
    map_.accumulate_upstream(up_sigma, j_up);
    for (int j : interior_) {
      bnn::backward_batch(params, caches[j], j_up[j], grad);
    }
  }

  // add d(-log prior)/dtheta = theta / Var
  const bnn::NetParams glp = bnn::grad_log_prior(params, prior_);
  for (std::size_t l = 0; l < grad.w.size(); ++l) {
    grad.w[l] -= glp.w[l];
    grad.b[l] -= glp.b[l];
  }
  return grad;
}

double PotentialContext::potential_flat(const Eigen::VectorXd& flat) const {
  return potential(bnn::NetParams::from_flat(arch_, flat));
}

Eigen::VectorXd PotentialContext::gradient_flat(
    const Eigen::VectorXd& flat) const {
  return gradient(bnn::NetParams::from_flat(arch_, flat)).to_flat();
}

std::vector<core::StressField> PotentialContext::boundary_fields(
    const bnn::NetParams& params, int draw) const {
  if (draw < 0 || draw >= static_cast<int>(draws_.size())) {
    throw std::out_of_range("PotentialContext: bad draw index");
  }
  std::vector<Eigen::MatrixXd> outputs;
  forward_draw(params, draws_[draw], outputs, nullptr);
  return map_.evaluate(outputs, draws_[draw].terminal_phi0);
}

double PotentialContext::max_junction_mismatch(
    const std::vector<core::StressField>& fields) const {
  const std::size_t nt = data_.eval_times.size();
  double worst = 0.0;
  for (int j : interior_) {
    const auto& jn = physics_sc_.junctions[j];
    for (std::size_t k = 0; k < nt; ++k) {
      double prev = 0.0;
      bool have_prev = false;
      for (core::Direction d : core::kDirections) {
        const int s = jn.segment(d);
        if (s < 0) continue;
        const std::size_t ix = core::slot_faces_segment_plus(d) ? 1 : 0;
        const double v = fields[s].at(ix, k);
        if (have_prev) worst = std::max(worst, std::abs(v - prev));
        prev = v;
        have_prev = true;
      }
    }
  }
  return worst;
}

double continuity_loss(const core::InterconnectTree& tree,
                       const core::ScalingConstants& sc,
                       const bnn::NetParams& params,
                       const ContinuityDataset& data,
                       const analytic::SeriesConfig& series,
                       double relative_std) {
  PotentialContext ctx(tree, sc, data, params.arch,
                       bnn::PriorSpec::fan_in(params.arch), series,
                       relative_std);
  return ctx.continuity_loss(params);
}

double potential_energy(const core::InterconnectTree& tree,
                        const core::ScalingConstants& sc,
                        const bnn::NetParams& params,
                        const ContinuityDataset& data,
                        const bnn::PriorSpec& prior,
                        const analytic::SeriesConfig& series,
                        double relative_std) {
  PotentialContext ctx(tree, sc, data, params.arch, prior, series,
                       relative_std);
  return ctx.potential(params);
}

bnn::NetParams grad_potential(const core::InterconnectTree& tree,
                              const core::ScalingConstants& sc,
                              const bnn::NetParams& params,
                              const ContinuityDataset& data,
                              const bnn::PriorSpec& prior,
                              const analytic::SeriesConfig& series,
                              double relative_std) {
  PotentialContext ctx(tree, sc, data, params.arch, prior, series,
                       relative_std);
  return ctx.gradient(params);
}

}  // namespace empost::bpinn
