#include "empost/stochastic/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "empost/bpinn/assembly.hpp"
#include "empost/bpinn/stress_map.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace empost::stochastic {

namespace {

core::StressField resample_x(const core::StressField& f,
                             const std::vector<double>& xs) {
  auto out = core::StressField::zeros(f.segment_id, xs, f.t_grid);
  out.scaled = f.scaled;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t k = 0; k < f.nt(); ++k) {
      out.at(i, k) = f.sample(xs[i], f.t_grid[k]);
    }
  }
  return out;
}

struct Accumulator {
  std::vector<core::StressField> sum, sumsq;

  void init(const std::vector<core::StressField>& like) {
    for (const auto& f : like) {
      auto z = core::StressField::zeros(f.segment_id, f.x_grid, f.t_grid);
      z.scaled = f.scaled;
      sum.push_back(z);
      sumsq.push_back(std::move(z));
    }
  }
  void add(const std::vector<core::StressField>& fields) {
    for (std::size_t s = 0; s < fields.size(); ++s) {
      for (std::size_t i = 0; i < fields[s].values.size(); ++i) {
        sum[s].values[i] += fields[s].values[i];
        sumsq[s].values[i] += fields[s].values[i] * fields[s].values[i];
      }
    }
  }
  void finish(int n, VariationalResult& out) {
    for (std::size_t s = 0; s < sum.size(); ++s) {
      core::StressField mean = sum[s];
      core::StressField sd = sum[s];
      for (std::size_t i = 0; i < mean.values.size(); ++i) {
        const double m = sum[s].values[i] / n;
        mean.values[i] = m;
        sd.values[i] = std::sqrt(std::max(0.0, sumsq[s].values[i] / n - m * m));
      }
      out.mean_fields.push_back(std::move(mean));
      out.std_fields.push_back(std::move(sd));
    }
    out.sample_count = n;
  }
};

int clamp_threads(int threads) {
#if defined(_OPENMP)
  return threads > 0 ? threads : 1;
#else
  (void)threads;
  return 1;
#endif
}

}  // namespace

CurrentVariationSpec CurrentVariationSpec::from_tree(
    const core::InterconnectTree& tree, double relative_std, int n_samples,
    std::uint64_t seed) {
  CurrentVariationSpec spec;
  for (const auto& s : tree.segments) spec.mean_j.push_back(s.current_density);
  spec.relative_std = relative_std;
  spec.n_samples = n_samples;
  spec.seed = seed;
  return spec;
}

void CurrentVariationSpec::validate() const {
  if (mean_j.empty()) {
    throw std::invalid_argument("CurrentVariationSpec: empty mean vector");
  }
  if (relative_std < 0.0) {
    throw std::invalid_argument("CurrentVariationSpec: relative_std >= 0");
  }
  if (n_samples < 1) {
    throw std::invalid_argument("CurrentVariationSpec: n_samples >= 1");
  }
}

std::vector<std::vector<double>> sample_currents(
    const CurrentVariationSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> draws(spec.n_samples);
  for (auto& draw : draws) {
    draw.resize(spec.mean_j.size());
    for (std::size_t s = 0; s < spec.mean_j.size(); ++s) {
      draw[s] = spec.mean_j[s] +
                spec.relative_std * std::abs(spec.mean_j[s]) * normal(rng);
    }
  }
  return draws;
}

ComparisonGrids ComparisonGrids::standard(const core::InterconnectTree& tree,
                                          double t_end, int nx, int nt) {
  if (nx < 2 || nt < 1 || !(t_end > 0.0)) {
    throw std::invalid_argument("ComparisonGrids: bad grid spec");
  }
  ComparisonGrids g;
  for (const auto& s : tree.segments) {
    std::vector<double> xs(nx);
    for (int i = 0; i < nx; ++i) xs[i] = s.length * i / (nx - 1);
    g.x.push_back(std::move(xs));
  }
  g.t.resize(nt);
  for (int k = 0; k < nt; ++k) g.t[k] = t_end * (k + 1) / nt;
  return g;
}

VariationalResult mc_reference(const core::InterconnectTree& tree,
                               const CurrentVariationSpec& spec,
                               const fdm::FdmConfig& cfg,
                               const ComparisonGrids& grids, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  if (spec.mean_j.size() != tree.segments.size()) {
    throw std::invalid_argument("mc_reference: spec segment count mismatch");
  }
  const auto draws = sample_currents(spec);
  std::vector<std::vector<core::StressField>> per_sample(draws.size());
  std::exception_ptr failure;

  const int nthreads = clamp_threads(threads);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
  for (int i = 0; i < static_cast<int>(draws.size()); ++i) {
    try {
      const auto physics = core::make_physics(tree, draws[i]);
      auto fields = fdm::solve_tree_fdm(physics, cfg, grids.t);
      std::vector<core::StressField> resampled;
      for (std::size_t s = 0; s < fields.size(); ++s) {
        resampled.push_back(resample_x(fields[s], grids.x[s]));
      }
      per_sample[i] = std::move(resampled);
    } catch (...) {
#if defined(_OPENMP)
#pragma omp critical
#endif
      {
        if (!failure) {
          try {
            std::throw_with_nested(std::runtime_error(
                "mc_reference: sample " + std::to_string(i) + " failed"));
          } catch (...) {
            failure = std::current_exception();
          }
        }
      }
    }
  }
  (void)nthreads;
  if (failure) std::rethrow_exception(failure);

  VariationalResult out;
  Accumulator acc;
  acc.init(per_sample[0]);
  for (const auto& fields : per_sample) acc.add(fields);
  acc.finish(static_cast<int>(draws.size()), out);
  out.provenance = "fdm_mc";
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

VariationalResult bpinn_estimate(const core::InterconnectTree& tree,
                                 const core::ScalingConstants& sc,
                                 const std::vector<bnn::NetParams>& chain,
                                 const CurrentVariationSpec& spec,
                                 const analytic::SeriesConfig& series,
                                 const ComparisonGrids& grids,
                                 SamplePairing pairing, int threads,
                                 double rate_gain) {
  const auto t0 = std::chrono::steady_clock::now();
  if (chain.empty()) {
    throw std::invalid_argument("bpinn_estimate: empty chain");
  }
  if (spec.mean_j.size() != tree.segments.size()) {
    throw std::invalid_argument("bpinn_estimate: spec segment count mismatch");
  }
  const int m = static_cast<int>(chain.size());

  const auto physics = core::make_physics(tree);
  const auto physics_sc = core::scale_problem(physics, sc);
  const auto norm = bpinn::InputNormalizer::make(
      tree, sc, grids.t.back(), spec.relative_std, rate_gain);

  std::vector<std::vector<double>> x_sc;
  for (std::size_t s = 0; s < grids.x.size(); ++s) {
    x_sc.push_back(core::scale_x_grid(grids.x[s], sc));
  }
  const auto map = bpinn::TreeStressMap::build(
      physics_sc, std::move(x_sc), core::scale_t_grid(grids.t, sc), series,
      norm.rate_scale);

  // one current draw per posterior sample
  CurrentVariationSpec draw_spec = spec;
  draw_spec.n_samples = m;
  if (pairing == SamplePairing::FixedMeanCurrents) draw_spec.relative_std = 0.0;
  const auto draws = sample_currents(draw_spec);

  const auto interior = physics_sc.interior_junctions();
  // inputs vary over nodes only through the time row; currents are constant
  // per draw, so prebuild the node-time row and patch rows 1..4 per sample
  Eigen::RowVectorXd time_row(map.node_count());
  for (int n = 0; n < map.node_count(); ++n) {
    time_row[n] = map.node_times()[n] / norm.t_sc_end;
  }
  std::vector<std::vector<core::StressField>> per_sample(m);
  std::exception_ptr failure;
  const int nthreads = clamp_threads(threads);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
  for (int i = 0; i < m; ++i) {
    try {
      std::vector<Eigen::MatrixXd> outputs(physics_sc.junctions.size());
      Eigen::MatrixXd X(5, map.node_count());
      X.row(0) = time_row;
      for (int j : interior) {
        const auto& jn = physics_sc.junctions[j];
        const core::Direction order[4] = {
            core::Direction::Left, core::Direction::Up, core::Direction::Right,
            core::Direction::Down};
        for (int r = 0; r < 4; ++r) {
          const int s = jn.segment(order[r]);
          X.row(1 + r).setConstant(
              s >= 0 ? norm.normalized_current(s, draws[i][s]) : 0.0);
        }
        outputs[j] = bnn::forward_batch(chain[i], X);
      }
      std::vector<double> term_phi0;
      for (const auto& term : map.terminals()) {
        term_phi0.push_back(
            -sc.drive_factor() *
            core::drive_force(draws[i][term.segment], tree.material));
      }
      per_sample[i] = map.evaluate(outputs, term_phi0);
    } catch (...) {
#if defined(_OPENMP)
#pragma omp critical
#endif
      {
        if (!failure) failure = std::current_exception();
      }
    }
  }
  (void)nthreads;
  if (failure) std::rethrow_exception(failure);

  VariationalResult scaled_out;
  Accumulator acc;
  acc.init(per_sample[0]);
  for (const auto& fields : per_sample) acc.add(fields);
  acc.finish(m, scaled_out);

  VariationalResult out;
  for (auto& f : scaled_out.mean_fields) {
    f.scaled = true;
    out.mean_fields.push_back(core::unscale_stress(f, sc));
  }
  for (auto& f : scaled_out.std_fields) {
    f.scaled = true;
    out.std_fields.push_back(core::unscale_stress(f, sc));
  }
  out.sample_count = m;
  out.provenance = "bpinn";
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

double stress_range(const VariationalResult& r) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& f : r.mean_fields) {
    for (double v : f.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return hi - lo;
}

RmseSummary rmse_compare(const VariationalResult& a,
                         const VariationalResult& b) {
  if (a.mean_fields.size() != b.mean_fields.size()) {
    throw std::invalid_argument("rmse_compare: segment count mismatch");
  }
  double se_mean = 0.0, se_std = 0.0;
  std::size_t n = 0;
  for (std::size_t s = 0; s < a.mean_fields.size(); ++s) {
    const auto& fa = a.mean_fields[s];
    const auto& fb = b.mean_fields[s];
    if (fa.nx() != fb.nx() || fa.nt() != fb.nt()) {
      throw std::invalid_argument("rmse_compare: grid mismatch");
    }
    for (std::size_t i = 0; i < fa.x_grid.size(); ++i) {
      const double tol = 1e-9 * std::max(1.0, std::abs(fa.x_grid[i]));
      if (std::abs(fa.x_grid[i] - fb.x_grid[i]) > tol) {
        throw std::invalid_argument("rmse_compare: x grid mismatch");
      }
    }
    for (std::size_t k = 0; k < fa.t_grid.size(); ++k) {
      const double tol = 1e-9 * std::max(1.0, std::abs(fa.t_grid[k]));
      if (std::abs(fa.t_grid[k] - fb.t_grid[k]) > tol) {
        throw std::invalid_argument("rmse_compare: t grid mismatch");
      }
    }
    const auto& sa = a.std_fields[s];
    const auto& sb = b.std_fields[s];
    for (std::size_t i = 0; i < fa.values.size(); ++i) {
      const double dm = fa.values[i] - fb.values[i];
      const double ds = sa.values[i] - sb.values[i];
      se_mean += dm * dm;
      se_std += ds * ds;
      ++n;
    }
  }
  RmseSummary r;
  r.rmse_mean = std::sqrt(se_mean / n);
  r.rmse_std = std::sqrt(se_std / n);
  r.combined = 0.5 * (r.rmse_mean + r.rmse_std);
  return r;
}

}  // namespace empost::stochastic
