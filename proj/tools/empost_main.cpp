// empost: post-void electromigration stress estimation for interconnect
// trees. Subcommands cover the full pipeline: single-segment analytic solves
// with an FDM cross-check, whole-tree FDM, posterior fitting of the
// boundary-flux network, posterior prediction, the Monte-Carlo reference and
// result comparison.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "empost/bpinn/fit.hpp"
#include "empost/bpinn/potential.hpp"
#include "empost/io/results_io.hpp"
#include "empost/io/tree_io.hpp"
#include "empost/stochastic/pipeline.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace empost;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  long long seed_override = -1;
  int threads = 1;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  json j;
  in >> j;
  return j;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j[key].get<T>() : fallback;
}

json section(const json& cfg, const char* name) {
  return cfg.contains(name) ? cfg[name] : json::object();
}

analytic::SeriesConfig series_from(const json& cfg) {
  const json s = section(cfg, "series");
  analytic::SeriesConfig sc;
  sc.p_max = get_or(s, "p_max", 2);
  sc.m_max = get_or(s, "m_max", 5);
  sc.quad_order = get_or(s, "quad_order", 16);
  sc.validate();
  return sc;
}

fdm::FdmConfig fdm_from(const json& cfg, double t_end) {
  const json f = section(cfg, "fdm");
  fdm::FdmConfig fc;
  fc.t_end = t_end;
  fc.dx_target = get_or(f, "dx_target", 0.0);
  fc.dt = get_or(f, "dt", 0.0);
  fc.theta = get_or(f, "theta", 1.0);
  fc.delta = get_or(f, "delta", 1e-9);
  const std::string bc = get_or<std::string>(f, "void_bc", "dirichlet_zero");
  if (bc == "dirichlet_zero") {
    fc.void_bc = fdm::FdmConfig::VoidBc::DirichletZero;
  } else if (bc == "robin_delta") {
    fc.void_bc = fdm::FdmConfig::VoidBc::RobinDelta;
  } else {
    throw std::invalid_argument("config /fdm/void_bc: unknown value " + bc);
  }
  fc.validate();
  return fc;
}

hmc::HmcConfig hmc_from(const json& cfg, long long seed_override) {
  const json h = section(cfg, "hmc");
  hmc::HmcConfig hc;
  hc.step_size = get_or(h, "step_size", 0.05);
  hc.leapfrog_steps = get_or(h, "leapfrog_steps", 20);
  hc.n_samples = get_or(h, "n_samples", 30);
  hc.burn_in = get_or(h, "burn_in", 500);
  hc.tune = get_or(h, "tune", true);
  hc.seed = get_or<std::uint64_t>(h, "seed", 1);
  if (seed_override >= 0) hc.seed = static_cast<std::uint64_t>(seed_override);
  hc.validate();
  return hc;
}

stochastic::CurrentVariationSpec variation_from(
    const json& cfg, const core::InterconnectTree& tree,
    long long seed_override) {
  const json v = section(cfg, "variation");
  auto spec = stochastic::CurrentVariationSpec::from_tree(
      tree, get_or(v, "relative_std", 0.15), get_or(v, "n_samples", 30),
      get_or<std::uint64_t>(v, "seed", 7));
  if (seed_override >= 0) {
    spec.seed = static_cast<std::uint64_t>(seed_override) + 1;
  }
  spec.validate();
  return spec;
}

stochastic::ComparisonGrids grids_from(const json& cfg,
                                       const core::InterconnectTree& tree,
                                       double t_end) {
  const json g = section(cfg, "grids");
  return stochastic::ComparisonGrids::standard(
      tree, t_end, get_or(g, "nx", 30), get_or(g, "nt", 100));
}

double t_end_from(const json& cfg) {
  if (!cfg.contains("t_end")) {
    throw std::invalid_argument("config: t_end missing");
  }
  return cfg["t_end"].get<double>();
}

fs::path out_dir(const json& cfg, const CommonArgs& args) {
  const std::string dir = !args.out_override.empty()
                              ? args.out_override
                              : get_or<std::string>(cfg, "out", "out");
  fs::create_directories(dir);
  return dir;
}

io::TreeFile load_tree_checked(const json& cfg) {
  if (!cfg.contains("tree")) {
    throw std::invalid_argument("config: tree path missing");
  }
  io::TreeFile tf = io::load_tree(cfg["tree"].get<std::string>());
  const auto diag = core::validate_tree(tf.tree);
  if (!diag.ok()) {
    std::string msg = "invalid tree:";
    for (const auto& s : diag.issues) msg += "\n  " + s;
    throw std::invalid_argument(msg);
  }
  return tf;
}

// boundary conditions of an isolated segment, from its two terminal kinds
struct SegmentEnds {
  fdm::SegmentBc minus = fdm::SegmentBc::blocked();
  fdm::SegmentBc plus = fdm::SegmentBc::blocked();
};

SegmentEnds isolated_segment_ends(const core::TreePhysics& ph) {
  SegmentEnds ends;
  const auto& seg = ph.segments[0];
  ends.minus = ph.junctions[seg.jminus].kind == core::JunctionKind::VoidNode
                   ? fdm::SegmentBc::void_end()
                   : fdm::SegmentBc::blocked();
  ends.plus = ph.junctions[seg.jplus].kind == core::JunctionKind::VoidNode
                  ? fdm::SegmentBc::void_end()
                  : fdm::SegmentBc::blocked();
  return ends;
}

int cmd_segment_solve(const CommonArgs& args, bool with_oracle) {
  const json cfg = load_config(args.config_path);
  const io::TreeFile tf = load_tree_checked(cfg);
  if (tf.tree.segments.size() != 1) {
    throw std::invalid_argument("segment-solve: tree must hold one segment");
  }
  const double t_end = t_end_from(cfg);
  const auto series = series_from(cfg);
  const auto grids = grids_from(cfg, tf.tree, t_end);
  const auto ph = core::make_physics(tf.tree);
  const auto& seg = ph.segments[0];
  const auto pr = seg.problem();

  core::StressField analytic_field;
  if (seg.void_end == core::VoidEnd::None) {
    analytic::BoundaryFluxSpec flux;
    flux.phi_minus_0 = -seg.drive;
    flux.phi_plus_0 = -seg.drive;
    analytic_field = analytic::solve_voidless_segment(
        pr, flux, series, grids.x[0], grids.t, seg.id);
  } else {
    analytic::VoidEndFlux nonvoid;
    nonvoid.phi0 = -seg.drive;
    analytic_field = analytic::solve_void_segment(
        pr, seg.void_end, nonvoid, series, grids.x[0], grids.t, seg.id);
  }

  json summary;
  summary["segment_id"] = seg.id;
  core::StressField oracle;
  if (with_oracle) {
    const auto ends = isolated_segment_ends(ph);
    const auto fc = fdm_from(cfg, t_end);
    oracle = fdm::solve_segment_fdm(pr, ends.minus, ends.plus, fc, grids.t,
                                    seg.id);
    double se = 0.0, lo = oracle.values[0], hi = oracle.values[0];
    std::size_t n = 0;
    for (std::size_t i = 0; i < grids.x[0].size(); ++i) {
      for (std::size_t k = 0; k < grids.t.size(); ++k) {
        const double o = oracle.sample(grids.x[0][i], grids.t[k]);
        const double d = analytic_field.at(i, k) - o;
        se += d * d;
        lo = std::min(lo, o);
        hi = std::max(hi, o);
        ++n;
      }
    }
    const double rmse = std::sqrt(se / n);
    const double rel = hi > lo ? rmse / (hi - lo) : 0.0;
    summary["rmse"] = rmse;
    summary["rmse_relative_to_range"] = rel;
    std::printf("RMSE vs FDM oracle: %.6g (%.4f%% of range)\n", rmse,
                100.0 * rel);
  }

  const fs::path dir = out_dir(cfg, args);
  io::write_field_csv({analytic_field}, (dir / "analytic.csv").string());
  if (with_oracle) {
    io::write_field_csv({oracle}, (dir / "fdm.csv").string());
  }
  std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
  std::printf("segment-solve: wrote %s\n", dir.string().c_str());
  return 0;
}

int cmd_tree_fdm(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const io::TreeFile tf = load_tree_checked(cfg);
  const double t_end = t_end_from(cfg);
  const auto fc = fdm_from(cfg, t_end);
  const auto grids = grids_from(cfg, tf.tree, t_end);
  const auto ph = core::make_physics(tf.tree);
  const auto t0 = std::chrono::steady_clock::now();
  const auto fields = fdm::solve_tree_fdm(ph, fc, grids.t);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const fs::path dir = out_dir(cfg, args);
  io::write_field_csv(fields, (dir / "fdm_fields.csv").string());
  json summary = {{"wall_seconds", secs}, {"segments", fields.size()}};
  std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
  std::printf("tree-fdm: wrote %s (%.3fs)\n", dir.string().c_str(), secs);
  return 0;
}

bnn::NetArchitecture arch_from(const json& cfg) {
  const json f = section(cfg, "fit");
  bnn::NetArchitecture arch;
  arch.hidden = get_or(f, "hidden", std::vector<int>{32, 32});
  arch.validate();
  return arch;
}

bpinn::PotentialContext make_context(const json& cfg, const io::TreeFile& tf,
                                     const CommonArgs& args,
                                     const bnn::NetArchitecture& arch) {
  const json f = section(cfg, "fit");
  const double t_end = t_end_from(cfg);
  auto var_spec = variation_from(cfg, tf.tree, args.seed_override);

  stochastic::CurrentVariationSpec train_spec = var_spec;
  train_spec.n_samples = get_or(f, "train_draws", 6);
  train_spec.seed = get_or<std::uint64_t>(f, "train_seed", var_spec.seed + 1);
  if (args.seed_override >= 0) {
    train_spec.seed = static_cast<std::uint64_t>(args.seed_override) + 2;
  }
  auto dataset = bpinn::ContinuityDataset::uniform_times(
      t_end, get_or(f, "eval_times", 20),
      stochastic::sample_currents(train_spec), get_or(f, "var_l", 1e-2));

  return bpinn::PotentialContext(tf.tree, tf.scaling, std::move(dataset), arch,
                                 bnn::PriorSpec::fan_in(arch), series_from(cfg),
                                 var_spec.relative_std);
}

int cmd_bpinn_fit(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const io::TreeFile tf = load_tree_checked(cfg);
  const json f = section(cfg, "fit");
  const auto arch = arch_from(cfg);
  const auto ctx = make_context(cfg, tf, args, arch);

  bpinn::FitConfig fit_cfg;
  fit_cfg.hmc = hmc_from(cfg, args.seed_override);
  fit_cfg.warm_start_iters = get_or(f, "warm_start_iters", 800);
  fit_cfg.warm_start_lr = get_or(f, "warm_start_lr", 0.02);

  const auto init =
      bnn::init_prior(arch, ctx.prior(), fit_cfg.hmc.seed + 17);
  const auto result = bpinn::fit_posterior(ctx, init, fit_cfg);

  std::vector<bnn::NetParams> chain;
  for (const auto& flat : result.chain.samples) {
    chain.push_back(bnn::NetParams::from_flat(arch, flat));
  }
  const fs::path dir = out_dir(cfg, args);
  io::save_chain(chain, arch, result.diagnostics, result.fit_seconds,
                 (dir / "chain.json").string(),
                 (dir / "chain_diag.json").string());
  const auto map_params = bnn::NetParams::from_flat(arch, result.start_point);
  std::printf(
      "bpinn-fit: %zu samples, acceptance %.2f, continuity loss %.3e, "
      "%.1fs -> %s\n",
      chain.size(), result.diagnostics.acceptance_rate,
      ctx.continuity_loss(map_params), result.fit_seconds,
      dir.string().c_str());
  return 0;
}

int cmd_bpinn_predict(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const io::TreeFile tf = load_tree_checked(cfg);
  const double t_end = t_end_from(cfg);
  const json p = section(cfg, "predict");
  const std::string chain_path =
      get_or<std::string>(p, "chain",
                          (fs::path(get_or<std::string>(cfg, "out", "out")) /
                           "chain.json").string());
  const auto chain = io::load_chain(chain_path);
  const auto spec = variation_from(cfg, tf.tree, args.seed_override);
  const auto grids = grids_from(cfg, tf.tree, t_end);
  const std::string pairing_s =
      get_or<std::string>(section(cfg, "variation"), "pairing", "paired");
  const auto pairing = pairing_s == "fixed_mean"
                           ? stochastic::SamplePairing::FixedMeanCurrents
                           : stochastic::SamplePairing::Paired;

  const auto result =
      stochastic::bpinn_estimate(tf.tree, tf.scaling, chain, spec,
                                 series_from(cfg), grids, pairing,
                                 args.threads);
  const fs::path dir = out_dir(cfg, args);
  io::write_result_csv(result, (dir / "result.csv").string());
  io::write_result_summary(result, (dir / "summary.json").string());
  std::printf("bpinn-predict: %d samples in %.3fs -> %s\n",
              result.sample_count, result.wall_seconds, dir.string().c_str());
  return 0;
}

int cmd_mc_reference(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const io::TreeFile tf = load_tree_checked(cfg);
  const double t_end = t_end_from(cfg);
  const auto spec = variation_from(cfg, tf.tree, args.seed_override);
  const auto grids = grids_from(cfg, tf.tree, t_end);
  const auto result = stochastic::mc_reference(tf.tree, spec,
                                               fdm_from(cfg, t_end), grids,
                                               args.threads);
  const fs::path dir = out_dir(cfg, args);
  io::write_result_csv(result, (dir / "result.csv").string());
  io::write_result_summary(result, (dir / "summary.json").string());
  std::printf("mc-reference: %d samples in %.3fs -> %s\n",
              result.sample_count, result.wall_seconds, dir.string().c_str());
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  const json cfg = load_config(args.config_path);
  const json c = section(cfg, "compare");
  if (!c.contains("a") || !c.contains("b")) {
    throw std::invalid_argument("config: compare.a and compare.b required");
  }
  const fs::path dir_a = c["a"].get<std::string>();
  const fs::path dir_b = c["b"].get<std::string>();
  const auto a = io::read_result_csv((dir_a / "result.csv").string());
  const auto b = io::read_result_csv((dir_b / "result.csv").string());
  const auto rmse = stochastic::rmse_compare(a, b);
  json out = {{"rmse_mean", rmse.rmse_mean},
              {"rmse_std", rmse.rmse_std},
              {"combined", rmse.combined},
              {"wall_seconds_a",
               io::read_summary_wall_seconds((dir_a / "summary.json").string())},
              {"wall_seconds_b",
               io::read_summary_wall_seconds((dir_b / "summary.json").string())}};
  const fs::path dir = out_dir(cfg, args);
  std::ofstream(dir / "compare.json") << out.dump(2) << "\n";
  std::printf("compare: rmse_mean=%.6g rmse_std=%.6g combined=%.6g\n",
              rmse.rmse_mean, rmse.rmse_std, rmse.combined);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"post-void EM stress estimation for interconnect trees"};
  app.require_subcommand(1);

  CommonArgs args;
  bool with_oracle = false;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "run configuration JSON")
        ->required();
    cmd->add_option("--seed", args.seed_override, "override RNG seeds");
    cmd->add_option("--threads", args.threads, "worker threads");
    cmd->add_option("--out", args.out_override, "output directory");
  };

  auto* seg = app.add_subcommand("segment-solve",
                                 "analytic single-segment stress field");
  add_common(seg);
  seg->add_flag("--with-oracle", with_oracle, "also run the FDM oracle");
  auto* tree = app.add_subcommand("tree-fdm", "deterministic FDM tree solve");
  add_common(tree);
  auto* fit = app.add_subcommand("bpinn-fit", "sample the flux posterior");
  add_common(fit);
  auto* pred = app.add_subcommand("bpinn-predict",
                                  "stress variations from a chain");
  add_common(pred);
  auto* mc = app.add_subcommand("mc-reference", "FDM Monte-Carlo reference");
  add_common(mc);
  auto* cmp = app.add_subcommand("compare", "RMSE between two result sets");
  add_common(cmp);

  CLI11_PARSE(app, argc, argv);

  try {
    if (seg->parsed()) return cmd_segment_solve(args, with_oracle);
    if (tree->parsed()) return cmd_tree_fdm(args);
    if (fit->parsed()) return cmd_bpinn_fit(args);
    if (pred->parsed()) return cmd_bpinn_predict(args);
    if (mc->parsed()) return cmd_mc_reference(args);
    if (cmp->parsed()) return cmd_compare(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
