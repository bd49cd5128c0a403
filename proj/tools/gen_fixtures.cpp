// Regenerates the bundled fixture trees and run configurations under data/.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "empost/fixtures.hpp"
#include "empost/io/tree_io.hpp"

using namespace empost;
namespace fs = std::filesystem;
using nlohmann::json;

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? argv[1] : "data";
  fs::create_directories(root / "fixtures");
  fs::create_directories(root / "configs");

  auto save = [&](const core::InterconnectTree& tree, const char* name) {
    io::TreeFile tf;
    tf.tree = tree;
    tf.scaling = core::ScalingConstants{};
    io::save_tree(tf, (root / "fixtures" / name).string());
    std::cout << "wrote fixtures/" << name << "\n";
  };

  save(fixtures::single_voidless(
           2.5e-5, 2.0e9,
           core::InitialStressProfile::make_cosine(1.5e8, 0.9e8, 1.0)),
       "single_voidless.json");
  save(fixtures::single_void(
           2.0e-5, 1.6e9, core::VoidEnd::AtPlus,
           core::InitialStressProfile::make_cosine(0.0, 3.5e8, 0.5)),
       "single_void.json");
  save(fixtures::chain({2.0e-5, 2.8e-5, 1.6e-5}, {1.8e9, -1.2e9, 2.1e9},
                       3.8e8, true),
       "three_segment.json");
  save(fixtures::ten_segment(), "ten_segment.json");

  const json base = {
      {"t_end", 1e8},
      {"series", {{"p_max", 2}, {"m_max", 5}, {"quad_order", 16}}},
      {"fdm", {{"theta", 1.0}, {"void_bc", "dirichlet_zero"}}},
      {"grids", {{"nx", 30}, {"nt", 100}}},
  };

  {
    json cfg = base;
    cfg["tree"] = "data/fixtures/single_voidless.json";
    cfg["out"] = "out/single_voidless";
    std::ofstream(root / "configs" / "single_voidless.json") << cfg.dump(2)
                                                             << "\n";
  }
  {
    json cfg = base;
    cfg["tree"] = "data/fixtures/single_void.json";
    cfg["out"] = "out/single_void";
    std::ofstream(root / "configs" / "single_void.json") << cfg.dump(2)
                                                         << "\n";
  }
  {
    json cfg = base;
    cfg["tree"] = "data/fixtures/ten_segment.json";
    cfg["out"] = "out/ten_segment";
    cfg["variation"] = {{"relative_std", 0.15},
                        {"n_samples", 30},
                        {"seed", 7},
                        {"pairing", "paired"}};
    cfg["fit"] = {{"hidden", {32, 32}},   {"train_draws", 6},
                  {"train_seed", 99},     {"eval_times", 20},
                  {"var_l", 1e-4},        {"warm_start_iters", 1500},
                  {"warm_start_lr", 0.02}};
    cfg["hmc"] = {{"step_size", 0.02}, {"leapfrog_steps", 20},
                  {"n_samples", 30},   {"burn_in", 300},
                  {"tune", true},      {"seed", 1}};
    std::ofstream(root / "configs" / "ten_segment.json") << cfg.dump(2)
                                                         << "\n";
  }
  {
    // small variant for smoke tests: coarse grids, short chain
    json cfg = base;
    cfg["tree"] = "data/fixtures/three_segment.json";
    cfg["out"] = "out/three_segment";
    cfg["grids"] = {{"nx", 12}, {"nt", 20}};
    cfg["variation"] = {{"relative_std", 0.15},
                        {"n_samples", 8},
                        {"seed", 7},
                        {"pairing", "paired"}};
    cfg["fit"] = {{"hidden", {16, 16}},  {"train_draws", 3},
                  {"train_seed", 99},    {"eval_times", 10},
                  {"var_l", 1e-4},       {"warm_start_iters", 400},
                  {"warm_start_lr", 0.02}};
    cfg["hmc"] = {{"step_size", 0.02}, {"leapfrog_steps", 10},
                  {"n_samples", 8},    {"burn_in", 100},
                  {"tune", true},      {"seed", 1}};
    cfg["fdm"] = {{"theta", 1.0},
                  {"void_bc", "dirichlet_zero"},
                  {"dt", 2.5e5}};
    std::ofstream(root / "configs" / "three_segment.json") << cfg.dump(2)
                                                           << "\n";
  }
  std::cout << "wrote configs\n";
  return 0;
}
