#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "empost/fixtures.hpp"
#include "empost/io/results_io.hpp"
#include "empost/io/tree_io.hpp"

using namespace empost;

TEST_CASE("tree json round trip") {
  io::TreeFile tf;
  tf.tree = fixtures::ten_segment();
  tf.scaling = core::ScalingConstants{};
  const std::string text = io::serialize_tree(tf);
  const io::TreeFile back = io::parse_tree(text);

  CHECK(core::validate_tree(back.tree).ok());
  REQUIRE(back.tree.segments.size() == tf.tree.segments.size());
  REQUIRE(back.tree.junctions.size() == tf.tree.junctions.size());
  for (std::size_t i = 0; i < tf.tree.segments.size(); ++i) {
    const auto& a = tf.tree.segments[i];
    const auto& b = back.tree.segments[i];
    CHECK(a.id == b.id);
    CHECK(a.length == b.length);
    CHECK(a.current_density == b.current_density);
    CHECK(a.void_end == b.void_end);
    CHECK(a.initial_stress.kind == b.initial_stress.kind);
    for (double x : {0.0, 0.4 * a.length, a.length}) {
      CHECK(a.initial_stress.value(x, a.length) ==
            doctest::Approx(b.initial_stress.value(x, b.length))
                .epsilon(1e-14));
    }
  }
  CHECK(back.tree.material.temperature ==
        doctest::Approx(tf.tree.material.temperature));
  CHECK(back.scaling.k_x == tf.scaling.k_x);
}

TEST_CASE("parse errors carry a pointer path") {
  const char* missing_length = R"({
    "material": {"e_charge": 1.6e-19, "rho": 2.2e-8, "z_star": 10,
                 "omega_atomic": 8.78e-30, "bulk_modulus_B": 1e11,
                 "d0": 5.2e-5, "ea": 1.1, "k_boltzmann": 1.380649e-23,
                 "temperature": 345.0, "sigma_crit": 5e8},
    "junctions": [{"id": "a", "kind": "blocked_terminal", "slots": {"R": "s1"}},
                   {"id": "b", "kind": "blocked_terminal", "slots": {"L": "s1"}}],
    "segments": [{"id": "s1", "node_minus": "a", "node_plus": "b",
                  "width": 1e-6, "current_density": 1e9,
                  "orientation": "horizontal",
                  "initial_stress": {"kind": "constant", "value": 0.0}}]
  })";
  try {
    io::parse_tree(missing_length);
    FAIL("expected a parse failure");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("/segments/0/length") != std::string::npos);
  }
}

TEST_CASE("params and chain round trip") {
  bnn::NetArchitecture arch;
  arch.hidden = {6, 4};
  const auto prior = bnn::PriorSpec::fan_in(arch);
  const auto p = bnn::init_prior(arch, prior, 99);
  const auto q = io::parse_params(io::serialize_params(p));
  CHECK(q.arch == p.arch);
  CHECK((q.to_flat() - p.to_flat()).norm() == 0.0);

  const auto dir = std::filesystem::temp_directory_path() / "empost_io_test";
  std::filesystem::create_directories(dir);
  std::vector<bnn::NetParams> chain;
  for (int i = 0; i < 4; ++i) chain.push_back(bnn::init_prior(arch, prior, i));
  hmc::HmcDiagnostics diag;
  diag.acceptance_rate = 0.82;
  diag.tuned_step_size = 0.07;
  io::save_chain(chain, arch, diag, 12.5, (dir / "chain.json").string(),
                 (dir / "diag.json").string());
  const auto back = io::load_chain((dir / "chain.json").string());
  REQUIRE(back.size() == chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    CHECK((back[i].to_flat() - chain[i].to_flat()).norm() == 0.0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("result csv round trip") {
  stochastic::VariationalResult r;
  for (int s = 0; s < 2; ++s) {
    auto f = core::StressField::zeros("seg" + std::to_string(s),
                                      {0.0, 1e-5, 2e-5}, {1e6, 2e6, 3e6, 4e6});
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      f.values[i] = 1.23456789012345e8 / (1.0 + i) * (s + 1);
    }
    r.mean_fields.push_back(f);
    for (auto& v : f.values) v = std::abs(v) * 1e-3;
    r.std_fields.push_back(f);
  }
  r.sample_count = 7;
  r.provenance = "fdm_mc";
  r.wall_seconds = 3.25;

  const auto dir = std::filesystem::temp_directory_path() / "empost_csv_test";
  std::filesystem::create_directories(dir);
  io::write_result_csv(r, (dir / "result.csv").string());
  io::write_result_summary(r, (dir / "summary.json").string());
  const auto back = io::read_result_csv((dir / "result.csv").string());
  REQUIRE(back.mean_fields.size() == 2);
  for (int s = 0; s < 2; ++s) {
    CHECK(back.mean_fields[s].x_grid == r.mean_fields[s].x_grid);
    CHECK(back.mean_fields[s].t_grid == r.mean_fields[s].t_grid);
    CHECK(back.mean_fields[s].values == r.mean_fields[s].values);
    CHECK(back.std_fields[s].values == r.std_fields[s].values);
  }
  CHECK(io::read_summary_wall_seconds((dir / "summary.json").string()) ==
        doctest::Approx(3.25));
  std::filesystem::remove_all(dir);
}
