#pragma once

#include <string>

#include "empost/bnn/network.hpp"
#include "empost/core/scaling.hpp"
#include "empost/core/tree.hpp"
#include "empost/hmc/sampler.hpp"

namespace empost::io {

// On-disk tree description: one JSON document with top-level keys
// `material`, `junctions`, `segments`, `scaling`. SI units. See
// docs/tree_schema.json.
struct TreeFile {
  core::InterconnectTree tree;
  core::ScalingConstants scaling;
};

TreeFile load_tree(const std::string& path);
TreeFile parse_tree(const std::string& json_text);
std::string serialize_tree(const TreeFile& doc);
void save_tree(const TreeFile& doc, const std::string& path);

// Parameter snapshots: {"architecture": {...}, "values": [...]} with values
// flattened per layer, weight row-major then bias, input to output.
std::string serialize_params(const bnn::NetParams& params);
bnn::NetParams parse_params(const std::string& json_text);

// Chain persistence: {"architecture": ..., "samples": [[...], ...]} plus a
// JSON diagnostics sidecar.
void save_chain(const std::vector<bnn::NetParams>& chain,
                const bnn::NetArchitecture& arch,
                const hmc::HmcDiagnostics& diag, double fit_seconds,
                const std::string& chain_path, const std::string& diag_path);
std::vector<bnn::NetParams> load_chain(const std::string& chain_path);

}  // namespace empost::io
