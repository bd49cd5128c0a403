#include "empost/io/tree_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace empost::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw std::invalid_argument("tree file: " + pointer + ": " + what);
}

double num_at(const json& j, const std::string& pointer, const char* key) {
  if (!j.contains(key)) fail(pointer + "/" + key, "missing");
  if (!j[key].is_number()) fail(pointer + "/" + key, "expected a number");
  return j[key].get<double>();
}

std::string str_at(const json& j, const std::string& pointer,
                   const char* key) {
  if (!j.contains(key)) fail(pointer + "/" + key, "missing");
  if (!j[key].is_string()) fail(pointer + "/" + key, "expected a string");
  return j[key].get<std::string>();
}

core::InitialStressProfile parse_profile(const json& j,
                                         const std::string& pointer) {
  const std::string kind = str_at(j, pointer, "kind");
  if (kind == "constant") {
    return core::InitialStressProfile::make_constant(
        num_at(j, pointer, "value"));
  }
  if (kind == "piecewise_linear") {
    if (!j.contains("knots") || !j["knots"].is_array()) {
      fail(pointer + "/knots", "expected an array of [x, sigma] pairs");
    }
    std::vector<std::pair<double, double>> knots;
    for (std::size_t i = 0; i < j["knots"].size(); ++i) {
      const auto& k = j["knots"][i];
      if (!k.is_array() || k.size() != 2) {
        fail(pointer + "/knots/" + std::to_string(i), "expected [x, sigma]");
      }
      knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    }
    return core::InitialStressProfile::make_piecewise(std::move(knots));
  }
  if (kind == "cosine_mode") {
    return core::InitialStressProfile::make_cosine(
        num_at(j, pointer, "offset"), num_at(j, pointer, "amplitude"),
        num_at(j, pointer, "frequency"),
        j.contains("phase") ? j["phase"].get<double>() : 0.0);
  }
  fail(pointer + "/kind", "unknown profile kind '" + kind + "'");
}

json profile_json(const core::InitialStressProfile& h) {
  json j;
  switch (h.kind) {
    case core::InitialStressProfile::Kind::Constant:
      j["kind"] = "constant";
      j["value"] = h.constant_value;
      break;
    case core::InitialStressProfile::Kind::PiecewiseLinear: {
      j["kind"] = "piecewise_linear";
      json knots = json::array();
      for (const auto& [x, y] : h.knots) knots.push_back({x, y});
      j["knots"] = std::move(knots);
      break;
    }
    case core::InitialStressProfile::Kind::CosineMode:
      j["kind"] = "cosine_mode";
      j["offset"] = h.offset;
      j["amplitude"] = h.amplitude;
      j["frequency"] = h.frequency;
      j["phase"] = h.phase;
      break;
  }
  return j;
}

}  // namespace

TreeFile parse_tree(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("tree file: ") + e.what());
  }
  TreeFile tf;

  if (!doc.contains("material")) fail("/material", "missing");
  {
    const json& m = doc["material"];
    core::MaterialParams& mat = tf.tree.material;
    mat.e_charge = num_at(m, "/material", "e_charge");
    mat.rho = num_at(m, "/material", "rho");
    mat.z_star = num_at(m, "/material", "z_star");
    mat.omega_atomic = num_at(m, "/material", "omega_atomic");
    mat.bulk_modulus = num_at(m, "/material", "bulk_modulus_B");
    mat.d0 = num_at(m, "/material", "d0");
    mat.ea_ev = num_at(m, "/material", "ea");
    mat.k_boltzmann = num_at(m, "/material", "k_boltzmann");
    mat.temperature = num_at(m, "/material", "temperature");
    mat.sigma_crit = num_at(m, "/material", "sigma_crit");
    if (m.contains("delta_void")) {
      mat.delta_void = m["delta_void"].get<double>();
    }
  }

  if (!doc.contains("junctions") || !doc["junctions"].is_array()) {
    fail("/junctions", "missing array");
  }
  for (std::size_t i = 0; i < doc["junctions"].size(); ++i) {
    const std::string ptr = "/junctions/" + std::to_string(i);
    const json& jj = doc["junctions"][i];
    core::Junction jn;
    jn.id = str_at(jj, ptr, "id");
    const std::string kind = str_at(jj, ptr, "kind");
    if (kind == "interior") {
      jn.kind = core::JunctionKind::Interior;
    } else if (kind == "blocked_terminal") {
      jn.kind = core::JunctionKind::BlockedTerminal;
    } else if (kind == "void_node") {
      jn.kind = core::JunctionKind::VoidNode;
    } else {
      fail(ptr + "/kind", "unknown junction kind '" + kind + "'");
    }
    if (jj.contains("slots")) {
      const json& slots = jj["slots"];
      const std::pair<const char*, core::Direction> names[] = {
          {"L", core::Direction::Left},
          {"U", core::Direction::Up},
          {"R", core::Direction::Right},
          {"D", core::Direction::Down}};
      for (const auto& [name, dir] : names) {
        if (slots.contains(name)) {
          jn.slot(dir) = slots[name].get<std::string>();
        }
      }
    }
    tf.tree.junctions.push_back(std::move(jn));
  }

  if (!doc.contains("segments") || !doc["segments"].is_array()) {
    fail("/segments", "missing array");
  }
  for (std::size_t i = 0; i < doc["segments"].size(); ++i) {
    const std::string ptr = "/segments/" + std::to_string(i);
    const json& js = doc["segments"][i];
    core::Segment s;
    s.id = str_at(js, ptr, "id");
    s.node_minus = str_at(js, ptr, "node_minus");
    s.node_plus = str_at(js, ptr, "node_plus");
    s.length = num_at(js, ptr, "length");
    s.width = num_at(js, ptr, "width");
    s.current_density = num_at(js, ptr, "current_density");
    const std::string orient = str_at(js, ptr, "orientation");
    if (orient == "horizontal") {
      s.orientation = core::Orientation::Horizontal;
    } else if (orient == "vertical") {
      s.orientation = core::Orientation::Vertical;
    } else {
      fail(ptr + "/orientation", "expected horizontal|vertical");
    }
    const std::string ve = js.contains("void_end")
                               ? js["void_end"].get<std::string>()
                               : "none";
    if (ve == "none") {
      s.void_end = core::VoidEnd::None;
    } else if (ve == "at_minus") {
      s.void_end = core::VoidEnd::AtMinus;
    } else if (ve == "at_plus") {
      s.void_end = core::VoidEnd::AtPlus;
    } else {
      fail(ptr + "/void_end", "expected none|at_minus|at_plus");
    }
    if (!js.contains("initial_stress")) fail(ptr + "/initial_stress", "missing");
    s.initial_stress = parse_profile(js["initial_stress"],
                                     ptr + "/initial_stress");
    tf.tree.segments.push_back(std::move(s));
  }

  if (doc.contains("scaling")) {
    const json& sc = doc["scaling"];
    tf.scaling.k_x = num_at(sc, "/scaling", "k_x");
    tf.scaling.k_t = num_at(sc, "/scaling", "k_t");
    tf.scaling.k_sigma = num_at(sc, "/scaling", "k_sigma");
  }
  return tf;
}

TreeFile load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tree file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tree(buf.str());
}

std::string serialize_tree(const TreeFile& tf) {
  json doc;
  const core::MaterialParams& m = tf.tree.material;
  doc["material"] = {
      {"e_charge", m.e_charge},       {"rho", m.rho},
      {"z_star", m.z_star},           {"omega_atomic", m.omega_atomic},
      {"bulk_modulus_B", m.bulk_modulus}, {"d0", m.d0},
      {"ea", m.ea_ev},                {"k_boltzmann", m.k_boltzmann},
      {"temperature", m.temperature}, {"sigma_crit", m.sigma_crit},
      {"delta_void", m.delta_void}};
  doc["junctions"] = json::array();
  for (const auto& jn : tf.tree.junctions) {
    json jj;
    jj["id"] = jn.id;
    switch (jn.kind) {
      case core::JunctionKind::Interior: jj["kind"] = "interior"; break;
      case core::JunctionKind::BlockedTerminal:
        jj["kind"] = "blocked_terminal";
        break;
      case core::JunctionKind::VoidNode: jj["kind"] = "void_node"; break;
    }
    json slots;
    const std::pair<const char*, core::Direction> names[] = {
        {"L", core::Direction::Left},
        {"U", core::Direction::Up},
        {"R", core::Direction::Right},
        {"D", core::Direction::Down}};
    for (const auto& [name, dir] : names) {
      if (jn.slot(dir).has_value()) slots[name] = *jn.slot(dir);
    }
    jj["slots"] = std::move(slots);
    doc["junctions"].push_back(std::move(jj));
  }
  doc["segments"] = json::array();
  for (const auto& s : tf.tree.segments) {
    json js;
    js["id"] = s.id;
    js["node_minus"] = s.node_minus;
    js["node_plus"] = s.node_plus;
    js["length"] = s.length;
    js["width"] = s.width;
    js["current_density"] = s.current_density;
    js["orientation"] =
        s.orientation == core::Orientation::Horizontal ? "horizontal"
                                                       : "vertical";
    switch (s.void_end) {
      case core::VoidEnd::None: js["void_end"] = "none"; break;
      case core::VoidEnd::AtMinus: js["void_end"] = "at_minus"; break;
      case core::VoidEnd::AtPlus: js["void_end"] = "at_plus"; break;
    }
    js["initial_stress"] = profile_json(s.initial_stress);
    doc["segments"].push_back(std::move(js));
  }
  doc["scaling"] = {{"k_x", tf.scaling.k_x},
                    {"k_t", tf.scaling.k_t},
                    {"k_sigma", tf.scaling.k_sigma}};
  return doc.dump(2);
}

void save_tree(const TreeFile& tf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write tree file: " + path);
  out << serialize_tree(tf) << "\n";
}

namespace {
json arch_json(const bnn::NetArchitecture& arch) {
  return {{"input_dim", arch.input_dim},
          {"hidden", arch.hidden},
          {"output_dim", arch.output_dim},
          {"activation", "tanh"}};
}

bnn::NetArchitecture parse_arch(const json& j) {
  bnn::NetArchitecture arch;
  arch.input_dim = j.at("input_dim").get<int>();
  arch.hidden = j.at("hidden").get<std::vector<int>>();
  arch.output_dim = j.at("output_dim").get<int>();
  arch.validate();
  return arch;
}
}  // namespace

std::string serialize_params(const bnn::NetParams& params) {
  json doc;
  doc["architecture"] = arch_json(params.arch);
  const Eigen::VectorXd flat = params.to_flat();
  doc["values"] = std::vector<double>(flat.data(), flat.data() + flat.size());
  return doc.dump();
}

bnn::NetParams parse_params(const std::string& json_text) {
  const json doc = json::parse(json_text);
  const bnn::NetArchitecture arch = parse_arch(doc.at("architecture"));
  const auto values = doc.at("values").get<std::vector<double>>();
  Eigen::VectorXd flat(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) flat[i] = values[i];
  return bnn::NetParams::from_flat(arch, flat);
}

void save_chain(const std::vector<bnn::NetParams>& chain,
                const bnn::NetArchitecture& arch,
                const hmc::HmcDiagnostics& diag, double fit_seconds,
                const std::string& chain_path, const std::string& diag_path) {
  json doc;
  doc["architecture"] = arch_json(arch);
  json samples = json::array();
  for (const auto& p : chain) {
    const Eigen::VectorXd flat = p.to_flat();
    samples.push_back(
        std::vector<double>(flat.data(), flat.data() + flat.size()));
  }
  doc["samples"] = std::move(samples);
  std::ofstream out(chain_path);
  if (!out) throw std::runtime_error("cannot write chain: " + chain_path);
  out << doc.dump() << "\n";

  json dj = {{"acceptance_rate", diag.acceptance_rate},
             {"mean_abs_dh", diag.mean_abs_dh},
             {"tuned_step_size", diag.tuned_step_size},
             {"divergences", diag.divergences},
             {"fit_seconds", fit_seconds}};
  std::ofstream dout(diag_path);
  if (!dout) throw std::runtime_error("cannot write diagnostics: " + diag_path);
  dout << dj.dump(2) << "\n";
}

std::vector<bnn::NetParams> load_chain(const std::string& chain_path) {
  std::ifstream in(chain_path);
  if (!in) throw std::invalid_argument("cannot open chain: " + chain_path);
  json doc;
  in >> doc;
  const bnn::NetArchitecture arch = parse_arch(doc.at("architecture"));
  std::vector<bnn::NetParams> chain;
  for (const auto& sample : doc.at("samples")) {
    const auto values = sample.get<std::vector<double>>();
    Eigen::VectorXd flat(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) flat[i] = values[i];
    chain.push_back(bnn::NetParams::from_flat(arch, flat));
  }
  return chain;
}

}  // namespace empost::io
