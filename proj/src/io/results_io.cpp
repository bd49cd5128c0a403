#include "empost/io/results_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace empost::io {

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_field_csv(const std::vector<core::StressField>& fields,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out << "segment_id,x,t,sigma\n";
  for (const auto& f : fields) {
    for (std::size_t i = 0; i < f.nx(); ++i) {
      for (std::size_t k = 0; k < f.nt(); ++k) {
        out << f.segment_id << ',' << fmt(f.x_grid[i]) << ','
            << fmt(f.t_grid[k]) << ',' << fmt(f.at(i, k)) << '\n';
      }
    }
  }
}

void write_result_csv(const stochastic::VariationalResult& result,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out << "segment_id,x,t,mean_sigma,std_sigma\n";
  for (std::size_t s = 0; s < result.mean_fields.size(); ++s) {
    const auto& m = result.mean_fields[s];
    const auto& sd = result.std_fields[s];
    for (std::size_t i = 0; i < m.nx(); ++i) {
      for (std::size_t k = 0; k < m.nt(); ++k) {
        out << m.segment_id << ',' << fmt(m.x_grid[i]) << ','
            << fmt(m.t_grid[k]) << ',' << fmt(m.at(i, k)) << ','
            << fmt(sd.at(i, k)) << '\n';
      }
    }
  }
}

stochastic::VariationalResult read_result_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open csv: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("empty csv: " + path);
  }

  struct Rows {
    std::vector<double> x, t, mean, sd;
  };
  std::vector<std::string> order;
  std::map<std::string, Rows> by_segment;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, sx, st, sm, ssd;
    std::getline(ss, id, ',');
    std::getline(ss, sx, ',');
    std::getline(ss, st, ',');
    std::getline(ss, sm, ',');
    std::getline(ss, ssd, ',');
    if (!by_segment.count(id)) order.push_back(id);
    Rows& r = by_segment[id];
    r.x.push_back(std::stod(sx));
    r.t.push_back(std::stod(st));
    r.mean.push_back(std::stod(sm));
    r.sd.push_back(std::stod(ssd));
  }

  stochastic::VariationalResult result;
  for (const auto& id : order) {
    const Rows& r = by_segment[id];
    // rows are written x-major; recover the grids
    std::vector<double> t_grid;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
      if (i > 0 && r.t[i] <= r.t[i - 1]) break;
      t_grid.push_back(r.t[i]);
    }
    const std::size_t nt = t_grid.size();
    if (nt == 0 || r.t.size() % nt != 0) {
      throw std::invalid_argument("csv grid not rectangular: " + path);
    }
    const std::size_t nx = r.t.size() / nt;
    std::vector<double> x_grid(nx);
    for (std::size_t i = 0; i < nx; ++i) x_grid[i] = r.x[i * nt];
    auto mean = core::StressField::zeros(id, x_grid, t_grid);
    auto sd = core::StressField::zeros(id, x_grid, t_grid);
    for (std::size_t i = 0; i < r.mean.size(); ++i) {
      mean.values[i] = r.mean[i];
      sd.values[i] = r.sd[i];
    }
    result.mean_fields.push_back(std::move(mean));
    result.std_fields.push_back(std::move(sd));
  }
  return result;
}

void write_result_summary(const stochastic::VariationalResult& result,
                          const std::string& path) {
  nlohmann::json j = {{"provenance", result.provenance},
                      {"sample_count", result.sample_count},
                      {"wall_seconds", result.wall_seconds}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write summary: " + path);
  out << j.dump(2) << "\n";
}

double read_summary_wall_seconds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open summary: " + path);
  nlohmann::json j;
  in >> j;
  return j.at("wall_seconds").get<double>();
}

}  // namespace empost::io
