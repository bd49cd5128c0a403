#pragma once

#include <string>
#include <vector>

#include "empost/core/stress_field.hpp"
#include "empost/stochastic/pipeline.hpp"

namespace empost::io {

// Deterministic CSV (17 significant digits) with header
// segment_id,x,t,sigma
void write_field_csv(const std::vector<core::StressField>& fields,
                     const std::string& path);

// segment_id,x,t,mean_sigma,std_sigma
void write_result_csv(const stochastic::VariationalResult& result,
                      const std::string& path);
stochastic::VariationalResult read_result_csv(const std::string& path);

// {"provenance", "sample_count", "wall_seconds"}
void write_result_summary(const stochastic::VariationalResult& result,
                          const std::string& path);
double read_summary_wall_seconds(const std::string& path);

}  // namespace empost::io
