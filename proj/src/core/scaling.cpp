#include "empost/core/scaling.hpp"

#include <stdexcept>

namespace empost::core {

void ScalingConstants::validate() const {
  if (k_x == 0.0 || k_t == 0.0 || k_sigma == 0.0) {
    throw std::invalid_argument("ScalingConstants: all must be nonzero");
  }
}

InitialStressProfile scale_profile(const InitialStressProfile& h,
                                   const ScalingConstants& sc) {
  InitialStressProfile out = h;
  switch (h.kind) {
    case InitialStressProfile::Kind::Constant:
      out.constant_value *= sc.k_sigma;
      break;
    case InitialStressProfile::Kind::PiecewiseLinear:
      for (auto& [x, y] : out.knots) {
        x *= sc.k_x;
        y *= sc.k_sigma;
      }
      break;
    case InitialStressProfile::Kind::CosineMode:
      // frequency and phase are expressed relative to x/L: shape invariant
      out.offset *= sc.k_sigma;
      out.amplitude *= sc.k_sigma;
      break;
  }
  return out;
}

SegmentProblem scale_problem(const SegmentProblem& problem,
                             const ScalingConstants& sc) {
  SegmentProblem out;
  out.length = sc.k_x * problem.length;
  out.kappa = sc.kappa_factor() * problem.kappa;
  out.drive = sc.drive_factor() * problem.drive;
  out.h = scale_profile(problem.h, sc);
  return out;
}

TreePhysics scale_problem(const TreePhysics& physics,
                          const ScalingConstants& sc) {
  sc.validate();
  TreePhysics out = physics;
  for (auto& s : out.segments) {
    s.length *= sc.k_x;
    s.kappa *= sc.kappa_factor();
    s.drive *= sc.drive_factor();
    s.h = scale_profile(s.h, sc);
  }
  out.scaled = true;
  return out;
}

std::vector<double> scale_x_grid(const std::vector<double>& x,
                                 const ScalingConstants& sc) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sc.k_x * x[i];
  return out;
}

std::vector<double> scale_t_grid(const std::vector<double>& t,
                                 const ScalingConstants& sc) {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = sc.k_t * t[i];
  return out;
}

StressField unscale_stress(const StressField& field,
                           const ScalingConstants& sc) {
  sc.validate();
  if (!field.scaled) {
    throw std::invalid_argument("unscale_stress: field is already physical");
  }
  StressField out = field;
  for (auto& x : out.x_grid) x /= sc.k_x;
  for (auto& t : out.t_grid) t /= sc.k_t;
  for (auto& v : out.values) v /= sc.k_sigma;
  out.scaled = false;
  return out;
}

StressField scale_stress(const StressField& field,
                         const ScalingConstants& sc) {
  sc.validate();
  if (field.scaled) {
    throw std::invalid_argument("scale_stress: field is already scaled");
  }
  StressField out = field;
  for (auto& x : out.x_grid) x *= sc.k_x;
  for (auto& t : out.t_grid) t *= sc.k_t;
  for (auto& v : out.values) v *= sc.k_sigma;
  out.scaled = true;
  return out;
}

}  // namespace empost::core
