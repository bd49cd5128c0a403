#include "empost/analytic/segment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "empost/analytic/kernel.hpp"
#include "empost/analytic/quadrature.hpp"

// Single-segment solutions of sigma_t = kappa*sigma_xx on (0, L) built from
// reflected half-line kernels plus an eigenmode expansion of the initial
// state. For flux data sigma_x(0, t) = phi(t) the half-line response is
//   -[phi(0)*g(x, t) + (dphi/dt * g(x, .))(t)],
// and the finite strip adds images: Neumann reflections keep the kernel sign,
// the Dirichlet reflection at a void end flips it. Grouped per image index p
// this gives the zeta1..zeta4 argument patterns below; the truncated sums
// satisfy the near-end boundary condition exactly (the erfc telescopes) and
// leak only through images beyond (2P+2)L, which is negligible while
// sqrt(kappa*t) stays below ~L*(P+1)/3.

namespace empost::analytic {

namespace {
constexpr double kPi = 3.14159265358979323846;

double zero_rate(double) { return 0.0; }

const std::function<double(double)>& rate_or_zero(
    const std::function<double(double)>& f) {
  static const std::function<double(double)> zero = zero_rate;
  return f ? f : zero;
}
}  // namespace

void SeriesConfig::validate() const {
  if (p_max < 0) throw std::invalid_argument("SeriesConfig: p_max >= 0");
  if (m_max < 1) throw std::invalid_argument("SeriesConfig: m_max >= 1");
  if (quad_order < 2) {
    throw std::invalid_argument("SeriesConfig: quad_order >= 2");
  }
}

namespace {
// every image argument of index p is at least 2pL; beyond 16 sqrt(kappa t)
// the kernel is zero (see g_kernel), so the p loop can stop early
inline int effective_p_max(int p_max, double length, double t, double kappa) {
  const double cutoff = 16.0 * std::sqrt(kappa * t);
  const double pl = cutoff / (2.0 * length);
  if (pl >= p_max) return p_max;
  return static_cast<int>(pl) + 1;
}
}  // namespace

double voidless_minus_sum(int p_max, double x, double length, double t,
                          double kappa) {
  const int pm = effective_p_max(p_max, length, t, kappa);
  double s = 0.0;
  for (int p = 0; p <= pm; ++p) {
    s += g_kernel(zeta(1, p, x, length), t, kappa) +
         g_kernel(zeta(3, p, x, length), t, kappa);
  }
  return s;
}

double voidless_plus_sum(int p_max, double x, double length, double t,
                         double kappa) {
  const int pm = effective_p_max(p_max, length, t, kappa);
  double s = 0.0;
  for (int p = 0; p <= pm; ++p) {
    s += g_kernel(zeta(2, p, x, length), t, kappa) +
         g_kernel(zeta(4, p, x, length), t, kappa);
  }
  return s;
}

double void_minus_sum(int p_max, double x, double length, double t,
                      double kappa) {
  const int pm = effective_p_max(p_max, length, t, kappa);
  double s = 0.0;
  double sign = 1.0;
  for (int p = 0; p <= pm; ++p, sign = -sign) {
    s += sign * (g_kernel(zeta(1, p, x, length), t, kappa) -
                 g_kernel(zeta(3, p, x, length), t, kappa));
  }
  return s;
}

double ic_projection_voidless(const core::InitialStressProfile& h,
                              double length, double kappa, int m_max, double x,
                              double t) {
  h.validate(length);
  double v = h.mean(length);
  for (int m = 1; m <= m_max; ++m) {
    const double alpha = m * kPi / length;
    const double coeff = (2.0 / length) * h.cosine_moment(alpha, length);
    v += coeff * std::cos(alpha * x) * std::exp(-kappa * alpha * alpha * t);
  }
  return v;
}

double ic_projection_void(const core::InitialStressProfile& h, double length,
                          double kappa, int m_max, double x, double t,
                          core::VoidEnd void_at) {
  if (void_at == core::VoidEnd::None) {
    throw std::invalid_argument("ic_projection_void: void_at must name an end");
  }
  if (void_at == core::VoidEnd::AtMinus) {
    return ic_projection_void(h.reflected(length), length, kappa, m_max,
                              length - x, t, core::VoidEnd::AtPlus);
  }
  h.validate(length);
  double v = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    const double alpha = (m - 0.5) * kPi / length;
    const double coeff = (2.0 / length) * h.cosine_moment(alpha, length);
    v += coeff * std::cos(alpha * x) * std::exp(-kappa * alpha * alpha * t);
  }
  return v;
}

namespace {

// boundary response of the voidless segment at one point, rates sampled at
// the Gauss-Legendre nodes of [0, t]
double voidless_boundary(const core::SegmentProblem& pr,
                         const BoundaryFluxSpec& flux, const SeriesConfig& cfg,
                         double x, double t) {
  if (t <= 0.0) return 0.0;
  const auto& rm = rate_or_zero(flux.rate_minus);
  const auto& rp = rate_or_zero(flux.rate_plus);
  double v = -flux.phi_minus_0 *
                 voidless_minus_sum(cfg.p_max, x, pr.length, t, pr.kappa) +
             flux.phi_plus_0 *
                 voidless_plus_sum(cfg.p_max, x, pr.length, t, pr.kappa);
  const GaussLegendre& rule = gauss_legendre(cfg.quad_order);
  const double half = 0.5 * t;
  for (int i = 0; i < cfg.quad_order; ++i) {
    const double tau = half * (rule.nodes[i] + 1.0);
    const double dt_ = t - tau;
    v += half * rule.weights[i] *
         (-rm(tau) * voidless_minus_sum(cfg.p_max, x, pr.length, dt_, pr.kappa)
          + rp(tau) * voidless_plus_sum(cfg.p_max, x, pr.length, dt_, pr.kappa));
  }
  return v;
}

// boundary response of a void-at-plus segment driven from its minus end
double void_boundary(const core::SegmentProblem& pr, const VoidEndFlux& fl,
                     const SeriesConfig& cfg, double x, double t) {
  if (t <= 0.0) return 0.0;
  const auto& rate = rate_or_zero(fl.rate);
  double v = fl.phi0 * void_minus_sum(cfg.p_max, x, pr.length, t, pr.kappa);
  const GaussLegendre& rule = gauss_legendre(cfg.quad_order);
  const double half = 0.5 * t;
  for (int i = 0; i < cfg.quad_order; ++i) {
    const double tau = half * (rule.nodes[i] + 1.0);
    const double dt_ = t - tau;
    v += half * rule.weights[i] * rate(tau) *
         void_minus_sum(cfg.p_max, x, pr.length, dt_, pr.kappa);
  }
  return v;
}

// validates grids and snaps roundoff-level overshoot back onto [0, L]
void check_grids(const core::SegmentProblem& pr, std::vector<double>& x_grid,
                 const std::vector<double>& t_grid) {
  if (x_grid.empty() || t_grid.empty()) {
    throw std::invalid_argument("segment solve: empty grid");
  }
  for (double& x : x_grid) {
    if (x < -1e-12 * pr.length || x > pr.length * (1.0 + 1e-12)) {
      throw std::invalid_argument("segment solve: x outside [0, L]");
    }
    x = std::min(std::max(x, 0.0), pr.length);
  }
  if (t_grid.front() < 0.0) {
    throw std::invalid_argument("segment solve: t must be >= 0");
  }
}

}  // namespace

double evaluate_voidless(const core::SegmentProblem& pr,
                         const BoundaryFluxSpec& flux, const SeriesConfig& cfg,
                         double x, double t) {
  cfg.validate();
  return voidless_boundary(pr, flux, cfg, x, t) +
         ic_projection_voidless(pr.h, pr.length, pr.kappa, cfg.m_max, x, t);
}

double evaluate_void(const core::SegmentProblem& pr, core::VoidEnd void_at,
                     const VoidEndFlux& nonvoid_end, const SeriesConfig& cfg,
                     double x, double t) {
  cfg.validate();
  if (void_at == core::VoidEnd::None) {
    throw std::invalid_argument("evaluate_void: segment has no void end");
  }
  if (void_at == core::VoidEnd::AtMinus) {
    // mirror across x' = L - x: gradients and their rates flip sign
    core::SegmentProblem mirrored = pr;
    mirrored.h = pr.h.reflected(pr.length);
    VoidEndFlux fl;
    fl.phi0 = -nonvoid_end.phi0;
    if (nonvoid_end.rate) {
      auto r = nonvoid_end.rate;
      fl.rate = [r](double tau) { return -r(tau); };
    }
    return evaluate_void(mirrored, core::VoidEnd::AtPlus, fl, cfg,
                         pr.length - x, t);
  }
  return void_boundary(pr, nonvoid_end, cfg, x, t) +
         ic_projection_void(pr.h, pr.length, pr.kappa, cfg.m_max, x, t,
                            core::VoidEnd::AtPlus);
}

core::StressField solve_voidless_segment(const core::SegmentProblem& pr,
                                         const BoundaryFluxSpec& flux,
                                         const SeriesConfig& cfg,
                                         std::vector<double> x_grid,
                                         std::vector<double> t_grid,
                                         std::string segment_id) {
  cfg.validate();
  check_grids(pr, x_grid, t_grid);
  auto field = core::StressField::zeros(std::move(segment_id),
                                        std::move(x_grid), std::move(t_grid));
  const auto& rm = rate_or_zero(flux.rate_minus);
  const auto& rp = rate_or_zero(flux.rate_plus);
  const GaussLegendre& rule = gauss_legendre(cfg.quad_order);
  std::vector<double> taus(cfg.quad_order), rmv(cfg.quad_order),
      rpv(cfg.quad_order);
  for (std::size_t k = 0; k < field.nt(); ++k) {
    const double t = field.t_grid[k];
    const double half = 0.5 * t;
    if (t > 0.0) {
      for (int i = 0; i < cfg.quad_order; ++i) {
        taus[i] = half * (rule.nodes[i] + 1.0);
        rmv[i] = rm(taus[i]);
        rpv[i] = rp(taus[i]);
      }
    }
    for (std::size_t ix = 0; ix < field.nx(); ++ix) {
      const double x = field.x_grid[ix];
      double v = ic_projection_voidless(pr.h, pr.length, pr.kappa, cfg.m_max,
                                        x, t);
      if (t > 0.0) {
        v += -flux.phi_minus_0 *
                 voidless_minus_sum(cfg.p_max, x, pr.length, t, pr.kappa) +
             flux.phi_plus_0 *
                 voidless_plus_sum(cfg.p_max, x, pr.length, t, pr.kappa);
        for (int i = 0; i < cfg.quad_order; ++i) {
          const double dt_ = t - taus[i];
          v += half * rule.weights[i] *
               (-rmv[i] *
                    voidless_minus_sum(cfg.p_max, x, pr.length, dt_, pr.kappa)
                + rpv[i] *
                    voidless_plus_sum(cfg.p_max, x, pr.length, dt_, pr.kappa));
        }
      }
      field.at(ix, k) = v;
    }
  }
  return field;
}

core::StressField solve_void_segment(const core::SegmentProblem& pr,
                                     core::VoidEnd void_at,
                                     const VoidEndFlux& nonvoid_end,
                                     const SeriesConfig& cfg,
                                     std::vector<double> x_grid,
                                     std::vector<double> t_grid,
                                     std::string segment_id) {
  cfg.validate();
  if (void_at == core::VoidEnd::None) {
    throw std::invalid_argument("solve_void_segment: void_end is none");
  }
  check_grids(pr, x_grid, t_grid);
  if (void_at == core::VoidEnd::AtMinus) {
    core::SegmentProblem mirrored = pr;
    mirrored.h = pr.h.reflected(pr.length);
    VoidEndFlux fl;
    fl.phi0 = -nonvoid_end.phi0;
    if (nonvoid_end.rate) {
      auto r = nonvoid_end.rate;
      fl.rate = [r](double tau) { return -r(tau); };
    }
    std::vector<double> mirrored_x(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      mirrored_x[i] = pr.length - x_grid[x_grid.size() - 1 - i];
    }
    auto mirrored_field =
        solve_void_segment(mirrored, core::VoidEnd::AtPlus, fl, cfg,
                           std::move(mirrored_x), t_grid, segment_id);
    auto field = core::StressField::zeros(std::move(segment_id),
                                          std::move(x_grid),
                                          std::move(t_grid));
    for (std::size_t ix = 0; ix < field.nx(); ++ix) {
      for (std::size_t k = 0; k < field.nt(); ++k) {
        field.at(ix, k) = mirrored_field.at(field.nx() - 1 - ix, k);
      }
    }
    return field;
  }

  auto field = core::StressField::zeros(std::move(segment_id),
                                        std::move(x_grid), std::move(t_grid));
  const auto& rate = rate_or_zero(nonvoid_end.rate);
  const GaussLegendre& rule = gauss_legendre(cfg.quad_order);
  std::vector<double> taus(cfg.quad_order), rv(cfg.quad_order);
  for (std::size_t k = 0; k < field.nt(); ++k) {
    const double t = field.t_grid[k];
    const double half = 0.5 * t;
    if (t > 0.0) {
      for (int i = 0; i < cfg.quad_order; ++i) {
        taus[i] = half * (rule.nodes[i] + 1.0);
        rv[i] = rate(taus[i]);
      }
    }
    for (std::size_t ix = 0; ix < field.nx(); ++ix) {
      const double x = field.x_grid[ix];
      double v = ic_projection_void(pr.h, pr.length, pr.kappa, cfg.m_max, x, t,
                                    core::VoidEnd::AtPlus);
      if (t > 0.0) {
        v += nonvoid_end.phi0 *
             void_minus_sum(cfg.p_max, x, pr.length, t, pr.kappa);
        for (int i = 0; i < cfg.quad_order; ++i) {
          const double dt_ = t - taus[i];
          v += half * rule.weights[i] * rv[i] *
               void_minus_sum(cfg.p_max, x, pr.length, dt_, pr.kappa);
        }
      }
      field.at(ix, k) = v;
    }
  }
  return field;
}

}  // namespace empost::analytic
