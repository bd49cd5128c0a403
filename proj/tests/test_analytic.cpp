#include <doctest.h>

#include <cmath>
#include <random>

#include "empost/analytic/kernel.hpp"
#include "empost/analytic/quadrature.hpp"
#include "empost/analytic/segment.hpp"
#include "empost/fdm/solver.hpp"
#include "test_support.hpp"

using namespace empost;

namespace {
constexpr double kPi = 3.14159265358979323846;

core::SegmentProblem make_problem(double length, double kappa,
                                  core::InitialStressProfile h) {
  core::SegmentProblem p;
  p.length = length;
  p.kappa = kappa;
  p.drive = 0.0;
  p.h = std::move(h);
  return p;
}

double field_range(const core::StressField& f) {
  double lo = f.values[0], hi = f.values[0];
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}
}  // namespace

TEST_CASE("library erfc against an independent oracle") {
  for (double z = 0.0; z <= 10.0; z += 0.173) {
    const double expect = static_cast<double>(test_support::erfc_oracle(z));
    if (expect == 0.0) continue;
    CHECK(std::erfc(z) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("g kernel") {
  CHECK(analytic::g_kernel(0.0, 1.0, 1.0) ==
        doctest::Approx(2.0 / std::sqrt(kPi)).epsilon(1e-14));
  // 2/sqrt(pi)*exp(-1/4) - erfc(1/2), checked against the oracle erfc
  const double expect =
      2.0 / std::sqrt(kPi) * std::exp(-0.25) -
      static_cast<double>(test_support::erfc_oracle(0.5L));
  CHECK(analytic::g_kernel(1.0, 1.0, 1.0) ==
        doctest::Approx(expect).epsilon(1e-13));
  CHECK(analytic::g_kernel(1.0, 1.0, 1.0) ==
        doctest::Approx(0.3992825).epsilon(1e-6));

  SUBCASE("vanishes as t -> 0+ for x > 0") {
    CHECK(analytic::g_kernel(1.0, 1e-8, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(analytic::g_kernel(5e-6, 1.0, 1e-19) ==
          doctest::Approx(0.0).scale(1e-30));
  }
  SUBCASE("domain errors") {
    CHECK_THROWS(analytic::g_kernel(1.0, 0.0, 1.0));
    CHECK_THROWS(analytic::g_kernel(1.0, -1.0, 1.0));
    CHECK_THROWS(analytic::g_kernel(1.0, 1.0, 0.0));
  }
  SUBCASE("positive, decreasing in x, bounded by g(0,t)") {
    const double kappa = 3.3e-19;
    const double t = 5e7;
    const double cap = analytic::g_kernel(0.0, t, kappa);
    double prev = cap;
    for (int i = 1; i <= 40; ++i) {
      const double x = i * 1e-6;
      const double v = analytic::g_kernel(x, t, kappa);
      CHECK(v >= 0.0);
      CHECK(v < prev + 1e-30);
      prev = v;
    }
    CHECK(cap == doctest::Approx(2.0 * std::sqrt(kappa * t / kPi)));
  }
  SUBCASE("dg/dx = -erfc(x / 2 sqrt(kappa t))") {
    const double kappa = 2e-19, t = 3e7, x = 6e-6;
    const double dx = 1e-9;
    const double fd = (analytic::g_kernel(x + dx, t, kappa) -
                       analytic::g_kernel(x - dx, t, kappa)) /
                      (2 * dx);
    const double expect = -std::erfc(x / (2 * std::sqrt(kappa * t)));
    CHECK(fd == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("zeta arguments") {
  CHECK(analytic::zeta(1, 0, 2.0, 10.0) == 18.0);
  CHECK(analytic::zeta(2, 1, 3.0, 5.0) == 12.0);
  CHECK(analytic::zeta(3, 0, 7.3, 11.0) == 7.3);
  CHECK(analytic::zeta(4, 2, 1.0, 4.0) == 21.0);
  CHECK_THROWS(analytic::zeta(5, 0, 1.0, 1.0));
}

TEST_CASE("gauss-legendre convolution") {
  SUBCASE("a=1, b=tau, t=2 -> 2") {
    const double v = analytic::convolve_gl([](double) { return 1.0; },
                                           [](double tau) { return tau; },
                                           2.0, 4);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("exp kernel") {
    const double v = analytic::convolve_gl(
        [](double tau) { return std::exp(-tau); }, [](double) { return 1.0; },
        1.0, 16);
    CHECK(v == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("degree-7 pair exact at order 4") {
    auto a = [](double u) { return 1.0 + u - 0.5 * u * u * u; };  // deg 3
    auto b = [](double u) { return 2.0 - u * u + u * u * u * u; };  // deg 4
    const double got = analytic::convolve_gl(a, b, 1.7, 4);
    const double ref = analytic::convolve_gl(a, b, 1.7, 24);
    CHECK(got == doctest::Approx(ref).epsilon(1e-12));
  }
  SUBCASE("t = 0 and validation") {
    CHECK(analytic::convolve_gl([](double) { return 1.0; },
                                [](double) { return 1.0; }, 0.0, 4) == 0.0);
    CHECK_THROWS(analytic::convolve_gl([](double) { return 1.0; },
                                       [](double) { return 1.0; }, 1.0, 1));
  }
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  // order n is exact through degree 2n-1
  const auto& rule = analytic::gauss_legendre(6);
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double x = rule.nodes[i];
    sum += rule.weights[i] * (x * x * x * x * x * x * x * x * x * x +
                              3.0 * x * x - x);  // x^10 + 3x^2 - x
  }
  CHECK(sum == doctest::Approx(2.0 / 11.0 + 2.0).epsilon(1e-13));
}

TEST_CASE("voidless initial-condition projection") {
  SUBCASE("constant is preserved") {
    const auto h = core::InitialStressProfile::make_constant(2.7e8);
    for (double t : {0.0, 1e6, 1e8}) {
      CHECK(analytic::ic_projection_voidless(h, 2e-5, 8e-19, 5, 1.1e-5, t) ==
            doctest::Approx(2.7e8).epsilon(1e-12));
    }
  }
  SUBCASE("single eigenmode decay") {
    const auto h = core::InitialStressProfile::make_cosine(0.0, 1.0, 1.0);
    const double v = analytic::ic_projection_voidless(h, 1.0, 1.0, 5, 0.0, 0.1);
    CHECK(v == doctest::Approx(std::exp(-kPi * kPi * 0.1)).epsilon(1e-12));
    CHECK(v == doctest::Approx(0.372708).epsilon(1e-5));
  }
  SUBCASE("long-time limit is the mean") {
    const auto h = core::InitialStressProfile::make_piecewise(
        {{0.0, 1e8}, {1.2e-5, 4e8}, {2e-5, 2e8}});
    const double mean = h.mean(2e-5);
    CHECK(analytic::ic_projection_voidless(h, 2e-5, 8e-19, 8, 0.7e-5, 1e12) ==
          doctest::Approx(mean).epsilon(1e-9));
  }
}

TEST_CASE("void initial-condition projection") {
  SUBCASE("zero profile") {
    const auto h = core::InitialStressProfile::make_constant(0.0);
    CHECK(analytic::ic_projection_void(h, 1.0, 1.0, 5, 0.3, 0.2,
                                       core::VoidEnd::AtPlus) == 0.0);
  }
  SUBCASE("single eigenmode decay") {
    // h = cos(pi x / 2L) is the first mixed eigenmode
    const auto h = core::InitialStressProfile::make_cosine(0.0, 1.0, 0.5);
    const double v = analytic::ic_projection_void(h, 1.0, 1.0, 5, 0.0, 0.4,
                                                  core::VoidEnd::AtPlus);
    CHECK(v == doctest::Approx(std::exp(-0.25 * kPi * kPi * 0.4))
                   .epsilon(1e-12));
    CHECK(v == doctest::Approx(0.372708).epsilon(1e-5));
  }
  SUBCASE("pinned at the void end") {
    const auto h = core::InitialStressProfile::make_cosine(0.0, 3e8, 0.5);
    for (double t : {1e6, 5e7}) {
      CHECK(analytic::ic_projection_void(h, 2e-5, 8e-19, 5, 2e-5, t,
                                         core::VoidEnd::AtPlus) ==
            doctest::Approx(0.0).scale(3e8).epsilon(1e-12));
    }
  }
  SUBCASE("reflection consistency") {
    const auto h = core::InitialStressProfile::make_cosine(0.0, 2e8, 0.5);
    const auto hr = h.reflected(2e-5);
    for (double x : {0.0, 0.6e-5, 1.7e-5}) {
      CHECK(analytic::ic_projection_void(hr, 2e-5, 8e-19, 7, x, 2e7,
                                         core::VoidEnd::AtMinus) ==
            doctest::Approx(analytic::ic_projection_void(
                                h, 2e-5, 8e-19, 7, 2e-5 - x, 2e7,
                                core::VoidEnd::AtPlus))
                .epsilon(1e-12));
    }
  }
  SUBCASE("requires a void end") {
    const auto h = core::InitialStressProfile::make_constant(1.0);
    CHECK_THROWS(analytic::ic_projection_void(h, 1.0, 1.0, 5, 0.0, 0.1,
                                              core::VoidEnd::None));
  }
}

namespace {
std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}
std::vector<double> times_over(double t_end, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = t_end * (i + 1) / n;
  return v;
}
}  // namespace

TEST_CASE("voidless solver preserves a constant under zero flux") {
  const auto pr = make_problem(
      2e-5, 8e-19, core::InitialStressProfile::make_constant(3e8));
  analytic::BoundaryFluxSpec flux;  // phi0 = 0, rates empty
  analytic::SeriesConfig cfg;
  const auto f = analytic::solve_voidless_segment(
      pr, flux, cfg, linspace(0, 2e-5, 7), times_over(1e8, 5), "s");
  for (double v : f.values) CHECK(v == doctest::Approx(3e8).epsilon(1e-12));
}

TEST_CASE("voidless solver matches the FDM oracle on random rate problems") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ulen(1e-5, 5e-5);
  std::uniform_real_distribution<double> ukap(5e-20, 8e-19);
  std::uniform_real_distribution<double> uamp(-1.0, 1.0);
  const double t_end = 1e8;
  analytic::SeriesConfig cfg;

  for (int trial = 0; trial < 20; ++trial) {
    const double length = ulen(rng);
    const double kappa = ukap(rng);
    const auto h = core::InitialStressProfile::make_cosine(
        1.2e8 * uamp(rng), 1.5e8 * uamp(rng), 1.0);
    const auto pr = make_problem(length, kappa, h);
    // constant rates scaled so the flux response stays near 2e8 Pa
    const double rmag =
        2e8 / (4.0 / 3.0 * std::sqrt(kappa / kPi) * std::pow(t_end, 1.5));
    const double rm = rmag * uamp(rng);
    const double rp = rmag * uamp(rng);

    analytic::BoundaryFluxSpec flux;
    flux.rate_minus = [rm](double) { return rm; };
    flux.rate_plus = [rp](double) { return rp; };

    const auto xg = linspace(0, length, 12);
    const auto tg = times_over(t_end, 16);
    const auto got = analytic::solve_voidless_segment(pr, flux, cfg, xg, tg,
                                                      "s");

    fdm::FdmConfig fc;
    fc.t_end = t_end;
    fc.theta = 0.5;
    fc.dt = t_end / 2000.0;
    fc.dx_target = length / 96.0;
    const auto oracle = fdm::solve_segment_fdm(
        pr, fdm::SegmentBc::flux(0.0, flux.rate_minus),
        fdm::SegmentBc::flux(0.0, flux.rate_plus), fc, tg, "s");

    const double range = field_range(oracle);
    REQUIRE(range > 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < xg.size(); ++i) {
      for (std::size_t k = 0; k < tg.size(); ++k) {
        const double o = oracle.sample(xg[i], tg[k]);
        worst = std::max(worst, std::abs(got.at(i, k) - o));
      }
    }
    CHECK(worst / range < 0.005);
  }
}

TEST_CASE("void solver holds the stationary solution") {
  // h = G (L - x), constant phi = -G at the open end, void at plus:
  // d(sigma)/dx + G = 0 with sigma(L) = 0 is stationary
  const double length = 2e-5, kappa = 8e-19, g = 8e12;
  auto pr = make_problem(length, kappa,
                         core::InitialStressProfile::make_piecewise(
                             {{0.0, g * length}, {length, 0.0}}));
  analytic::VoidEndFlux fl;
  fl.phi0 = -g;
  analytic::SeriesConfig cfg;
  cfg.m_max = 40;  // the linear profile converges slowly in the mixed basis
  // sample times where the slowest retained mode has decayed
  const double tau1 = 1.0 / (kappa * std::pow(0.5 * kPi / length, 2));
  const auto tg = std::vector<double>{1.5 * tau1, 2.5 * tau1};
  const auto xg = linspace(0, length, 9);
  const auto f = analytic::solve_void_segment(pr, core::VoidEnd::AtPlus, fl,
                                              cfg, xg, tg, "s");
  for (std::size_t i = 0; i < xg.size(); ++i) {
    for (std::size_t k = 0; k < tg.size(); ++k) {
      CHECK(f.at(i, k) == doctest::Approx(g * (length - xg[i]))
                              .epsilon(2e-3)
                              .scale(g * length));
    }
  }
}

TEST_CASE("void solver matches the FDM oracle on random problems") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ulen(1e-5, 5e-5);
  std::uniform_real_distribution<double> ukap(5e-20, 8e-19);
  std::uniform_real_distribution<double> uamp(-1.0, 1.0);
  const double t_end = 1e8;
  analytic::SeriesConfig cfg;

  for (int trial = 0; trial < 20; ++trial) {
    const double length = ulen(rng);
    const double kappa = ukap(rng);
    const bool at_plus = trial % 2 == 0;
    // first mixed eigenmode shape pinned at the void end
    const auto h = at_plus
                       ? core::InitialStressProfile::make_cosine(
                             0.0, 3.5e8 * uamp(rng), 0.5)
                       : core::InitialStressProfile::make_cosine(
                             0.0, 3.5e8 * uamp(rng), 0.5, -0.5 * kPi);
    const auto pr = make_problem(length, kappa, h);
    const double rmag =
        1.5e8 / (4.0 / 3.0 * std::sqrt(kappa / kPi) * std::pow(t_end, 1.5));
    const double r = rmag * uamp(rng);
    analytic::VoidEndFlux fl;
    fl.rate = [r](double) { return r; };

    const auto xg = linspace(0, length, 12);
    const auto tg = times_over(t_end, 16);
    const auto got = analytic::solve_void_segment(
        pr, at_plus ? core::VoidEnd::AtPlus : core::VoidEnd::AtMinus, fl, cfg,
        xg, tg, "s");

    fdm::FdmConfig fc;
    fc.t_end = t_end;
    fc.theta = 0.5;
    fc.dt = t_end / 2000.0;
    fc.dx_target = length / 96.0;
    const auto minus_bc = at_plus ? fdm::SegmentBc::flux(0.0, fl.rate)
                                  : fdm::SegmentBc::void_end();
    const auto plus_bc = at_plus ? fdm::SegmentBc::void_end()
                                 : fdm::SegmentBc::flux(0.0, fl.rate);
    const auto oracle =
        fdm::solve_segment_fdm(pr, minus_bc, plus_bc, fc, tg, "s");

    const double range = field_range(oracle);
    REQUIRE(range > 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < xg.size(); ++i) {
      for (std::size_t k = 0; k < tg.size(); ++k) {
        const double o = oracle.sample(xg[i], tg[k]);
        worst = std::max(worst, std::abs(got.at(i, k) - o));
      }
    }
    CHECK(worst / range < 0.005);
  }
}

TEST_CASE("void-at-minus equals the mirrored void-at-plus solve") {
  const double length = 3e-5, kappa = 4e-19;
  const auto h = core::InitialStressProfile::make_cosine(0.0, 2.8e8, 0.5,
                                                         -0.5 * kPi);
  const auto pr = make_problem(length, kappa, h);
  analytic::VoidEndFlux fl;
  fl.phi0 = 3e12;
  fl.rate = [](double t) { return 40.0 - 2e-7 * t; };
  analytic::SeriesConfig cfg;

  const auto xg = linspace(0, length, 11);
  const auto tg = times_over(1e8, 7);
  const auto got = analytic::solve_void_segment(pr, core::VoidEnd::AtMinus, fl,
                                                cfg, xg, tg, "s");

  // external mirror: reflect h, flip the flux sign, solve void-at-plus
  auto mirrored = pr;
  mirrored.h = pr.h.reflected(length);
  analytic::VoidEndFlux flm;
  flm.phi0 = -fl.phi0;
  flm.rate = [&](double t) { return -fl.rate(t); };
  const auto ref = analytic::solve_void_segment(
      mirrored, core::VoidEnd::AtPlus, flm, cfg, xg, tg, "s");
  double scale = 0.0;
  for (double v : ref.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < xg.size(); ++i) {
    for (std::size_t k = 0; k < tg.size(); ++k) {
      const double mirrored_x = length - xg[xg.size() - 1 - i];
      (void)mirrored_x;
      CHECK(got.at(i, k) ==
            doctest::Approx(ref.at(xg.size() - 1 - i, k)).epsilon(1e-10)
                .scale(scale));
    }
  }
}

TEST_CASE("series truncation stability on a mid-range case") {
  const double length = 2.4e-5, kappa = 6e-19;
  const auto h = core::InitialStressProfile::make_cosine(1e8, 1.4e8, 1.0);
  const auto pr = make_problem(length, kappa, h);
  const double rmag =
      2e8 / (4.0 / 3.0 * std::sqrt(kappa / kPi) * std::pow(1e8, 1.5));
  analytic::BoundaryFluxSpec flux;
  flux.rate_minus = [rmag](double) { return 0.8 * rmag; };
  flux.rate_plus = [rmag](double t) { return -0.5 * rmag * (1.0 - t / 2e8); };

  const auto xg = linspace(0, length, 10);
  const auto tg = times_over(1e8, 12);
  analytic::SeriesConfig lo;  // P=2, M=5
  analytic::SeriesConfig hi;
  hi.p_max = 4;
  hi.m_max = 10;
  const auto a = analytic::solve_voidless_segment(pr, flux, lo, xg, tg, "s");
  const auto b = analytic::solve_voidless_segment(pr, flux, hi, xg, tg, "s");
  const double range = field_range(a);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(std::abs(a.values[i] - b.values[i]) / range < 1e-3);
  }
}

TEST_CASE("solver grid validation") {
  const auto pr = make_problem(
      1e-5, 1e-19, core::InitialStressProfile::make_constant(0.0));
  analytic::SeriesConfig cfg;
  CHECK_THROWS(analytic::solve_voidless_segment(pr, {}, cfg, {2e-5}, {1e6},
                                                "s"));
  CHECK_THROWS(analytic::solve_voidless_segment(pr, {}, cfg, {}, {1e6}, "s"));
  CHECK_THROWS(analytic::solve_void_segment(pr, core::VoidEnd::None, {}, cfg,
                                            {0.0}, {1e6}, "s"));
}
