#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "geomeans/forward.hpp"
#include "geomeans/phantoms.hpp"

using namespace geomeans;

namespace {

const double pi = std::numbers::pi;

template <class F>
double gk(F&& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(ForwardMeans, VanishOffTheSupportShell) {
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph{s, {Bump{{0.0, 0.0, 0.0}, 0.4, 1.0}}};
  const MeanData d = forward_means(ph, boundary_grid(s, 8), default_tgrid(s, 200));
  for (std::size_t i = 0; i < d.centers(); ++i)
    for (std::size_t j = 0; j < d.tgrid.size(); ++j)
      if (std::abs(d.tgrid[j] - 1.0) > 0.4) {
        EXPECT_EQ(d.row(i)[j], 0.0);
      }
}

TEST(ForwardMeans, SelfConvergentInQuadratureOrder) {
  for (SpaceKind k : {SpaceKind::euclidean, SpaceKind::sphere, SpaceKind::hyperbolic}) {
    const SpaceSpec s(k, 3, 1.0);
    const Phantom ph = default_phantom(s);
    const BoundaryGrid g = boundary_grid(s, 8);
    const TGrid tg = default_tgrid(s, 120);
    const MeanData a = forward_means(ph, g, tg, 48), b = forward_means(ph, g, tg, 96);
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-8);
  }
}

TEST(ForwardMeans, AgreeWithFullSectionQuadrature) {
  for (SpaceKind k : {SpaceKind::euclidean, SpaceKind::sphere, SpaceKind::hyperbolic})
    for (int n : {2, 3}) {
      const SpaceSpec s(k, n, 1.0);
      const Phantom ph = default_phantom(s);
      const BoundaryGrid g = boundary_grid(s, n == 2 ? 8 : 4);
      const TGrid tg = default_tgrid(s, 64);
      const MeanData a = forward_means(ph, g, tg);
      const MeanData b = forward_field(s, [&](std::span<const double> y) { return eval(ph, y); }, g, tg, n == 2 ? 400 : 240);
      const double scale = max_abs(a.values);
      ASSERT_GT(scale, 0.01);
      for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 2e-4 * scale);
    }
}

TEST(ForwardMeans, OneHasUnitMeansOnTheSphere) {
  const SpaceSpec s(SpaceKind::sphere, 3, 1.0);
  const MeanData d = forward_field(s, [](std::span<const double>) { return 1.0; }, boundary_grid(s, 4), default_tgrid(s, 64), 6);
  for (double v : d.values) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(ForwardMeans, Linear) {
  const SpaceSpec s(SpaceKind::euclidean, 2, 1.0);
  const Bump b1{{0.3, 0.1}, 0.3, 1.0}, b2{{-0.3, -0.2}, 0.25, -0.7};
  const BoundaryGrid g = boundary_grid(s, 16);
  const TGrid tg = default_tgrid(s, 200);
  const MeanData both = forward_means(Phantom{s, {b1, b2}}, g, tg);
  const MeanData one = forward_means(Phantom{s, {b1}}, g, tg), two = forward_means(Phantom{s, {b2}}, g, tg);
  for (std::size_t i = 0; i < both.values.size(); ++i) EXPECT_NEAR(both.values[i], one.values[i] + two.values[i], 1e-12);
}

TEST(ForwardMeans, DarbouxProperty) {
  // means of the Laplacian equal L applied in t to the means
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const BoundaryGrid g = boundary_grid(s, 8);
  const TGrid tg = default_tgrid(s, 800);
  const MeanData m = forward_means(ph, g, tg);
  std::vector<RadialSource> lap;
  for (const Bump& b : ph.bumps) {
    const Phantom single{s, {b}};
    lap.push_back({b.center, b.radius, [single, b](double r) {
                     Point p = b.center;
                     p[0] += r;
                     return euclidean_laplacian(single, p);
                   }});
  }
  const MeanData ml = forward_radial(s, lap, g, tg, 48);
  for (std::size_t i = 0; i < m.centers(); ++i) {
    const SampledProfile lm = darboux_L(m.profile(i), 3);
    const double scale = max_abs(ml.profile(i).values);
    for (std::size_t j = 20; j + 20 < tg.size(); ++j) EXPECT_NEAR(lm.values[j], ml.row(i)[j], 1e-3 * scale);
  }
}

TEST(EpdTrace, ZeroOrderIsThePlainMeans) {
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const BoundaryGrid g = boundary_grid(s, 4);
  const TGrid tg = default_tgrid(s, 100);
  const MeanData a = epd_trace_euclidean(ph, g, tg, 0.0), b = forward_means(ph, g, tg);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.alpha, 0.0);
}

TEST(EpdTrace, UnitOrderMatchesTheBallIntegral) {
  // M^1 f(xi, t) = Gamma(5/2)/pi^{3/2} \int_{|y|<1} f(xi - t y) dy, in polar coordinates about xi
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const Bump& b = ph.bumps[0];
  const BoundaryGrid g = boundary_grid(s, 4);
  const TGrid tg = default_tgrid(s, 400);
  const MeanData u = epd_trace_euclidean(ph, g, tg, 1.0);
  const double c = std::tgamma(2.5) / std::pow(pi, 1.5);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t i = rng() % g.size(), j = 150 + rng() % 200;
    const double d = std::sqrt(detail::dist2(g.center(i), b.center)), t = tg[j];
    auto shell = [&](double r) {
      return r * r * gk([&](double gam) {
               const double q = d * d + t * t * r * r - 2.0 * t * r * d * std::cos(gam);
               return std::sin(gam) * b.amplitude * bump_profile(std::sqrt(std::max(0.0, q)) / b.radius);
             }, 0.0, pi);
    };
    const double ref = c * 2.0 * pi * gk(shell, 0.0, 1.0);
    EXPECT_NEAR(u.row(i)[j], ref, 1e-6) << "t=" << t;
  }
}

TEST(EpdTrace, WaveCaseIsDerivativeOfTTimesMean) {
  // n = 3, alpha = -1: u = d/dt (t M), and t M = (1/2d) \int_{|t-d|}^{t+d} r f(r) dr for a radial bump
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const Bump& b = ph.bumps[0];
  const BoundaryGrid g = boundary_grid(s, 4);
  const TGrid tg = default_tgrid(s, 800);
  const MeanData u = epd_trace_euclidean(ph, g, tg, -1.0);
  auto f = [&](double r) { return b.amplitude * bump_profile(r / b.radius); };
  for (std::size_t i = 0; i < g.size(); i += 3) {
    const double d = std::sqrt(detail::dist2(g.center(i), b.center));
    for (std::size_t j = 10; j + 10 < tg.size(); j += 7) {
      const double t = tg[j];
      const double ref = ((t + d) * f(t + d) - (t - d) * f(std::abs(t - d))) / (2.0 * d);
      EXPECT_NEAR(u.row(i)[j], ref, 1e-6) << "t=" << t;
    }
  }
}

TEST(EpdTrace, RejectsOrdersBelowTheWaveCase) {
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  EXPECT_THROW(epd_trace_euclidean(default_phantom(s), boundary_grid(s, 4), default_tgrid(s, 100), -1.5), std::domain_error);
}

TEST(SphereEpdTrace, UnitOrderMatchesTheCapIntegral) {
  // c_{3,1}/(1-t^2)^{3/2} \int_{xi.y > t} f(y) dy on S^3, y = cos(psi) xi + sin(psi) omega
  const SpaceSpec s(SpaceKind::sphere, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const Bump& b = ph.bumps[0];
  const BoundaryGrid g = boundary_grid(s, 4);
  const TGrid tg = default_tgrid(s, 600);
  const MeanData u = epd_trace_sphere(ph, g, tg, 1.0);
  const double c = std::tgamma(2.5) / std::pow(pi, 1.5);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t i = rng() % g.size(), j = 100 + rng() % 400;
    const double t = tg[j];
    const double p = detail::dot(g.center(i), b.center), q = std::sqrt(std::max(0.0, 1.0 - p * p));
    auto ring = [&](double psi) {
      return std::sin(psi) * std::sin(psi) * gk([&](double phi) {
               const double cosang = std::clamp(std::cos(psi) * p + std::sin(psi) * q * std::cos(phi), -1.0, 1.0);
               return std::sin(phi) * b.amplitude * bump_profile(std::acos(cosang) / b.radius);
             }, 0.0, pi);
    };
    const double ref = c / std::pow(1.0 - t * t, 1.5) * 2.0 * pi * gk(ring, 0.0, std::acos(t));
    EXPECT_NEAR(u.row(i)[j], ref, 1e-6) << "t=" << t;
  }
}

TEST(SphereEpdTrace, SmallOrderApproachesTheMeans) {
  const SpaceSpec s(SpaceKind::sphere, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const BoundaryGrid g = boundary_grid(s, 4);
  const TGrid tg = default_tgrid(s, 600);
  const MeanData u = epd_trace_sphere(ph, g, tg, 1e-3), m = forward_means(ph, g, tg);
  for (std::size_t i = 0; i < u.values.size(); ++i) EXPECT_NEAR(u.values[i], m.values[i], 1e-2);
}

TEST(SphereEpdTrace, ZeroFieldGivesZeroTrace) {
  const SpaceSpec s(SpaceKind::sphere, 3, 1.0);
  const BoundaryGrid g = boundary_grid(s, 4);
  const TGrid tg = default_tgrid(s, 100);
  const MeanData zero = forward_field(s, [](std::span<const double>) { return 0.0; }, g, tg, 2);
  for (double v : sphere_epd_from_means(zero, 1.0).values) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(sphere_epd_from_means(zero, -0.5), std::domain_error);
}
