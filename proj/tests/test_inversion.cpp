#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "geomeans/forward.hpp"
#include "geomeans/inversion.hpp"
#include "geomeans/laplacian.hpp"
#include "geomeans/phantoms.hpp"
#include "geomeans/potentials.hpp"

using namespace geomeans;

namespace {

const double pi = std::numbers::pi;

MeanData zero_data(const SpaceSpec& s, std::size_t m, std::size_t nt) {
  const BoundaryGrid g = boundary_grid(s, m);
  const TGrid tg = default_tgrid(s, nt);
  return MeanData{s, g, tg, std::vector<double>(g.size() * tg.size(), 0.0), std::nullopt};
}

std::vector<SampledProfile> per_centre(const MeanData& d, double (*f)(double)) {
  return std::vector<SampledProfile>(d.centers(), sample(d.tgrid, f));
}

}  // namespace

TEST(Constants, ThreeDimensionalEuclidean) {
  const InversionConstants c = constants(SpaceSpec(SpaceKind::euclidean, 3, 1.5));
  EXPECT_NEAR(c.d1, -1.0 / (2.0 * pi * 1.5), 1e-15);
  EXPECT_NEAR(c.delta, 1.0, 1e-15);
  EXPECT_NEAR(c.sigma, 4.0 * pi, 1e-14);
  EXPECT_NEAR(c.lambda, std::pow(3.0, -1.0) / std::sqrt(pi) * std::tgamma(1.5), 1e-15);
  EXPECT_TRUE(std::isnan(c.d2));
}

TEST(Constants, PlaneLogarithmicFormula) {
  // the plane formula f = Lap (1/(2 pi R)) \int\int ..., checked by the round trips below
  const InversionConstants c = constants(SpaceSpec(SpaceKind::euclidean, 2, 2.0));
  EXPECT_NEAR(c.d2, 1.0 / (2.0 * pi * 2.0), 1e-15);
  EXPECT_TRUE(std::isnan(c.delta));
}

TEST(Constants, CurvedAndEpd) {
  // d_n = (-1)^{[n/2-1]}/(2^{n-1} pi^{n/2-1} Gamma(n/2)): n = 2 -> 1/2, n = 3 -> 1/(4 sqrt(pi) Gamma(3/2)) = 1/(2 pi)
  EXPECT_NEAR(constants(SpaceSpec(SpaceKind::sphere, 2, 1.0)).d_curved, 0.5, 1e-15);
  EXPECT_NEAR(constants(SpaceSpec(SpaceKind::sphere, 3, 1.0)).d_curved, 1.0 / (2.0 * pi), 1e-15);
  EXPECT_NEAR(constants(SpaceSpec(SpaceKind::sphere, 5, 1.0)).d_curved, -1.0 / (16.0 * std::pow(pi, 1.5) * std::tgamma(2.5)), 1e-15);
  const InversionConstants e = constants(SpaceSpec(SpaceKind::euclidean, 3, 1.0), 1.0);
  EXPECT_NEAR(e.d1_epd, e.d1 * std::tgamma(1.5) / std::tgamma(2.5), 1e-15);
  EXPECT_NEAR(e.c_alpha, std::tgamma(2.5) / std::pow(pi, 1.5), 1e-15);
}

TEST(Backproject, ConstantGivesOne) {
  for (SpaceKind k : {SpaceKind::euclidean, SpaceKind::sphere, SpaceKind::hyperbolic}) {
    const SpaceSpec s(k, 3, 1.0);
    const MeanData d = zero_data(s, 8, 100);
    EXPECT_NEAR(backproject(d, per_centre(d, [](double) { return 1.0; }), lift(s, Point{0.1, 0.2, -0.1})), 1.0, 1e-12);
  }
}

TEST(Backproject, SquaredDistanceFromTheCentre) {
  const SpaceSpec s(SpaceKind::euclidean, 2, 1.3);
  const MeanData d = zero_data(s, 16, 200);
  EXPECT_NEAR(backproject(d, per_centre(d, [](double t) { return t * t; }), Point{0.0, 0.0}), 1.69, 1e-12);
  // off centre the mean of |x - xi|^2 over the circle is R^2 + |x|^2
  EXPECT_NEAR(backproject(d, per_centre(d, [](double t) { return t * t; }), Point{0.3, -0.4}), 1.69 + 0.25, 1e-12);
}

TEST(Backproject, SingleCentre) {
  const SpaceSpec s(SpaceKind::euclidean, 2, 1.0);
  MeanData d = zero_data(s, 4, 100);
  d.boundary.centers.coords = {0.0, 1.0};
  d.boundary.centers.weights = {1.0};
  d.values.assign(d.tgrid.size(), 0.0);
  const double v = backproject(d, per_centre(d, [](double t) { return 3.0 * t; }), Point{0.0, 0.5});
  EXPECT_NEAR(v, 1.5, 1e-12);
}

TEST(Inversion, ZeroDataGiveZero) {
  for (SpaceKind k : {SpaceKind::euclidean, SpaceKind::sphere, SpaceKind::hyperbolic})
    for (int n : {2, 3}) {
      const SpaceSpec s(k, n, 1.0);
      const MeanData d = zero_data(s, 8, 200);
      const Point x(n, 0.1);
      EXPECT_EQ(make_reconstructor(d)(x), 0.0);
      if (k == SpaceKind::euclidean) {
        EXPECT_EQ(invert_euclidean_modified(d, x), 0.0);
      }
    }
}

TEST(Inversion, WrongParityOrSpaceThrows) {
  const MeanData d2 = zero_data(SpaceSpec(SpaceKind::euclidean, 2, 1.0), 8, 100);
  const MeanData d3 = zero_data(SpaceSpec(SpaceKind::euclidean, 3, 1.0), 8, 100);
  EXPECT_THROW(invert_euclidean_odd(d2, Point{0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(invert_euclidean_even(d3, Point{0.1, 0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(invert_sphere(d2, Point{0.1, 0.1}), std::invalid_argument);
}

TEST(Inversion, PointOutsideBThrows) {
  const MeanData d = zero_data(SpaceSpec(SpaceKind::sphere, 2, 1.0), 8, 100);
  EXPECT_THROW(invert_sphere(d, Point{std::sin(1.0), 0.0}), std::domain_error);
  EXPECT_THROW(invert_sphere(d, Point{0.84, 0.0}), std::domain_error);  // FD stencil crosses the boundary
}

TEST(Inversion, PlaneRoundTripRecoversAmplitude) {
  const SpaceSpec s(SpaceKind::euclidean, 2, 1.0);
  const Phantom ph = default_phantom(s);
  const MeanData d = forward_means(ph, boundary_grid(s, 256), default_tgrid(s, 800));
  const Point c = ph.bumps[0].center;
  EXPECT_NEAR(invert_euclidean_even(d, c), ph.bumps[0].amplitude, 3e-3);
  ReconGridSpec g;
  g.points_per_axis = 15;
  const ReconstructionReport r = reconstruct_on_grid(make_reconstructor(d), ph, g);
  EXPECT_LE(r.rel_l2, 0.03);
  EXPECT_NEAR(r.calibration, 1.0, 0.03);
}

TEST(Inversion, ThreeDimensionalRoundTripAtTheBumpCentre) {
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const MeanData d = forward_means(ph, boundary_grid(s, 48), default_tgrid(s, 400));
  EXPECT_NEAR(invert_euclidean_odd(d, ph.bumps[0].center), 1.0, 0.03);
}

TEST(Inversion, LinearInTheData) {
  const SpaceSpec s(SpaceKind::euclidean, 2, 1.0);
  const Bump b1{{0.3, 0.1}, 0.3, 1.0}, b2{{-0.3, -0.2}, 0.25, 0.6};
  const BoundaryGrid g = boundary_grid(s, 64);
  const TGrid tg = default_tgrid(s, 400);
  const MeanData a = forward_means(Phantom{s, {b1}}, g, tg), b = forward_means(Phantom{s, {b2}}, g, tg);
  MeanData sum = a;
  for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += b.values[i];
  for (const Point& x : {Point{0.25, 0.1}, Point{-0.3, -0.1}, Point{0.0, 0.5}})
    for (Formula f : {Formula::direct, Formula::modified}) {
      InversionOptions o;
      o.formula = f;
      const double lhs = make_reconstructor(sum, o)(x), rhs = make_reconstructor(a, o)(x) + make_reconstructor(b, o)(x);
      EXPECT_NEAR(lhs, rhs, 1e-10);
    }
}

TEST(Inversion, ModifiedAgreesWithDirect) {
  for (int n : {2, 3}) {
    const SpaceSpec s(SpaceKind::euclidean, n, 1.0);
    const Phantom ph = default_phantom(s);
    const MeanData d = forward_means(ph, boundary_grid(s, n == 2 ? 256 : 32), default_tgrid(s, n == 2 ? 800 : 400));
    ReconGridSpec g;
    g.points_per_axis = 11;
    InversionOptions mod;
    mod.formula = Formula::modified;
    const ReconstructionReport a = reconstruct_on_grid(make_reconstructor(d), ph, g);
    const ReconstructionReport b = reconstruct_on_grid(make_reconstructor(d, mod), ph, g);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      num += std::pow(a.reconstructed[i] - b.reconstructed[i], 2);
      den += a.reconstructed[i] * a.reconstructed[i];
    }
    EXPECT_LE(std::sqrt(num / den), 0.02) << "n=" << n;
  }
}

TEST(Inversion, CurvedRoundTripsInThePlane) {
  for (SpaceKind k : {SpaceKind::sphere, SpaceKind::hyperbolic}) {
    const SpaceSpec s(k, 2, 1.0);
    const Phantom ph = default_phantom(s);
    const MeanData d = forward_means(ph, boundary_grid(s, 128), default_tgrid(s, 600));
    ReconGridSpec g;
    g.points_per_axis = 11;
    const ReconstructionReport r = reconstruct_on_grid(make_reconstructor(d), ph, g);
    EXPECT_LE(r.rel_l2, 0.05) << to_string(k);
    EXPECT_NEAR(r.calibration, 1.0, 0.03) << to_string(k);
  }
}

TEST(Inversion, HyperbolicWeightsAgreeAtTheOrigin) {
  // x_{n+1}/|x| = 1 at e_{n+1}, so both chart weights give the same value there
  const SpaceSpec s(SpaceKind::hyperbolic, 2, 1.0);
  const Phantom ph = default_phantom(s);
  const MeanData d = forward_means(ph, boundary_grid(s, 64), default_tgrid(s, 300));
  InversionOptions surface;
  surface.hyperbolic_weight = HyperbolicWeight::surface;
  const Point o{0.0, 0.0};
  EXPECT_NEAR(invert_hyperbolic(d, o), invert_hyperbolic(d, o, surface), 1e-14);
}

TEST(EpdInversion, ZeroOrderIsPlainInversion) {
  const SpaceSpec s(SpaceKind::euclidean, 2, 1.0);
  const Phantom ph = default_phantom(s);
  const MeanData d = forward_means(ph, boundary_grid(s, 64), default_tgrid(s, 300));
  const MeanData u = epd_from_means(d, 0.0);
  const Point x{0.2, 0.1};
  EXPECT_DOUBLE_EQ(epd_invert_euclidean(u, x), invert_euclidean_even(d, x));
}

TEST(EpdInversion, EuclideanRoundTrips) {
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const MeanData m = forward_means(ph, boundary_grid(s, 32), default_tgrid(s, 400));
  ReconGridSpec g;
  g.points_per_axis = 9;
  for (double a : {1.0, -1.0}) {
    const ReconstructionReport r = reconstruct_on_grid(make_reconstructor(epd_from_means(m, a)), ph, g);
    EXPECT_LE(r.rel_l2, 0.05) << "alpha=" << a;
  }
}

TEST(EpdInversion, SphereRoundTrip) {
  const SpaceSpec s(SpaceKind::sphere, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const MeanData m = forward_means(ph, boundary_grid(s, 32), default_tgrid(s, 600));
  ReconGridSpec g;
  g.points_per_axis = 9;
  const ReconstructionReport r = reconstruct_on_grid(make_reconstructor(sphere_epd_from_means(m, 1.0)), ph, g);
  EXPECT_LE(r.rel_l2, 0.05);
  // a small order degenerates to the plain inversion
  const Point x{0.2, 0.0, 0.0};
  EXPECT_NEAR(epd_invert_sphere(sphere_epd_from_means(m, 1e-3), x), invert_sphere(m, x), 2e-2);
}

TEST(EpdInversion, ZeroTraceGivesZero) {
  const SpaceSpec s(SpaceKind::sphere, 3, 1.0);
  MeanData d = zero_data(s, 8, 200);
  d.alpha = 1.0;
  EXPECT_EQ(epd_invert_sphere(d, Point{0.1, 0.0, 0.1}), 0.0);
}

TEST(Potentials, RieszPotentialInvertsMinusLaplacian) {
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  for (const Point& x : {Point{0.25, 0.05, 0.1}, Point{0.0, 0.2, -0.1}, Point{0.45, 0.15, 0.0}}) {
    const double lap = laplacian_fd([&](std::span<const double> y) { return riesz_potential(ph, y); }, x, 1e-2);
    EXPECT_NEAR(-lap, eval(ph, x), 1e-2 * eval(ph, x));
  }
}

TEST(Potentials, RieszPotentialAgainstDirectIntegral) {
  // Gamma(1/2)/(4 pi^{3/2}) \int f(y)/|x-y| dy with the radial bump about c: shell theorem
  // gives \int_0^rho 4 pi r^2 f(r) / max(r, |x-c|) dr
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const Bump& b = ph.bumps[0];
  for (const Point& x : {Point{0.25, 0.05, 0.1}, Point{0.9, 0.0, 0.0}}) {
    const double d = std::sqrt(detail::dist2(x, b.center));
    const double shell = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double r) { return 4.0 * pi * r * r * bump_profile(r / b.radius) / std::max(r, d); }, 0.0, b.radius, 15, 1e-14);
    const double ref = std::tgamma(0.5) / (4.0 * std::pow(pi, 1.5)) * shell;
    EXPECT_NEAR(riesz_potential(ph, x), ref, 1e-9 * ref);
  }
}

TEST(Potentials, RieszFromMeans) {
  const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
  const Phantom ph = default_phantom(s);
  const MeanData md = forward_means(ph, boundary_grid(s, 48), default_tgrid(s, 400));
  const double lambda = constants(s).lambda;
  const double i2 = std::tgamma(0.5) / (4.0 * std::pow(pi, 1.5));
  for (const Point& x : {Point{0.25, 0.05, 0.1}, Point{0.0, 0.2, -0.1}, Point{-0.3, 0.1, 0.2}}) {
    const double ref = lambda * riesz_potential(ph, x) / i2;
    EXPECT_NEAR(riesz_from_means(md, x), ref, 1e-2 * ref);
  }
}

TEST(Potentials, LogPotentialInvertsLaplacian) {
  const SpaceSpec s(SpaceKind::euclidean, 2, 1.5);
  const Phantom ph = default_phantom(s);
  for (const Point& x : {Point{0.25, 0.05}, Point{0.0, 0.4}, Point{0.6, 0.3}}) {
    const double lap = laplacian_fd([&](std::span<const double> y) { return log_potential(ph, y); }, x, 1e-2);
    EXPECT_NEAR(lap, eval(ph, x), 1e-2 * eval(ph, x));
  }
}

TEST(Potentials, LogPotentialFromMeans) {
  for (SpaceKind k : {SpaceKind::euclidean, SpaceKind::sphere, SpaceKind::hyperbolic}) {
    const SpaceSpec s(k, 2, k == SpaceKind::euclidean ? 1.5 : 1.0);
    const Phantom ph = default_phantom(s);
    const MeanData md = forward_means(ph, boundary_grid(s, 256), default_tgrid(s, 600));
    const double I = phantom_integral(ph);
    for (const Point& x : {Point{0.25, 0.05}, Point{0.0, 0.4}}) {
      const double ref = k == SpaceKind::euclidean ? log_potential(ph, x) : curved_log_potential(ph, x);
      EXPECT_NEAR(log_potential_from_means(md, x, I), ref, 1e-3) << to_string(k);
    }
  }
}

TEST(ReconGrid, PointsInsideTheChartBall) {
  ReconGridSpec g;
  g.points_per_axis = 5;
  g.extent = 0.5;
  const auto pts = recon_points(SpaceSpec(SpaceKind::sphere, 3, 1.0), g);
  ASSERT_FALSE(pts.empty());
  for (const Point& p : pts) {
    EXPECT_LT(std::sqrt(detail::norm2(p)), 0.5 * std::sin(1.0));
    EXPECT_EQ(p[2], 0.0);
  }
}
