#ifndef GEOMEANS_VERIFY_HPP
#define GEOMEANS_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "formats.hpp"
#include "forward.hpp"
#include "fractional.hpp"
#include "inversion.hpp"
#include "laplacian.hpp"
#include "phantoms.hpp"
#include "potentials.hpp"
#include "special.hpp"

namespace geomeans {

/** \brief One numerical check: |computed - expected| <= tolerance (scaled by |expected| if relative). */
struct Check {
  enum class Mode { absolute, relative, below };
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Mode mode = Mode::absolute;

  bool passed() const {
    if (!std::isfinite(computed)) return false;
    switch (mode) {
      case Mode::absolute: return std::abs(computed - expected) <= tolerance;
      case Mode::relative: return std::abs(computed - expected) <= tolerance * std::abs(expected);
      case Mode::below: return computed < expected - tolerance;
    }
    return false;
  }
};

inline void print_check(std::ostream& out, const Check& c) {
  const char* tol_kind = c.mode == Check::Mode::relative ? "rel_tol" : c.mode == Check::Mode::below ? "margin" : "abs_tol";
  out << c.name << "  computed " << format_double(c.computed) << "  expected " << format_double(c.expected) << "  "
      << tol_kind << ' ' << format_double(c.tolerance) << "  " << (c.passed() ? "PASS" : "FAIL") << '\n';
}

namespace detail {

inline std::string fmt_short(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace detail

/** \brief Largest |h| over random pairs drawn uniformly from the chart ball of geodesic radius 0.9 R. */
inline double max_h_random_pairs(const SpaceSpec& s, std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double r = 0.9 * s.radius;
  if (s.kind == SpaceKind::sphere) r = std::sin(0.9 * s.radius);
  if (s.kind == SpaceKind::hyperbolic) r = std::sinh(0.9 * s.radius);
  auto draw = [&] {
    Point p(s.n);
    do {
      for (double& v : p) v = r * u(rng);
    } while (detail::norm2(p) >= r * r);
    return s.kind == SpaceKind::euclidean ? p : lift(s, p);
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const Point x = draw(), y = draw();
    if (detail::dist2(x, y) < 1e-24) continue;
    worst = std::max(worst, std::abs(h_parameter(s, x, y)));
  }
  return worst;
}

/** \brief Closed-form lemmas: g_alpha continuation, log-circle integral, Chebyshev p.v., regularized power integral, h bound. */
inline std::vector<Check> lemma_checks(std::uint64_t seed = 1) {
  std::vector<Check> out;
  const std::vector<double> hs{-0.9, -0.5, 0.0, 0.4, 0.8};
  for (int n = 3; n <= 6; ++n) {
    const double expected = std::tgamma(0.5 * (n - 1));
    double worst = expected;
    for (double h : hs) {
      const double v = g_alpha_continued(n, 3.0 - n, h);
      if (std::abs(v - expected) >= std::abs(worst - expected)) worst = v;
    }
    out.push_back({"g_alpha_limit n=" + std::to_string(n), worst, expected, 1e-6, Check::Mode::relative});
  }
  for (double a : {0.5, 1.0, 1.7})
    for (int n = 3; n <= 5; ++n) {
      double worst = 0.0;
      for (double h : {-0.6, 0.0, 0.7}) worst = std::max(worst, std::abs(g_alpha_direct(n, a, h) - g_alpha_continued(n, a, h)));
      out.push_back({"g_alpha_direct_vs_continued alpha=" + detail::fmt_short(a) + " n=" + std::to_string(n), worst, 0.0,
                     1e-8, Check::Mode::absolute});
    }
  const double g_star = -2.0 * std::numbers::pi * std::log(2.0);
  for (double h : {-0.9, 0.0, 0.5})
    out.push_back({"log_circle_integral h=" + detail::fmt_short(h), log_circle_integral(h), g_star, 1e-8, Check::Mode::absolute});
  for (int k = 1; k <= 6; ++k)
    for (double h : {-0.7, 0.0, 0.3, 0.8})
      out.push_back({"chebyshev_pv degree=" + std::to_string(k) + " h=" + detail::fmt_short(h), chebyshev_pv(k, h),
                     std::numbers::pi * chebyshev_u(k - 1, h), 1e-6, Check::Mode::absolute});
  const GaussianProfile g;
  for (double a : {-4.0, -3.0, -2.0, -1.0})
    out.push_back({"regularized_power_gaussian alpha=" + detail::fmt_short(a), regularized_power_integral(g, a), 1.0, 1e-6,
                   Check::Mode::absolute});
  for (int m : {1, 2}) {
    const double a = 1.0 - 2.0 * m;
    out.push_back({"regularized_power_log_form alpha=" + detail::fmt_short(a), regularized_power_integral(g, a),
                   log_form_integral(g, m), 1e-6, Check::Mode::absolute});
  }
  for (int m : {1, 2})
    out.push_back({"regularized_power_even_pole m=" + std::to_string(m), regularized_power_integral(g, -2.0 * m),
                   c_m1(m) * g.derivative(2 * m, 0.0), 1e-6, Check::Mode::absolute});
  for (SpaceKind k : {SpaceKind::euclidean, SpaceKind::sphere, SpaceKind::hyperbolic}) {
    const SpaceSpec s(k, 3, 1.0);
    out.push_back({std::string("h_bound space=") + to_string(k), max_h_random_pairs(s, 10000, seed), 1.0, 0.0,
                   Check::Mode::below});
  }
  return out;
}

/** \brief Potential identities, the means representations of the potentials, and the Darboux property. */
inline std::vector<Check> identity_checks() {
  std::vector<Check> out;
  {
    const SpaceSpec s(SpaceKind::euclidean, 3, 1.0);
    const Phantom ph = default_phantom(s);
    for (const Point& x : std::vector<Point>{{0.25, 0.05, 0.1}, {0.0, 0.2, -0.1}, {0.45, 0.15, 0.0}}) {
      const double lap = laplacian_fd([&](std::span<const double> y) { return riesz_potential(ph, y); }, x, 1e-2);
      out.push_back({"riesz_potential_laplacian n=3 x=" + detail::fmt_short(x[0]) + "," + detail::fmt_short(x[1]) + "," +
                         detail::fmt_short(x[2]),
                     -lap, eval(ph, x), 1e-2, Check::Mode::relative});
    }
    const MeanData md = forward_means(ph, boundary_grid(s, 48), default_tgrid(s, 400));
    const InversionConstants c = constants(s);
    const double i2 = std::tgamma(0.5) / (4.0 * std::pow(std::numbers::pi, 1.5));
    for (const Point& x : std::vector<Point>{{0.25, 0.05, 0.1}, {0.0, 0.2, -0.1}}) {
      out.push_back({"riesz_from_means n=3 x=" + detail::fmt_short(x[0]) + "," + detail::fmt_short(x[1]) + "," +
                         detail::fmt_short(x[2]),
                     riesz_from_means(md, x), c.lambda * riesz_potential(ph, x) / i2, 1e-6, Check::Mode::absolute});
    }
    // Darboux: Laplacian in the centre of the means equals the means of the Laplacian
    std::vector<RadialSource> lap_sources;
    for (const Bump& b : ph.bumps) {
      Phantom single{s, {b}};
      lap_sources.push_back({b.center, b.radius, [single, b](double r) {
                               Point p = b.center;
                               p[0] += r;
                               return euclidean_laplacian(single, p);
                             }});
    }
    const QuadratureRule ref = gauss_legendre(64);
    const std::vector<std::pair<Point, double>> samples{
        {{0.0, 0.0, 0.0}, 0.3}, {{0.1, -0.2, 0.1}, 0.45}, {{0.6, 0.0, 0.0}, 0.5}, {{0.9, 0.3, -0.2}, 0.9}, {{0.2, 0.1, 0.5}, 0.2}};
    for (const auto& [x, t] : samples) {
      auto mean_at = [&](std::span<const double> y, const std::vector<RadialSource>& src) {
        double v = 0.0;
        for (const RadialSource& r : src) v += radial_section_mean(s, y, t, r, ref);
        return v;
      };
      const auto plain = radial_sources(ph);
      // Richardson on the 7-point stencil removes its O(h^2) error
      auto lap = [&](double h) { return laplacian_fd([&](std::span<const double> y) { return mean_at(y, plain); }, x, h); };
      const double lhs = (4.0 * lap(5e-3) - lap(1e-2)) / 3.0;
      const double rhs = mean_at(x, lap_sources);
      out.push_back({"darboux n=3 t=" + detail::fmt_short(t) + " x=" + detail::fmt_short(x[0]) + "," +
                         detail::fmt_short(x[1]) + "," + detail::fmt_short(x[2]),
                     lhs, rhs, 1e-3, Check::Mode::relative});
    }
  }
  {
    const SpaceSpec s(SpaceKind::euclidean, 2, 1.5);
    const Phantom ph = default_phantom(s);
    const MeanData md = forward_means(ph, boundary_grid(s, 256), default_tgrid(s, 800));
    const double I = phantom_integral(ph);
    for (const Point& x : std::vector<Point>{{0.25, 0.05}, {0.0, 0.4}, {0.6, 0.3}}) {
      const std::string at = detail::fmt_short(x[0]) + "," + detail::fmt_short(x[1]);
      const double lap = laplacian_fd([&](std::span<const double> y) { return log_potential(ph, y); }, x, 1e-2);
      out.push_back({"log_potential_laplacian n=2 x=" + at, lap, eval(ph, x), 1e-2,
                     Check::Mode::absolute});
      out.push_back({"log_potential_from_means euclidean x=" + at, log_potential_from_means(md, x, I), log_potential(ph, x),
                     1e-3, Check::Mode::absolute});
    }
  }
  for (SpaceKind k : {SpaceKind::sphere, SpaceKind::hyperbolic}) {
    const SpaceSpec s(k, 2, 1.0);
    const Phantom ph = default_phantom(s);
    const MeanData md = forward_means(ph, boundary_grid(s, 256), default_tgrid(s, 600));
    const double I = phantom_integral(ph);
    for (const Point& x : std::vector<Point>{{0.25, 0.05}, {0.0, 0.4}, {-0.3, -0.2}}) {
      out.push_back({std::string("log_potential_from_means ") + to_string(k) + " x=" + detail::fmt_short(x[0]) + "," +
                         detail::fmt_short(x[1]),
                     log_potential_from_means(md, x, I), curved_log_potential(ph, x), 1e-3, Check::Mode::absolute});
    }
  }
  return out;
}

namespace detail {

inline double sup_diff(const SampledProfile& a, const SampledProfile& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a.values[i] - b.values[i]));
  return e;
}

}  // namespace detail

/** \brief Erdelyi-Kober and Riemann-Liouville identities and round trips. */
inline std::vector<Check> fractional_checks() {
  std::vector<Check> out;
  const TGrid g(1e-3, 2.0, 800);
  const SampledProfile phi = sample(g, [](double t) { return bump_profile((t - 1.0) / 0.5); });
  for (double eta : {0.0, 0.5}) {
    const SampledProfile one = sample(g, [](double) { return 1.0; });
    const SampledProfile r = erdelyi_kober(one, {eta, 1.0});
    double worst = 0.0;
    // the integral starts at the first node t0: exact value (1 - (t0/t)^{2 eta + 2})/(eta + 1)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double exact = (1.0 - std::pow(g.first() / g[i], 2.0 * eta + 2.0)) / (eta + 1.0);
      worst = std::max(worst, std::abs(r.values[i] - exact));
    }
    out.push_back({"erdelyi_kober_constant eta=" + detail::fmt_short(eta), worst, 0.0, 1e-8, Check::Mode::absolute});
  }
  for (double a : {0.5, 1.0, 1.5}) {
    const double eta = 0.5;
    const SampledProfile fwd = erdelyi_kober(phi, {eta, a});
    const SampledProfile back = erdelyi_kober_ac(fwd, {eta + a, -a});
    out.push_back({"erdelyi_kober_roundtrip alpha=" + detail::fmt_short(a), detail::sup_diff(back, phi), 0.0, 1e-4,
                   Check::Mode::absolute});
  }
  const TGrid gs(-0.999, 0.999, 800);
  const SampledProfile u = sample(gs, [](double t) { return bump_profile(t / 0.5); });
  {
    const SampledProfile one = sample(gs, [](double) { return 1.0; });
    const SampledProfile r = riemann_liouville_right(one, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < gs.size(); ++i) worst = std::max(worst, std::abs(r.values[i] - (gs.last() - gs[i])));
    out.push_back({"riemann_liouville_constant alpha=1", worst, 0.0, 1e-8, Check::Mode::absolute});
  }
  for (double a : {0.5, 1.0, 1.5}) {
    const SampledProfile back = riemann_liouville_right(riemann_liouville_right(u, a), -a);
    out.push_back({"riemann_liouville_roundtrip alpha=" + detail::fmt_short(a), detail::sup_diff(back, u), 0.0, 1e-4,
                   Check::Mode::absolute});
  }
  return out;
}

}  // namespace geomeans

#endif
