#ifndef GEOMEANS_POTENTIALS_HPP
#define GEOMEANS_POTENTIALS_HPP

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "forward.hpp"
#include "log_kernel.hpp"
#include "phantoms.hpp"
#include "quadrature.hpp"
#include "spaces.hpp"

namespace geomeans {

namespace detail {

// \int_0^inf k(r) M_x(r) dr for the Euclidean means of a phantom around an arbitrary point x
template <class Kernel>
double radial_moment(const Phantom& ph, std::span<const double> x, Kernel&& k) {
  const SpaceSpec& s = ph.space;
  if (s.kind != SpaceKind::euclidean) throw std::invalid_argument("radial_moment: Euclidean phantom required");
  static const QuadratureRule ref = gauss_legendre(20);
  static const QuadratureRule psi_rule = gauss_legendre(64);
  double total = 0.0;
  for (const RadialSource& src : radial_sources(ph)) {
    const double d = std::sqrt(dist2(x, src.center));
    const double lo = std::max(0.0, d - src.support), hi = d + src.support;
    auto integrand = [&](double r) { return r > 0.0 ? k(r) * radial_section_mean(s, x, r, src, psi_rule) : 0.0; };
    const int panels = 16;
    const double w = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      if (p == 0 && lo == 0.0)
        total += integrate_graded_from_zero(ref, integrand, w, 1e-12);
      else
        total += integrate(ref, integrand, lo + p * w, lo + (p + 1) * w);
    }
  }
  return total;
}

}  // namespace detail

/**
 * \brief Riesz potential I^2 f(x) = Gamma(n/2-1)/(4 pi^{n/2}) \int f(y)|x-y|^{2-n} dy, n >= 3,
 * written as sigma_{n-1} \int_0^inf r M_x(r) dr through the means around x.
 */
inline double riesz_potential(const Phantom& ph, std::span<const double> x) {
  const int n = ph.space.n;
  if (n < 3) throw std::invalid_argument("riesz_potential: n must be >= 3; use log_potential for n = 2");
  const double c = std::tgamma(0.5 * n - 1.0) / (4.0 * std::pow(std::numbers::pi, 0.5 * n));
  return c * unit_sphere_area(n - 1) * detail::radial_moment(ph, x, [](double r) { return r; });
}

/** \brief I_* f(x) = (1/2 pi) \int f(y) log|x-y| dy in the plane, = \int_0^inf r log r M_x(r) dr. */
inline double log_potential(const Phantom& ph, std::span<const double> x) {
  if (ph.space.n != 2) throw std::invalid_argument("log_potential: n must be 2");
  return detail::radial_moment(ph, x, [](double r) { return r * std::log(r); });
}

/**
 * \brief Curved-space I_* f(x) = (1/2 pi) \int_B f(y) log|x'-y'| dy for n = 2 with the
 * invariant area element, which in the chart is dy'/y_3.
 *
 * Polar coordinates around x' in the chart; `euclidean_area` switches to the
 * Euclidean area element of the embedded surface, (|y|/y_3) dy' on the
 * hyperboloid, for comparison.
 */
inline double curved_log_potential(const Phantom& ph, std::span<const double> chart, bool euclidean_area = false) {
  const SpaceSpec& s = ph.space;
  if (s.kind == SpaceKind::euclidean || s.n != 2)
    throw std::invalid_argument("curved_log_potential: two-dimensional sphere or hyperbolic phantom required");
  static const QuadratureRule ref = gauss_legendre(20);
  const double rc = s.chart_radius();
  const double r_hi = std::sqrt(detail::norm2(chart)) + rc;
  const int angles = 256, panels = 24;
  Point y(2);
  double total = 0.0;
  for (int a = 0; a < angles; ++a) {
    const double beta = 2.0 * std::numbers::pi * a / angles;
    const double cb = std::cos(beta), sb = std::sin(beta);
    auto integrand = [&](double r) {
      y[0] = chart[0] + r * cb;
      y[1] = chart[1] + r * sb;
      const double q = detail::norm2(y);
      if (q >= rc * rc) return 0.0;
      const Point full = lift(s, y);
      double density = 1.0 / full[2];
      if (euclidean_area) density *= std::sqrt(q + full[2] * full[2]);
      return r * std::log(r) * eval(ph, full) * density;
    };
    const double w = r_hi / panels;
    double line = integrate_graded_from_zero(ref, integrand, w, 1e-12);
    for (int p = 1; p < panels; ++p) line += integrate(ref, integrand, p * w, (p + 1) * w);
    total += line;
  }
  return total / angles;  // (1/2pi) * (2pi/angles) * sum
}

/**
 * \brief Right-hand sides of the log-potential identities for n = 2 from sampled means:
 *   Euclidean: (1/(2 pi R)) \int_{dD} \int M(xi,t) log|t^2 - |x-xi|^2| t dt dxi - (log R/2pi) \int f,
 *   sphere:    (1/|dB|) \int \int M(xi,tau) log|tau - xi.x| dtau dxi - (1/2pi) log(sin(theta)/2) \int f,
 *   hyperbolic (1/|dB|) \int \int M(xi,tau) log|tau - [xi,x]| dtau dxi - (1/2pi) log(sinh(R)/2) \int f.
 * `f_integral` is \int_B f over the invariant measure; x is a chart point.
 */
inline double log_potential_from_means(const MeanData& data, std::span<const double> chart, double f_integral) {
  data.validate();
  const SpaceSpec& s = data.space;
  if (s.n != 2) throw std::invalid_argument("log_potential_from_means: n must be 2");
  const Point x = s.kind == SpaceKind::euclidean ? Point(chart.begin(), chart.end()) : lift(s, chart);
  const double pi = std::numbers::pi;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.centers(); ++i) {
    const auto xi = data.boundary.center(i);
    SampledProfile p = data.profile(i);
    double v;
    if (s.kind == SpaceKind::euclidean) {
      p = multiply(p, [](double t) { return t; });
      v = log_kernel_integral(p, std::sqrt(detail::dist2(x, xi)), LogKernel::difference_of_squares);
    } else {
      const double arg = s.kind == SpaceKind::sphere ? detail::dot(xi, x) : minkowski_form_unchecked(xi, x);
      v = log_kernel_integral(p, arg, LogKernel::difference);
    }
    sum += data.boundary.centers.weights[i] * v;
  }
  // normalized weights: (1/|dB|) \int_{dB} = sum_i w_i; the Euclidean prefactor 1/(2 pi R) times |dD| = 1 likewise
  double c_f = 0.0;
  switch (s.kind) {
    case SpaceKind::euclidean: c_f = -std::log(s.radius) / (2.0 * pi) * f_integral; break;
    case SpaceKind::sphere: c_f = -std::log(std::sin(s.radius) / 2.0) / (2.0 * pi) * f_integral; break;
    case SpaceKind::hyperbolic: c_f = -std::log(std::sinh(s.radius) / 2.0) / (2.0 * pi) * f_integral; break;
  }
  return sum + c_f;
}

/**
 * \brief Right-hand side of the Riesz-potential representation for odd n >= 3 from means:
 * (delta_n/(2 R^{n-1})) \int_{dB} D^{n-3}[t^{n-2} M](xi, |x-xi|) dxi, to be compared with
 * lambda_n \int_B f(y)|x-y|^{2-n} dy.
 */
inline double riesz_from_means(const MeanData& data, std::span<const double> x) {
  data.validate();
  const SpaceSpec& s = data.space;
  if (s.kind != SpaceKind::euclidean || s.n < 3 || s.n % 2 == 0)
    throw std::invalid_argument("riesz_from_means: odd n >= 3 Euclidean data required");
  const int n = s.n;
  const int k = static_cast<int>(std::floor(0.5 * n - 1.0));
  const double delta = (k % 2 == 0 ? 1.0 : -1.0) * std::tgamma(0.5 * (n - 1)) / std::tgamma(n - 2.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < data.centers(); ++i) {
    const SampledProfile p = d_operator(multiply(data.profile(i), [n](double t) { return std::pow(t, n - 2); }), n - 3);
    sum += data.boundary.centers.weights[i] * interpolate(p, std::sqrt(detail::dist2(x, data.boundary.center(i))));
  }
  return delta / (2.0 * std::pow(s.radius, n - 1)) * boundary_area(s) * sum;
}

}  // namespace geomeans

#endif
