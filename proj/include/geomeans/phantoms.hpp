#ifndef GEOMEANS_PHANTOMS_HPP
#define GEOMEANS_PHANTOMS_HPP

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "spaces.hpp"

namespace geomeans {

/** \brief exp(1 - 1/(1 - s^2)) for |s| < 1, zero otherwise. */
inline double bump_profile(double s) {
  const double q = 1.0 - s * s;
  if (!(q > 0.0)) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

/** \brief Smooth bump of geodesic radius `radius` around `center`. */
struct Bump {
  Point center;
  double radius = 0.5;
  double amplitude = 1.0;
};

struct Phantom {
  SpaceSpec space;
  std::vector<Bump> bumps;
};

/** \brief Smallest gap between a bump ball and the boundary of B; throws if not positive. */
inline double support_margin(const Phantom& ph) {
  if (ph.bumps.empty()) throw std::invalid_argument("phantom: needs at least one bump");
  const Point o = origin(ph.space);
  double margin = std::numeric_limits<double>::infinity();
  for (const Bump& b : ph.bumps) {
    check_point(ph.space, b.center);
    if (!(b.radius > 0.0)) throw std::invalid_argument("phantom: bump radius must be positive");
    margin = std::min(margin, ph.space.radius - distance(ph.space, b.center, o) - b.radius);
  }
  if (!(margin > 0.0))
    throw std::domain_error("phantom: bump support reaches the boundary of B (margin " + std::to_string(margin) + ")");
  return margin;
}

/**
 * \brief Checks the phantom: bumps on the space, positive margin, and margin at
 * least 0.05 times the radius of B.
 */
inline void validate(const Phantom& ph) {
  ph.space.validate();
  support_margin(ph);
  const Point o = origin(ph.space);
  for (const Bump& b : ph.bumps) {
    const double m = ph.space.radius - distance(ph.space, b.center, o) - b.radius;
    if (m < 0.05 * ph.space.radius)
      throw std::domain_error("phantom: bump margin " + std::to_string(m) + " below 0.05 of the radius of B");
  }
}

inline double eval(const Phantom& ph, std::span<const double> p) {
  double v = 0.0;
  for (const Bump& b : ph.bumps) {
    const double s = distance(ph.space, p, b.center) / b.radius;
    if (s < 1.0) v += b.amplitude * bump_profile(s);
  }
  return v;
}

/** \brief Phantom value at a chart point x' (lifted to the space). */
inline double eval_chart(const Phantom& ph, std::span<const double> chart) {
  const Point p = lift(ph.space, chart);
  return eval(ph, p);
}

/** \brief Integral of the phantom over the space with its invariant measure. */
inline double phantom_integral(const Phantom& ph, int order = 64) {
  const int n = ph.space.n;
  const QuadratureRule gl = gauss_legendre(order, 0.0, 1.0);
  const double sigma = unit_sphere_area(n - 1);
  double total = 0.0;
  for (const Bump& b : ph.bumps) {
    double s = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double r = b.radius * gl.nodes[i];
      double jac = r;
      if (ph.space.kind == SpaceKind::sphere) jac = std::sin(r);
      if (ph.space.kind == SpaceKind::hyperbolic) jac = std::sinh(r);
      s += gl.weights[i] * bump_profile(gl.nodes[i]) * std::pow(jac, n - 1);
    }
    total += b.amplitude * sigma * b.radius * s;
  }
  return total;
}

/**
 * \brief Laplacian of a Euclidean phantom: (w'' + (n-1) w'/s)/rho^2 per bump,
 * w(s) = exp(1 - 1/(1-s^2)), s = |p - c|/rho.
 */
inline double euclidean_laplacian(const Phantom& ph, std::span<const double> p) {
  if (ph.space.kind != SpaceKind::euclidean) throw std::invalid_argument("euclidean_laplacian: Euclidean phantom required");
  check_point(ph.space, p);
  const int n = ph.space.n;
  double total = 0.0;
  for (const Bump& b : ph.bumps) {
    const double s = std::sqrt(detail::dist2(p, b.center)) / b.radius;
    if (s >= 1.0) continue;
    const double q = 1.0 - s * s;
    const double w = bump_profile(s);
    const double w1_over_s = -2.0 * w / (q * q);
    const double w2 = -2.0 * w / (q * q) + 4.0 * s * s * w / (q * q * q * q) - 8.0 * s * s * w / (q * q * q);
    total += b.amplitude * (w2 + (n - 1) * w1_over_s) / (b.radius * b.radius);
  }
  return total;
}

/**
 * \brief One bump of radius R/2 centred at (0.2R, 0.1R) in the Euclidean ball;
 * in the curved spaces radius 1/2 at geodesic distance 0.2 along x_1.
 */
inline Phantom default_phantom(const SpaceSpec& s) {
  s.validate();
  Point chart(s.n, 0.0);
  double radius = 0.5;
  switch (s.kind) {
    case SpaceKind::euclidean:
      chart[0] = 0.2 * s.radius;
      chart[1] = 0.1 * s.radius;
      radius = 0.5 * s.radius;
      break;
    case SpaceKind::sphere: chart[0] = std::sin(0.2); break;
    case SpaceKind::hyperbolic: chart[0] = std::sinh(0.2); break;
  }
  Phantom ph{s, {{lift(s, chart), radius, 1.0}}};
  validate(ph);
  return ph;
}

}  // namespace geomeans

#endif
