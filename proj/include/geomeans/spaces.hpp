#ifndef GEOMEANS_SPACES_HPP
#define GEOMEANS_SPACES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "profile.hpp"
#include "quadrature.hpp"

namespace geomeans {

using Point = std::vector<double>;

enum class SpaceKind { euclidean, sphere, hyperbolic };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::sphere: return "sphere";
    case SpaceKind::hyperbolic: return "hyperbolic";
  }
  return "?";
}

/**
 * \brief Which space, its dimension, and the size of the ball B.
 *
 * radius is R for the Euclidean ball, the cap angle for the sphere and the
 * geodesic radius for the hyperbolic ball.
 */
struct SpaceSpec {
  SpaceKind kind = SpaceKind::euclidean;
  int n = 2;
  double radius = 1.0;

  SpaceSpec() = default;
  SpaceSpec(SpaceKind k, int dim, double r) : kind(k), n(dim), radius(r) { validate(); }

  void validate() const {
    if (n < 2) throw std::invalid_argument("SpaceSpec: dimension must be >= 2, got " + std::to_string(n));
    if (!(radius > 0.0)) throw std::invalid_argument("SpaceSpec: radius must be positive");
    if (kind == SpaceKind::sphere && radius > std::numbers::pi / 2 + 1e-15)
      throw std::invalid_argument("SpaceSpec: cap angle must not exceed pi/2");
  }

  /// length of coordinate vectors
  std::size_t ambient_dim() const { return kind == SpaceKind::euclidean ? n : n + 1; }

  /// radius of the chart ball x' that is the projection of B
  double chart_radius() const {
    switch (kind) {
      case SpaceKind::euclidean: return radius;
      case SpaceKind::sphere: return std::sin(radius);
      case SpaceKind::hyperbolic: return std::sinh(radius);
    }
    return radius;
  }

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

/** \brief Surface area of the unit sphere S^{k} in R^{k+1}. */
inline double unit_sphere_area(int k) {
  const double d = k + 1;
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

/** \brief Area of the boundary of B (not normalized). */
inline double boundary_area(const SpaceSpec& s) {
  const double sigma = unit_sphere_area(s.n - 1);
  switch (s.kind) {
    case SpaceKind::euclidean: return sigma * std::pow(s.radius, s.n - 1);
    case SpaceKind::sphere: return sigma * std::pow(std::sin(s.radius), s.n - 1);
    case SpaceKind::hyperbolic: return sigma * std::pow(std::sinh(s.radius), s.n - 1);
  }
  return 0.0;
}

/** \brief Default sampling of the radial/planar-section variable. */
inline TGrid default_tgrid(const SpaceSpec& s, std::size_t count = 0) {
  switch (s.kind) {
    case SpaceKind::euclidean: return {1e-3, 2.0 * s.radius - 1e-3, count ? count : 800};
    case SpaceKind::sphere: return {-1.0 + 1e-3, 1.0 - 1e-3, count ? count : 600};
    case SpaceKind::hyperbolic: return {1.0 + 1e-3, std::cosh(2.0 * s.radius), count ? count : 600};
  }
  return {};
}

/** \brief Throws unless the grid lies inside the admissible open t-range of the space. */
inline void check_tgrid(const SpaceSpec& s, const TGrid& g) {
  bool ok = true;
  switch (s.kind) {
    case SpaceKind::euclidean: ok = g.first() > 0.0; break;
    case SpaceKind::sphere: ok = g.first() > -1.0 && g.last() < 1.0; break;
    case SpaceKind::hyperbolic: ok = g.first() > 1.0; break;
  }
  if (!ok)
    throw std::domain_error("t-grid [" + std::to_string(g.first()) + ", " + std::to_string(g.last()) +
                            "] outside the admissible range for the " + to_string(s.kind) + " space");
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace detail

/** \brief Checks that a point has the right length and lies on the model surface. */
inline void check_point(const SpaceSpec& s, std::span<const double> x) {
  if (x.size() != s.ambient_dim())
    throw std::invalid_argument("point has " + std::to_string(x.size()) + " coordinates, the " +
                                to_string(s.kind) + " space needs " + std::to_string(s.ambient_dim()));
  if (s.kind == SpaceKind::sphere) {
    if (std::abs(detail::norm2(x) - 1.0) > 1e-12) throw std::domain_error("point is not on the unit sphere");
  } else if (s.kind == SpaceKind::hyperbolic) {
    const double last = x[s.n];
    const double q = last * last - detail::norm2(x.first(s.n));
    if (!(last > 0.0) || std::abs(q - 1.0) > 1e-12 * std::max(1.0, last * last))
      throw std::domain_error("point is not on the upper hyperboloid sheet");
  }
}

/** \brief Lifts a chart point x' (length n) to the space. */
inline Point lift(const SpaceSpec& s, std::span<const double> chart) {
  if (chart.size() != static_cast<std::size_t>(s.n))
    throw std::invalid_argument("chart point must have n coordinates");
  Point p(chart.begin(), chart.end());
  if (s.kind == SpaceKind::euclidean) return p;
  const double r2 = detail::norm2(chart);
  if (s.kind == SpaceKind::sphere) {
    if (r2 > 1.0) throw std::domain_error("chart point outside the unit ball cannot be lifted to the sphere");
    p.push_back(std::sqrt(1.0 - r2));
  } else {
    p.push_back(std::sqrt(1.0 + r2));
  }
  return p;
}

/** \brief Origin of the space: 0 or e_{n+1}. */
inline Point origin(const SpaceSpec& s) {
  Point p(s.ambient_dim(), 0.0);
  if (s.kind != SpaceKind::euclidean) p.back() = 1.0;
  return p;
}

/** \brief x_{n+1} y_{n+1} - x'.y' */
inline double minkowski_form_unchecked(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size() - 1;
  double s = x[n] * y[n];
  for (std::size_t i = 0; i < n; ++i) s -= x[i] * y[i];
  return s;
}

/** \brief Minkowski form [x, y] for points on the upper hyperboloid. */
inline double minkowski_form(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("minkowski_form: mismatched points");
  const SpaceSpec s(SpaceKind::hyperbolic, static_cast<int>(x.size()) - 1, 1.0);
  check_point(s, x);
  check_point(s, y);
  return minkowski_form_unchecked(x, y);
}

/** \brief Geodesic distance, computed through half-angle forms to stay accurate for nearby points. */
inline double distance(const SpaceSpec& s, std::span<const double> x, std::span<const double> y) {
  switch (s.kind) {
    case SpaceKind::euclidean: return std::sqrt(detail::dist2(x, y));
    case SpaceKind::sphere: return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(detail::dist2(x, y))));
    case SpaceKind::hyperbolic: {
      // [x-y, x-y] = 2 - 2 cosh d = -4 sinh^2(d/2)
      const std::size_t n = x.size() - 1;
      const double q = detail::dist2(x.first(n), y.first(n)) - (x[n] - y[n]) * (x[n] - y[n]);
      return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, q)));
    }
  }
  return 0.0;
}

/** \brief Points with weights, stored row-major (size() rows of dim() coordinates). */
struct WeightedPoints {
  std::size_t dim = 0;
  std::vector<double> coords;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
};

/**
 * \brief Product rule on the unit sphere S^{d-1} in R^d with weights summing to 1.
 *
 * d = 1 gives {-1, +1}; d = 2 gives `azimuth` equally spaced points; d >= 3
 * adds polar angles with `polar` Gauss-Legendre nodes each, weighted by
 * sin^{k-1} of the angle.
 */
inline WeightedPoints unit_sphere_rule(std::size_t d, std::size_t azimuth, std::size_t polar) {
  WeightedPoints r;
  r.dim = d;
  if (d == 0) throw std::invalid_argument("unit_sphere_rule: dimension must be >= 1");
  if (d == 1) {
    r.coords = {-1.0, 1.0};
    r.weights = {0.5, 0.5};
    return r;
  }
  if (d == 2) {
    if (azimuth < 1) throw std::invalid_argument("unit_sphere_rule: need at least one azimuth point");
    for (std::size_t k = 0; k < azimuth; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(azimuth);
      r.coords.push_back(std::cos(phi));
      r.coords.push_back(std::sin(phi));
      r.weights.push_back(1.0 / static_cast<double>(azimuth));
    }
    return r;
  }
  if (polar < 1) throw std::invalid_argument("unit_sphere_rule: need at least one polar node");
  const WeightedPoints sub = unit_sphere_rule(d - 1, azimuth, polar);
  const QuadratureRule gl = gauss_legendre(static_cast<int>(polar), 0.0, std::numbers::pi);
  std::vector<double> pw(polar);
  double total = 0.0;
  for (std::size_t j = 0; j < polar; ++j) {
    pw[j] = gl.weights[j] * std::pow(std::sin(gl.nodes[j]), static_cast<double>(d - 2));
    total += pw[j];
  }
  for (std::size_t j = 0; j < polar; ++j) {
    const double c = std::cos(gl.nodes[j]), sn = std::sin(gl.nodes[j]);
    for (std::size_t i = 0; i < sub.size(); ++i) {
      const auto y = sub.point(i);
      for (double v : y) r.coords.push_back(sn * v);
      r.coords.push_back(c);
      r.weights.push_back(sub.weights[i] * pw[j] / total);
    }
  }
  return r;
}

/** \brief Centres on the boundary of B with normalized quadrature weights. */
struct BoundaryGrid {
  SpaceSpec space;
  WeightedPoints centers;
  std::size_t resolution = 0;  ///< m passed to boundary_grid; 0 for hand-built grids

  std::size_t size() const { return centers.size(); }
  std::span<const double> center(std::size_t i) const { return centers.point(i); }
};

/**
 * \brief Boundary grid with m azimuthal points; for n >= 3 every polar angle
 * gets m/2 Gauss-Legendre nodes.
 */
inline BoundaryGrid boundary_grid(const SpaceSpec& s, std::size_t m) {
  s.validate();
  if (m < 4) throw std::invalid_argument("boundary_grid: need at least 4 points, got " + std::to_string(m));
  if (s.n >= 3 && m % 2 != 0)
    throw std::invalid_argument("boundary_grid: for n >= 3 the azimuthal count must be even to give m/2 polar nodes");
  const WeightedPoints dirs = unit_sphere_rule(s.n, m, m / 2);
  BoundaryGrid g;
  g.space = s;
  g.centers.dim = s.ambient_dim();
  g.centers.weights = dirs.weights;
  g.resolution = m;
  double scale = s.radius, last = 0.0;
  if (s.kind == SpaceKind::sphere) {
    scale = std::sin(s.radius);
    last = std::cos(s.radius);
  } else if (s.kind == SpaceKind::hyperbolic) {
    scale = std::sinh(s.radius);
    last = std::cosh(s.radius);
  }
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (double v : dirs.point(i)) g.centers.coords.push_back(scale * v);
    if (s.kind != SpaceKind::euclidean) g.centers.coords.push_back(last);
  }
  return g;
}

/**
 * \brief Frame of the geodesic sphere {y : section variable = t} around a centre.
 *
 * node(omega) maps a unit vector of R^n to the point of the section in the
 * direction omega.
 */
class SectionFrame {
 public:
  SectionFrame(const SpaceSpec& s, std::span<const double> center, double t)
      : space_(s), center_(center.begin(), center.end()), t_(t) {
    check_point(s, center);
    switch (s.kind) {
      case SpaceKind::euclidean:
        if (!(t > 0.0)) throw std::domain_error("section: Euclidean radius t must be positive");
        radius_ = t;
        break;
      case SpaceKind::sphere:
        if (!(t > -1.0 && t < 1.0)) throw std::domain_error("section: spherical t must lie in (-1, 1)");
        radius_ = std::sqrt((1.0 - t) * (1.0 + t));
        build_sphere_basis();
        break;
      case SpaceKind::hyperbolic:
        if (!(t > 1.0)) throw std::domain_error("section: hyperbolic t must exceed 1");
        radius_ = std::sqrt((t - 1.0) * (t + 1.0));
        break;
    }
  }

  void node(std::span<const double> omega, std::span<double> out) const {
    const std::size_t n = space_.n;
    switch (space_.kind) {
      case SpaceKind::euclidean:
        for (std::size_t k = 0; k < n; ++k) out[k] = center_[k] - t_ * omega[k];
        break;
      case SpaceKind::sphere:
        for (std::size_t k = 0; k <= n; ++k) {
          double v = t_ * center_[k];
          for (std::size_t j = 0; j < n; ++j) v += radius_ * omega[j] * basis_[j * (n + 1) + k];
          out[k] = v;
        }
        break;
      case SpaceKind::hyperbolic: {
        // boost taking e_{n+1} to the centre, applied to (radius*omega, t)
        const double gamma = center_[n];
        double pv = 0.0;
        for (std::size_t k = 0; k < n; ++k) pv += center_[k] * radius_ * omega[k];
        const double coef = pv / (1.0 + gamma) + t_;
        for (std::size_t k = 0; k < n; ++k) out[k] = radius_ * omega[k] + center_[k] * coef;
        out[n] = pv + gamma * t_;
        break;
      }
    }
  }

 private:
  void build_sphere_basis() {
    const std::size_t n = space_.n, d = n + 1;
    std::size_t skip = 0;
    for (std::size_t k = 1; k < d; ++k)
      if (std::abs(center_[k]) > std::abs(center_[skip])) skip = k;
    std::vector<std::vector<double>> done{center_};
    for (std::size_t k = 0; k < d; ++k) {
      if (k == skip) continue;
      std::vector<double> v(d, 0.0);
      v[k] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : done) {
          const double c = detail::dot(v, b);
          for (std::size_t i = 0; i < d; ++i) v[i] -= c * b[i];
        }
      const double nv = std::sqrt(detail::norm2(v));
      for (double& x : v) x /= nv;
      done.push_back(v);
      basis_.insert(basis_.end(), v.begin(), v.end());
    }
  }

  SpaceSpec space_;
  Point center_;
  double t_;
  double radius_ = 0.0;
  std::vector<double> basis_;
};

/**
 * \brief Nodes and weights for the normalized mean over the section around
 * `center` at parameter t; `order` points per angle of S^{n-1}.
 */
inline WeightedPoints section_quadrature(const SpaceSpec& s, std::span<const double> center, double t, int order) {
  if (order < 1) throw std::invalid_argument("section_quadrature: order must be >= 1");
  const SectionFrame frame(s, center, t);
  const WeightedPoints dirs = unit_sphere_rule(s.n, order, order);
  WeightedPoints out;
  out.dim = s.ambient_dim();
  out.weights = dirs.weights;
  out.coords.resize(dirs.size() * out.dim);
  for (std::size_t i = 0; i < dirs.size(); ++i)
    frame.node(dirs.point(i), std::span<double>(out.coords.data() + i * out.dim, out.dim));
  return out;
}

/**
 * \brief Distance from the nodes of a section to a fixed point c as a function of
 * the angle psi between the node direction and the direction towards c.
 *
 * Encodes Q(psi) = A + B cos(psi) with B <= 0, where Q is |y-c|^2 (Euclidean),
 * 1 - y.c (sphere) or [y,c] - 1 (hyperbolic).
 */
struct RadialSection {
  SpaceKind kind;
  double A = 0.0;
  double B = 0.0;

  double distance(double cos_psi) const { return distance_from_q(kind, std::max(0.0, A + B * cos_psi)); }

  /// cos(psi) above which the node is within geodesic distance rho of c; may lie outside [-1, 1]
  double cos_bound(double rho) const {
    const double q = q_from_distance(kind, rho);
    if (B == 0.0) return A < q ? -2.0 : 2.0;
    return (q - A) / B;
  }

  static double q_from_distance(SpaceKind k, double r) {
    switch (k) {
      case SpaceKind::euclidean: return r * r;
      case SpaceKind::sphere: return 2.0 * std::sin(0.5 * r) * std::sin(0.5 * r);
      case SpaceKind::hyperbolic: return 2.0 * std::sinh(0.5 * r) * std::sinh(0.5 * r);
    }
    return 0.0;
  }
  static double distance_from_q(SpaceKind k, double q) {
    switch (k) {
      case SpaceKind::euclidean: return std::sqrt(q);
      case SpaceKind::sphere: return 2.0 * std::asin(std::min(1.0, std::sqrt(0.5 * q)));
      case SpaceKind::hyperbolic: return 2.0 * std::asinh(std::sqrt(0.5 * q));
    }
    return 0.0;
  }
};

/** \brief RadialSection of the section around `center` at t, relative to point c. */
inline RadialSection radial_section(const SpaceSpec& s, std::span<const double> center, double t,
                                    std::span<const double> c) {
  RadialSection r{s.kind};
  switch (s.kind) {
    case SpaceKind::euclidean: {
      const double d = std::sqrt(detail::dist2(center, c));
      r.A = d * d + t * t;
      r.B = -2.0 * d * t;
      break;
    }
    case SpaceKind::sphere: {
      const double a = detail::dot(center, c);
      // |c - (c.xi) xi| = sin dist(xi, c)
      const double sd = std::sin(distance(s, center, c));
      r.A = 1.0 - t * a;
      r.B = -std::sqrt((1.0 - t) * (1.0 + t)) * sd;
      break;
    }
    case SpaceKind::hyperbolic: {
      const double m = minkowski_form_unchecked(center, c);
      const double sd = std::sinh(distance(s, center, c));
      r.A = t * m - 1.0;
      r.B = -std::sqrt((t - 1.0) * (t + 1.0)) * sd;
      break;
    }
  }
  return r;
}

/**
 * \brief The parameter h of the boundary kernel for a pair of interior points.
 *
 * Euclidean (|x|^2 - |y|^2)/(2R|x-y|); sphere (x_{n+1}-y_{n+1})/|x'-y'| cot(theta);
 * hyperbolic the same with coth(R).
 */
inline double h_parameter(const SpaceSpec& s, std::span<const double> x, std::span<const double> y) {
  check_point(s, x);
  check_point(s, y);
  const std::size_t n = s.n;
  const double sep = std::sqrt(detail::dist2(x.first(n), y.first(n)));
  if (!(sep > 1e-14)) throw std::domain_error("h_parameter: the two points have coincident projections");
  switch (s.kind) {
    case SpaceKind::euclidean: return (detail::norm2(x) - detail::norm2(y)) / (2.0 * s.radius * sep);
    case SpaceKind::sphere: return (x[n] - y[n]) / sep / std::tan(s.radius);
    case SpaceKind::hyperbolic: return (x[n] - y[n]) / sep / std::tanh(s.radius);
  }
  return 0.0;
}

}  // namespace geomeans

#endif
