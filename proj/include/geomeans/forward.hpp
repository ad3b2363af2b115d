#ifndef GEOMEANS_FORWARD_HPP
#define GEOMEANS_FORWARD_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fractional.hpp"
#include "phantoms.hpp"
#include "profile.hpp"
#include "quadrature.hpp"
#include "spaces.hpp"

namespace geomeans {

/** \brief Sampled means (or EPD traces) on boundary centres x t-grid. */
struct MeanData {
  SpaceSpec space;
  BoundaryGrid boundary;
  TGrid tgrid;
  std::vector<double> values;  ///< row-major, one row of tgrid.size() per centre
  std::optional<double> alpha;

  std::size_t centers() const { return boundary.size(); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * tgrid.size(), tgrid.size()}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * tgrid.size(), tgrid.size()}; }
  SampledProfile profile(std::size_t i) const {
    const auto r = row(i);
    return {tgrid, std::vector<double>(r.begin(), r.end())};
  }
  void set_profile(std::size_t i, const SampledProfile& p) { std::copy(p.values.begin(), p.values.end(), row(i).begin()); }

  void validate() const {
    space.validate();
    if (!(boundary.space == space)) throw std::invalid_argument("MeanData: boundary grid belongs to another space");
    check_tgrid(space, tgrid);
    if (values.size() != boundary.size() * tgrid.size())
      throw std::invalid_argument("MeanData: value count does not match centres x t-grid");
    for (double v : values)
      if (!std::isfinite(v)) throw std::domain_error("MeanData: non-finite value");
  }
};

/**
 * \brief A function of geodesic distance to `center`, vanishing beyond `support`.
 */
struct RadialSource {
  Point center;
  double support = 0.0;
  std::function<double(double)> profile;
};

inline std::vector<RadialSource> radial_sources(const Phantom& ph) {
  std::vector<RadialSource> out;
  for (const Bump& b : ph.bumps) {
    const double rho = b.radius, a = b.amplitude;
    out.push_back({b.center, rho, [rho, a](double r) { return a * bump_profile(r / rho); }});
  }
  return out;
}

namespace detail {

// \int_0^pi sin^{k} psi dpsi
inline double sine_power_integral(int k) {
  return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (k + 1)) / std::tgamma(0.5 * k + 1.0);
}

}  // namespace detail

/**
 * \brief Normalized mean of a radial source over the section around xi at t.
 *
 * The source depends only on the polar angle psi between the node direction
 * and the direction of its centre, so the mean reduces to
 *   \int_0^{psi_max} g(dist(psi)) sin^{n-2} psi dpsi / \int_0^pi sin^{n-2} psi dpsi,
 * integrated with Gauss-Legendre on the support arc [0, psi_max].
 */
inline double radial_section_mean(const SpaceSpec& s, std::span<const double> xi, double t, const RadialSource& src,
                                  const QuadratureRule& ref) {
  const RadialSection rs = radial_section(s, xi, t, src.center);
  const double cb = rs.cos_bound(src.support);
  if (cb >= 1.0) return 0.0;
  const double psi_max = cb <= -1.0 ? std::numbers::pi : std::acos(cb);
  const double half = 0.5 * psi_max;
  double sum = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const double psi = half * (1.0 + ref.nodes[k]);
    const double r = rs.distance(std::cos(psi));
    if (r >= src.support) continue;
    double w = ref.weights[k];
    if (s.n > 2) w *= std::pow(std::sin(psi), s.n - 2);
    sum += w * src.profile(r);
  }
  return sum * half / detail::sine_power_integral(s.n - 2);
}

/** \brief Means of a sum of radial sources on boundary centres x t-grid. */
inline MeanData forward_radial(const SpaceSpec& s, const std::vector<RadialSource>& sources, const BoundaryGrid& boundary,
                               const TGrid& tgrid, int order) {
  if (order < 1) throw std::invalid_argument("forward: quadrature order must be >= 1");
  check_tgrid(s, tgrid);
  if (!(boundary.space == s)) throw std::invalid_argument("forward: boundary grid belongs to another space");
  MeanData data{s, boundary, tgrid, std::vector<double>(boundary.size() * tgrid.size(), 0.0), std::nullopt};
  const QuadratureRule ref = gauss_legendre(order);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const auto xi = boundary.center(i);
    auto row = data.row(i);
    for (const RadialSource& src : sources) {
      // t-range where the section can meet the source ball
      const double d = distance(s, xi, src.center);
      double lo = d - src.support, hi = d + src.support;
      double tlo = lo, thi = hi;
      if (s.kind == SpaceKind::sphere) {
        tlo = std::cos(std::min(hi, std::numbers::pi));
        thi = std::cos(std::max(lo, 0.0));
      } else if (s.kind == SpaceKind::hyperbolic) {
        tlo = std::cosh(std::max(lo, 0.0));
        thi = std::cosh(hi);
      }
      for (std::size_t j = 0; j < tgrid.size(); ++j) {
        const double t = tgrid[j];
        if (t <= tlo || t >= thi) continue;
        row[j] += radial_section_mean(s, xi, t, src, ref);
      }
    }
  }
  return data;
}

/** \brief Spherical means of a phantom; `order` Gauss-Legendre nodes across each support arc. */
inline MeanData forward_means(const Phantom& ph, const BoundaryGrid& boundary, const TGrid& tgrid, int order = 48) {
  support_margin(ph);
  return forward_radial(ph.space, radial_sources(ph), boundary, tgrid, order);
}

/**
 * \brief Means of an arbitrary field through the full section rule, `order`
 * points per angle of S^{n-1}.  Slow; meant for cross-checks.
 */
template <class Field>
MeanData forward_field(const SpaceSpec& s, const Field& f, const BoundaryGrid& boundary, const TGrid& tgrid, int order) {
  check_tgrid(s, tgrid);
  MeanData data{s, boundary, tgrid, std::vector<double>(boundary.size() * tgrid.size(), 0.0), std::nullopt};
  for (std::size_t i = 0; i < boundary.size(); ++i)
    for (std::size_t j = 0; j < tgrid.size(); ++j) {
      const WeightedPoints q = section_quadrature(s, boundary.center(i), tgrid[j], order);
      double v = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) v += q.weights[k] * f(q.point(k));
      data.row(i)[j] = v;
    }
  return data;
}

/**
 * \brief Euclidean EPD traces u = Gamma(alpha+n/2)/Gamma(n/2) I_eta^alpha (means),
 * eta = n/2 - 1, for alpha >= (1-n)/2.
 */
inline MeanData epd_from_means(const MeanData& means, double alpha) {
  const SpaceSpec& s = means.space;
  if (s.kind != SpaceKind::euclidean) throw std::invalid_argument("epd_from_means: Euclidean data required");
  if (alpha < 0.5 * (1 - s.n) - 1e-12)
    throw std::domain_error("epd trace: alpha must be >= (1-n)/2, got " + std::to_string(alpha));
  MeanData out = means;
  out.alpha = alpha;
  if (alpha == 0.0) return out;
  const double eta = 0.5 * s.n - 1.0;
  const double scale = std::tgamma(alpha + 0.5 * s.n) / std::tgamma(0.5 * s.n);
  const ErdelyiKoberOperator op(means.tgrid, {eta, alpha});
  for (std::size_t i = 0; i < means.centers(); ++i) {
    SampledProfile u = op.apply(means.profile(i));
    for (double& v : u.values) v *= scale;
    out.set_profile(i, u);
  }
  return out;
}

inline MeanData epd_trace_euclidean(const Phantom& ph, const BoundaryGrid& boundary, const TGrid& tgrid, double alpha,
                                    int order = 48) {
  if (ph.space.kind != SpaceKind::euclidean) throw std::invalid_argument("epd_trace_euclidean: Euclidean phantom required");
  if (alpha < 0.5 * (1 - ph.space.n) - 1e-12)
    throw std::domain_error("epd_trace_euclidean: alpha must be >= (1-n)/2, got " + std::to_string(alpha));
  return epd_from_means(forward_means(ph, boundary, tgrid, order), alpha);
}

/** \brief c_{n,alpha} sigma_{n-1} Gamma(alpha): ratio between the spherical trace and (1-t^2)^{1-alpha-n/2} I_-^alpha F. */
inline double sphere_epd_factor(int n, double alpha) {
  return std::pow(2.0, alpha - 1.0) * std::pow(std::numbers::pi, -0.5 * n) * std::tgamma(alpha + 0.5 * n) *
         unit_sphere_area(n - 1);
}

/**
 * \brief Spherical EPD traces g(xi, arccos t) from plain means, alpha > 0:
 * F = M (1-t^2)^{n/2-1}, G = I_-^alpha F, g = c sigma Gamma(alpha) (1-t^2)^{1-alpha-n/2} G.
 */
inline MeanData sphere_epd_from_means(const MeanData& means, double alpha) {
  const SpaceSpec& s = means.space;
  if (s.kind != SpaceKind::sphere) throw std::invalid_argument("sphere_epd_from_means: spherical data required");
  if (!(alpha > 0.0)) throw std::domain_error("spherical EPD traces are generated only for alpha > 0");
  MeanData out = means;
  out.alpha = alpha;
  const double n = s.n;
  const double factor = sphere_epd_factor(s.n, alpha);
  const RiemannLiouvilleOperator rl(means.tgrid, alpha);
  for (std::size_t i = 0; i < means.centers(); ++i) {
    const SampledProfile F = multiply(means.profile(i), [&](double t) { return std::pow(1.0 - t * t, 0.5 * n - 1.0); });
    const SampledProfile G = rl.apply(F);
    out.set_profile(i, multiply(G, [&](double t) { return factor * std::pow(1.0 - t * t, 1.0 - alpha - 0.5 * n); }));
  }
  return out;
}

inline MeanData epd_trace_sphere(const Phantom& ph, const BoundaryGrid& boundary, const TGrid& tgrid, double alpha,
                                 int order = 48) {
  if (ph.space.kind != SpaceKind::sphere) throw std::invalid_argument("epd_trace_sphere: spherical phantom required");
  if (!(alpha > 0.0)) throw std::domain_error("epd_trace_sphere: forward generation needs alpha > 0");
  return sphere_epd_from_means(forward_means(ph, boundary, tgrid, order), alpha);
}

}  // namespace geomeans

#endif
