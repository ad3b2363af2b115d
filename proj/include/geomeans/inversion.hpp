#ifndef GEOMEANS_INVERSION_HPP
#define GEOMEANS_INVERSION_HPP

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "forward.hpp"
#include "fractional.hpp"
#include "laplacian.hpp"
#include "log_kernel.hpp"
#include "phantoms.hpp"
#include "profile.hpp"
#include "spaces.hpp"

namespace geomeans {

/** \brief Constants of the inversion formulas for one space. NaN where a constant is undefined. */
struct InversionConstants {
  double sigma = 0.0;   ///< area of S^{n-1}
  double delta = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double d1 = std::numeric_limits<double>::quiet_NaN();   ///< Euclidean, odd n
  double d2 = std::numeric_limits<double>::quiet_NaN();   ///< Euclidean, even n
  double d1_epd = std::numeric_limits<double>::quiet_NaN();
  double d2_epd = std::numeric_limits<double>::quiet_NaN();
  double d_curved = std::numeric_limits<double>::quiet_NaN();
  double c_alpha = std::numeric_limits<double>::quiet_NaN();  ///< normalization of the spherical EPD kernel
};

inline InversionConstants constants(const SpaceSpec& s, std::optional<double> alpha = std::nullopt) {
  s.validate();
  const int n = s.n;
  const double pi = std::numbers::pi;
  const double R = s.radius;
  InversionConstants c;
  c.sigma = unit_sphere_area(n - 1);
  if (n >= 3) {
    const int k = static_cast<int>(std::floor(0.5 * n - 1.0));
    c.delta = (k % 2 == 0 ? 1.0 : -1.0) * std::tgamma(0.5 * (n - 1)) / std::tgamma(n - 2.0);
  }
  c.lambda = std::pow(2.0 * R, 2.0 - n) / std::sqrt(pi) * std::tgamma(0.5 * n);
  if (n % 2 == 1) {
    const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    c.d1 = sign * std::pow(pi, 1.0 - 0.5 * n) / (4.0 * R * std::tgamma(0.5 * n));
    if (alpha) c.d1_epd = sign * std::pow(pi, 1.0 - 0.5 * n) / (4.0 * R * std::tgamma(*alpha + 0.5 * n));
  } else {
    const double sign = (n / 2 - 1) % 2 == 0 ? 1.0 : -1.0;
    c.d2 = sign * std::pow(pi, -0.5 * n) / (2.0 * R * std::tgamma(0.5 * n));
    if (alpha) c.d2_epd = sign * std::pow(pi, -0.5 * n) / (2.0 * R * std::tgamma(*alpha + 0.5 * n));
  }
  {
    const int k = static_cast<int>(std::floor(0.5 * n - 1.0));
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    c.d_curved = sign / (std::pow(2.0, n - 1) * std::pow(pi, 0.5 * n - 1.0) * std::tgamma(0.5 * n));
  }
  if (alpha && *alpha > 0.0)
    c.c_alpha = std::pow(2.0, *alpha - 1.0) * std::pow(pi, -0.5 * n) * std::tgamma(*alpha + 0.5 * n) / std::tgamma(*alpha);
  return c;
}

/** \brief Boundary argument of a point: |x - xi|, xi.x or [xi, x]. */
inline double boundary_argument(SpaceKind kind, std::span<const double> xi, std::span<const double> x) {
  switch (kind) {
    case SpaceKind::euclidean: return std::sqrt(detail::dist2(xi, x));
    case SpaceKind::sphere: return detail::dot(xi, x);
    case SpaceKind::hyperbolic: return minkowski_form_unchecked(xi, x);
  }
  return 0.0;
}

/**
 * \brief Normalized back-projection x -> sum_i w_i F_i(arg(xi_i, x)) of per-centre
 * profiles sampled on the t-grid (cubic interpolation).
 *
 * Arguments off the grid count as zero when the profile vanishes at that end
 * of the grid and are an error otherwise.
 */
class Backprojection {
 public:
  Backprojection(const BoundaryGrid& boundary, std::vector<SampledProfile> profiles)
      : boundary_(boundary), profiles_(std::move(profiles)) {
    if (profiles_.size() != boundary_.size())
      throw std::invalid_argument("backproject: need one profile per boundary centre");
    support_.resize(profiles_.size());
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
      const auto& v = profiles_[i].values;
      double scale = 0.0;
      for (double x : v) scale = std::max(scale, std::abs(x));
      const double tiny = 1e-12 * scale;
      std::size_t lo = 0, hi = v.size();
      while (lo < v.size() && std::abs(v[lo]) <= tiny) ++lo;
      while (hi > lo && std::abs(v[hi - 1]) <= tiny) --hi;
      support_[i] = {lo, hi, std::abs(v.front()) <= tiny, std::abs(v.back()) <= tiny};
    }
  }

  const BoundaryGrid& boundary() const { return boundary_; }
  const std::vector<SampledProfile>& profiles() const { return profiles_; }

  /// x is a full point of the space
  double operator()(std::span<const double> x) const {
    const SpaceKind kind = boundary_.space.kind;
    double sum = 0.0;
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
      const double a = boundary_argument(kind, boundary_.center(i), x);
      sum += boundary_.centers.weights[i] * value(i, a);
    }
    return sum;
  }

  double value(std::size_t i, double t) const {
    const SampledProfile& p = profiles_[i];
    const TGrid& g = p.grid;
    const Support& sp = support_[i];
    if (t < g.first() || t > g.last()) {
      if ((t < g.first() && sp.zero_at_first) || (t > g.last() && sp.zero_at_last)) return 0.0;
      throw std::out_of_range("backproject: argument " + std::to_string(t) +
                              " outside the t-grid inside the data support");
    }
    const std::size_t n = g.size();
    const double u = (t - g.first()) / g.step();
    const std::size_t cell = std::min(static_cast<std::size_t>(u), n - 2);
    const std::size_t s = detail::stencil_start(cell, n);
    if (s + 4 <= sp.lo || s >= sp.hi) return 0.0;
    const auto w = detail::cubic_weights(u, static_cast<double>(s));
    return w[0] * p.values[s] + w[1] * p.values[s + 1] + w[2] * p.values[s + 2] + w[3] * p.values[s + 3];
  }

 private:
  struct Support {
    std::size_t lo, hi;
    bool zero_at_first, zero_at_last;
  };
  BoundaryGrid boundary_;
  std::vector<SampledProfile> profiles_;
  std::vector<Support> support_;
};

/** \brief sum_i w_i F(xi_i, arg) with F given per centre as profiles; x a full point. */
inline double backproject(const MeanData& data, const std::vector<SampledProfile>& F, std::span<const double> x) {
  return Backprojection(data.boundary, F)(x);
}

enum class Formula { direct, modified };

inline const char* to_string(Formula f) { return f == Formula::direct ? "direct" : "modified"; }

/** \brief Which chart weight multiplies the hyperbolic reconstruction. */
enum class HyperbolicWeight {
  invariant,  ///< f = d_n x_{n+1}/sinh R Lap f_0: chart density 1/x_{n+1} of the invariant measure
  surface,    ///< f = d_n x_{n+1}/(|x| sinh R) Lap f_0: Euclidean surface element of the hyperboloid
};

struct InversionOptions {
  Formula formula = Formula::direct;
  double fd_step = 0.0;  ///< 0 selects 1e-2 times the chart radius
  HyperbolicWeight hyperbolic_weight = HyperbolicWeight::invariant;
};

/**
 * \brief Reconstruction f(x) = prefactor(x) * Lap_{x'} [scale * P F](x) (direct formulas) or
 * prefactor(x) * scale * P F(x) (modified formulas), evaluated at chart points x'.
 */
class Reconstructor {
 public:
  enum class Prefactor { one, last_coordinate, last_over_norm };

  Reconstructor(SpaceSpec space, Backprojection bp, double scale, Prefactor pre, bool laplacian, double fd_step,
                std::string method)
      : space_(space), bp_(std::move(bp)), scale_(scale), pre_(pre), laplacian_(laplacian), method_(std::move(method)) {
    fd_step_ = fd_step > 0.0 ? fd_step : 1e-2 * space.chart_radius();
  }

  const SpaceSpec& space() const { return space_; }
  const std::string& method() const { return method_; }
  double fd_step() const { return fd_step_; }

  /// the field whose Laplacian is taken (already multiplied by the scale), at a chart point
  double field(std::span<const double> chart) const {
    if (space_.kind == SpaceKind::euclidean) return scale_ * bp_(chart);
    const Point x = lift(space_, chart);
    return scale_ * bp_(x);
  }

  /// reconstructed f at chart point x'
  double operator()(std::span<const double> chart) const {
    if (chart.size() != static_cast<std::size_t>(space_.n))
      throw std::invalid_argument("reconstruct: chart point must have n coordinates");
    const double r = std::sqrt(detail::norm2(chart));
    if (!(r < space_.chart_radius()))
      throw std::domain_error("reconstruct: point is not strictly inside B");
    const double core = laplacian_ ? laplacian_fd([this](std::span<const double> y) { return field(y); }, chart,
                                                  fd_step_, space_.chart_radius())
                                   : field(chart);
    return prefactor(chart) * core;
  }

 private:
  double prefactor(std::span<const double> chart) const {
    if (pre_ == Prefactor::one) return 1.0;
    const double r2 = detail::norm2(chart);
    const double last = space_.kind == SpaceKind::sphere ? std::sqrt(1.0 - r2) : std::sqrt(1.0 + r2);
    if (pre_ == Prefactor::last_coordinate) return last;
    return last / std::sqrt(r2 + last * last);
  }

  SpaceSpec space_;
  Backprojection bp_;
  double scale_;
  Prefactor pre_;
  bool laplacian_;
  double fd_step_;
  std::string method_;
};

namespace detail {

inline void require_plain(const MeanData& d, const char* who) {
  if (d.alpha && *d.alpha != 0.0)
    throw std::invalid_argument(std::string(who) + ": data are EPD traces; use the EPD inversion");
}

}  // namespace detail

/**
 * \brief Euclidean inversion: odd n
 *   f = d_{n,1} Lap \int_{dB} D^{n-3}[t^{n-2} M](xi, |x-xi|) dxi,
 * even n
 *   f = d_{n,2} Lap \int_{dB} dxi \int t D^{n-2}[t^{n-2} M] log|t^2 - |x-xi|^2| dt.
 * The modified formulas drop the Laplacian and use L M instead of M.
 * `gamma_scale` rescales the data (used by the EPD inversion).
 */
inline Reconstructor euclidean_reconstructor(const MeanData& data, const InversionOptions& opt = {}) {
  data.validate();
  const SpaceSpec& s = data.space;
  if (s.kind != SpaceKind::euclidean) throw std::invalid_argument("euclidean_reconstructor: Euclidean data required");
  detail::require_plain(data, "euclidean_reconstructor");
  const int n = s.n;
  const InversionConstants c = constants(s);
  const bool odd = n % 2 == 1;
  const bool modified = opt.formula == Formula::modified;
  std::vector<SampledProfile> profiles;
  profiles.reserve(data.centers());
  std::unique_ptr<LogKernelOperator> logop;
  if (!odd) logop = std::make_unique<LogKernelOperator>(data.tgrid, LogKernel::difference_of_squares);
  for (std::size_t i = 0; i < data.centers(); ++i) {
    SampledProfile m = data.profile(i);
    if (modified) m = darboux_L(m, n);
    m = multiply(m, [n](double t) { return std::pow(t, n - 2); });
    if (odd) {
      profiles.push_back(d_operator(m, n - 3));
    } else {
      SampledProfile q = multiply(d_operator(m, n - 2), [](double t) { return t; });
      profiles.push_back(logop->apply(q));
    }
  }
  const double scale = (odd ? c.d1 : c.d2) * boundary_area(s);
  std::string method = std::string("euclidean-") + (odd ? "odd" : "even") + "-" + to_string(opt.formula);
  return Reconstructor(s, Backprojection(data.boundary, std::move(profiles)), scale, Reconstructor::Prefactor::one,
                       !modified, opt.fd_step, method);
}

namespace detail {

// (d/dt)^k [M (+-(1 - t^2))^{n/2-1}] for the curved spaces
inline SampledProfile curved_weighted_derivative(const SampledProfile& m, SpaceKind kind, int n, int k) {
  SampledProfile F = multiply(m, [&](double t) {
    const double w = kind == SpaceKind::sphere ? 1.0 - t * t : t * t - 1.0;
    return std::pow(w, 0.5 * n - 1.0);
  });
  return k > 0 ? derivative(F, k) : F;
}

}  // namespace detail

/**
 * \brief Spherical-cap and hyperbolic-ball inversion, f = d_n x_{n+1}/sin(theta) Lap_{x'} f_0
 * (sinh R and an optional 1/|x| for the hyperboloid), with
 *   odd n:  f_0 = -\int (d/dt)^{n-3}[M w(t)]|_{t=arg} dxi,
 *   even n: f_0 = (1/pi) \int dxi \int (d/dt)^{n-2}[M w(t)] log|t - arg| dt,
 * w(t) = (1-t^2)^{n/2-1} resp. (t^2-1)^{n/2-1}.  For n = 2 this is the
 * x_3/(2 pi sin(theta)) formula with the plain log integral.
 */
inline Reconstructor curved_reconstructor(const MeanData& data, const InversionOptions& opt = {}) {
  data.validate();
  const SpaceSpec& s = data.space;
  if (s.kind == SpaceKind::euclidean) throw std::invalid_argument("curved_reconstructor: sphere or hyperbolic data required");
  detail::require_plain(data, "curved_reconstructor");
  if (opt.formula != Formula::direct)
    throw std::invalid_argument("curved_reconstructor: only the direct formula exists for curved spaces");
  const int n = s.n;
  const bool odd = n % 2 == 1;
  const InversionConstants c = constants(s);
  std::vector<SampledProfile> profiles;
  profiles.reserve(data.centers());
  std::unique_ptr<LogKernelOperator> logop;
  if (!odd) logop = std::make_unique<LogKernelOperator>(data.tgrid, LogKernel::difference);
  for (std::size_t i = 0; i < data.centers(); ++i) {
    const SampledProfile m = data.profile(i);
    if (odd) {
      profiles.push_back(detail::curved_weighted_derivative(m, s.kind, n, n - 3));
    } else {
      profiles.push_back(logop->apply(detail::curved_weighted_derivative(m, s.kind, n, n - 2)));
    }
  }
  const double radial = s.kind == SpaceKind::sphere ? std::sin(s.radius) : std::sinh(s.radius);
  const double f0_scale = odd ? -boundary_area(s) : boundary_area(s) / std::numbers::pi;
  const double scale = c.d_curved * f0_scale / radial;
  auto pre = Reconstructor::Prefactor::last_coordinate;
  std::string method = std::string(to_string(s.kind)) + (odd ? "-odd" : "-even");
  if (s.kind == SpaceKind::hyperbolic && opt.hyperbolic_weight == HyperbolicWeight::surface) {
    pre = Reconstructor::Prefactor::last_over_norm;
    method += "-surface-weight";
  }
  return Reconstructor(s, Backprojection(data.boundary, std::move(profiles)), scale, pre, true, opt.fd_step, method);
}

/** \brief Plain means recovered from Euclidean EPD traces: Gamma(n/2)/Gamma(alpha+n/2) I_{eta+alpha}^{-alpha} u. */
inline MeanData euclidean_means_from_epd(const MeanData& traces) {
  const SpaceSpec& s = traces.space;
  if (s.kind != SpaceKind::euclidean) throw std::invalid_argument("EPD inversion: Euclidean traces required");
  const double alpha = traces.alpha.value_or(0.0);
  if (alpha < 0.5 * (1 - s.n) - 1e-12) throw std::domain_error("EPD inversion: alpha must be >= (1-n)/2");
  const double a = alpha + 0.5 * s.n;
  if (a <= 0.0 && std::abs(a - std::round(a)) < 1e-12)
    throw std::domain_error("EPD inversion: Gamma(alpha + n/2) has a pole");
  MeanData out = traces;
  out.alpha.reset();
  if (alpha == 0.0) return out;
  const double eta = 0.5 * s.n - 1.0;
  const double scale = std::tgamma(0.5 * s.n) / std::tgamma(a);
  const ErdelyiKoberOperator op(traces.tgrid, {eta + alpha, -alpha});
  for (std::size_t i = 0; i < traces.centers(); ++i) {
    SampledProfile phi = op.apply(traces.profile(i));
    for (double& v : phi.values) v *= scale;
    out.set_profile(i, phi);
  }
  return out;
}

/** \brief Plain spherical means from EPD traces: M = (1-t^2)^{1-n/2} I_-^{-alpha} G. */
inline MeanData sphere_means_from_epd(const MeanData& traces) {
  const SpaceSpec& s = traces.space;
  if (s.kind != SpaceKind::sphere) throw std::invalid_argument("EPD inversion: spherical traces required");
  const double alpha = traces.alpha.value_or(0.0);
  MeanData out = traces;
  out.alpha.reset();
  if (alpha == 0.0) return out;
  if (!(alpha > 0.0)) throw std::domain_error("spherical EPD inversion supports the generated regime alpha > 0");
  const double n = s.n;
  const double inv = 1.0 / sphere_epd_factor(s.n, alpha);
  const RiemannLiouvilleOperator rl(traces.tgrid, -alpha);
  for (std::size_t i = 0; i < traces.centers(); ++i) {
    const SampledProfile G =
        multiply(traces.profile(i), [&](double t) { return inv * std::pow(1.0 - t * t, alpha - 1.0 + 0.5 * n); });
    const SampledProfile F = rl.apply(G);
    out.set_profile(i, multiply(F, [&](double t) { return std::pow(1.0 - t * t, 1.0 - 0.5 * n); }));
  }
  return out;
}

/** \brief Reconstructor for any data set: plain means or EPD traces in any space. */
inline Reconstructor make_reconstructor(const MeanData& data, const InversionOptions& opt = {}) {
  const bool epd = data.alpha && *data.alpha != 0.0;
  switch (data.space.kind) {
    case SpaceKind::euclidean:
      return euclidean_reconstructor(epd ? euclidean_means_from_epd(data) : data, opt);
    case SpaceKind::sphere:
      return curved_reconstructor(epd ? sphere_means_from_epd(data) : data, opt);
    case SpaceKind::hyperbolic:
      if (epd) throw std::invalid_argument("EPD inversion is not provided for the hyperbolic space");
      return curved_reconstructor(data, opt);
  }
  throw std::logic_error("unreachable");
}

inline double invert_euclidean_odd(const MeanData& data, std::span<const double> x, const InversionOptions& opt = {}) {
  if (data.space.n % 2 == 0) throw std::invalid_argument("invert_euclidean_odd: n is even; use invert_euclidean_even");
  return euclidean_reconstructor(data, opt)(x);
}

inline double invert_euclidean_even(const MeanData& data, std::span<const double> x, const InversionOptions& opt = {}) {
  if (data.space.n % 2 == 1) throw std::invalid_argument("invert_euclidean_even: n is odd; use invert_euclidean_odd");
  return euclidean_reconstructor(data, opt)(x);
}

inline double invert_euclidean_modified(const MeanData& data, std::span<const double> x, InversionOptions opt = {}) {
  opt.formula = Formula::modified;
  return euclidean_reconstructor(data, opt)(x);
}

inline double invert_sphere(const MeanData& data, std::span<const double> x, const InversionOptions& opt = {}) {
  if (data.space.kind != SpaceKind::sphere) throw std::invalid_argument("invert_sphere: spherical data required");
  return curved_reconstructor(data, opt)(x);
}

inline double invert_hyperbolic(const MeanData& data, std::span<const double> x, const InversionOptions& opt = {}) {
  if (data.space.kind != SpaceKind::hyperbolic) throw std::invalid_argument("invert_hyperbolic: hyperbolic data required");
  return curved_reconstructor(data, opt)(x);
}

inline double epd_invert_euclidean(const MeanData& traces, std::span<const double> x, const InversionOptions& opt = {}) {
  return euclidean_reconstructor(euclidean_means_from_epd(traces), opt)(x);
}

inline double epd_invert_sphere(const MeanData& traces, std::span<const double> x, const InversionOptions& opt = {}) {
  return curved_reconstructor(sphere_means_from_epd(traces), opt)(x);
}

/** \brief Where to evaluate a reconstruction: a square grid in a chart plane. */
struct ReconGridSpec {
  std::size_t points_per_axis = 41;
  double extent = 0.9;          ///< fraction of the chart radius covered
  std::vector<double> offsets;  ///< fixed chart coordinates x_3..x_n for n >= 3 (default 0)
};

/** \brief Chart points of the evaluation grid that lie inside extent * chart radius. */
inline std::vector<Point> recon_points(const SpaceSpec& s, const ReconGridSpec& g) {
  if (g.points_per_axis < 2) throw std::invalid_argument("recon grid: need at least 2 points per axis");
  if (!(g.extent > 0.0 && g.extent < 1.0)) throw std::invalid_argument("recon grid: extent must lie in (0, 1)");
  const double r = g.extent * s.chart_radius();
  std::vector<Point> pts;
  const std::size_t m = g.points_per_axis;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      Point p(s.n, 0.0);
      p[0] = -r + 2.0 * r * static_cast<double>(i) / static_cast<double>(m - 1);
      p[1] = -r + 2.0 * r * static_cast<double>(j) / static_cast<double>(m - 1);
      for (int k = 2; k < s.n; ++k) p[k] = static_cast<std::size_t>(k - 2) < g.offsets.size() ? g.offsets[k - 2] : 0.0;
      if (detail::norm2(p) < r * r) pts.push_back(std::move(p));
    }
  return pts;
}

struct ReconstructionReport {
  SpaceSpec space;
  std::vector<Point> points;  ///< chart coordinates
  std::vector<double> truth;
  std::vector<double> reconstructed;
  double rel_l2 = 0.0;
  double sup_error = 0.0;
  double calibration = 0.0;  ///< least-squares scalar c minimizing |c f_true - f_rec|
  std::string method;
  double seconds = 0.0;
};

inline void compute_errors(ReconstructionReport& r) {
  double num = 0.0, den = 0.0, cross = 0.0, sup = 0.0;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const double e = r.reconstructed[i] - r.truth[i];
    num += e * e;
    den += r.truth[i] * r.truth[i];
    cross += r.truth[i] * r.reconstructed[i];
    sup = std::max(sup, std::abs(e));
  }
  r.rel_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  r.sup_error = sup;
  r.calibration = den > 0.0 ? cross / den : 0.0;
}

/** \brief Evaluates a reconstructor on the grid and compares with the phantom. */
inline ReconstructionReport reconstruct_on_grid(const Reconstructor& rec, const Phantom& ph, const ReconGridSpec& g) {
  const auto start = std::chrono::steady_clock::now();
  ReconstructionReport r;
  r.space = rec.space();
  r.points = recon_points(rec.space(), g);
  r.method = rec.method();
  r.truth.reserve(r.points.size());
  r.reconstructed.reserve(r.points.size());
  for (const Point& p : r.points) {
    r.truth.push_back(eval_chart(ph, p));
    r.reconstructed.push_back(rec(p));
  }
  compute_errors(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace geomeans

#endif
