#ifndef GEOMEANS_SPECIAL_HPP
#define GEOMEANS_SPECIAL_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace geomeans {

namespace detail {

inline bool is_nonpositive_integer(double x, double tol = 1e-12) {
  return x <= tol && std::abs(x - std::round(x)) <= tol;
}

// 1/Gamma(x), zero at the poles of Gamma
inline double rgamma(double x) {
  if (is_nonpositive_integer(x, 0.0)) return 0.0;
  return 1.0 / std::tgamma(x);
}

inline bool near_half_integer_multiple(double a, double tol) { return std::abs(2.0 * a - std::round(2.0 * a)) < tol; }

}  // namespace detail

/** \brief Parameters of the Gauss hypergeometric function F(a, b; c; x). */
struct HypergeometricParams {
  double a = 0.0, b = 0.0, c = 1.0;
  double x = 0.0;
};

/**
 * \brief F(a, b; c; x) by its power series for |x| < 1; stops when a term drops
 * below tol times the partial sum.
 */
inline double gauss_2f1(const HypergeometricParams& p, double tol = 1e-15) {
  if (detail::is_nonpositive_integer(p.c))
    throw std::domain_error("gauss_2f1: c = " + std::to_string(p.c) + " is a pole");
  if (!(std::abs(p.x) < 1.0)) throw std::domain_error("gauss_2f1: series needs |x| < 1");
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 200000; ++k) {
    const double r = (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * p.x;
    term *= r;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(term) < tol * std::abs(sum) && k > 2) return sum;
  }
  throw std::runtime_error("gauss_2f1: series did not converge");
}

inline double gauss_2f1(double a, double b, double c, double x, double tol = 1e-15) {
  return gauss_2f1(HypergeometricParams{a, b, c, x}, tol);
}

/**
 * \brief g_alpha(h) = 1/Gamma(alpha/2) \int_{-1}^1 |t-h|^{alpha-1} (1-t^2)^{(n-3)/2} dt
 * by graded Gauss-Legendre panels at t = h and t = +-1.
 */
inline double g_alpha_direct(int n, double alpha, double h) {
  if (n < 3) throw std::invalid_argument("g_alpha_direct: n must be >= 3");
  if (!(alpha > 0.0)) throw std::domain_error("g_alpha_direct: integral converges only for alpha > 0");
  if (!(std::abs(h) < 1.0)) throw std::domain_error("g_alpha_direct: |h| must be < 1");
  static const QuadratureRule ref = gauss_legendre(16);
  const double beta = 0.5 * (n - 3);
  // integrand from exact distances d = |t-h|, p = 1+t, q = 1-t
  auto f = [&](double d, double p, double q) { return std::pow(d, alpha - 1.0) * std::pow(p * q, beta); };
  // \int_0^len v^{alpha-1} s(v) dv with u = v^alpha for alpha < 1, so the integrand is bounded
  auto singular_end = [&](double len, auto&& smooth) {
    if (alpha >= 1.0)
      return integrate_graded_from_zero(ref, [&](double v) { return std::pow(v, alpha - 1.0) * smooth(v); }, len, 1e-16);
    return integrate_graded_from_zero(ref, [&](double u) { return smooth(std::pow(u, 1.0 / alpha)); },
                                      std::pow(len, alpha), 1e-16) / alpha;
  };
  const double a1 = 0.5 * (1.0 + h), a2 = 0.5 * (1.0 - h);  // half lengths of [-1, h] and [h, 1]
  double s = 0.0;
  s += integrate_graded_from_zero(ref, [&](double v) { return f(1.0 + h - v, v, 2.0 - v); }, a1, 1e-16);
  s += singular_end(a1, [&](double v) { return std::pow((1.0 + h - v) * (1.0 - h + v), beta); });
  s += singular_end(a2, [&](double v) { return std::pow((1.0 + h + v) * (1.0 - h - v), beta); });
  s += integrate_graded_from_zero(ref, [&](double v) { return f(1.0 - h - v, 2.0 - v, v); }, a2, 1e-16);
  return s / std::tgamma(0.5 * alpha);
}

namespace detail {

// Two-term hypergeometric form: two terms with trigonometric/Gamma weights; xi = (1+h)/2
inline double g_alpha_two_term(int n, double a, double xi) {
  const double pi = std::numbers::pi;
  const double nn = n;
  const double pre = std::tgamma(0.5 * (nn - 1.0)) * std::pow(2.0, a + nn - 3.0) * rgamma(0.5 * a);
  const double c1 = 0.5 * (5.0 - nn) - a;
  const double l1 = pre * (n % 2 == 0 ? 1.0 : -1.0) * std::tgamma(3.0 - a - nn) * std::sin(a * pi) * rgamma(c1) /
                    std::cos((a + 0.5 * nn) * pi);
  const double l2 = pre * std::pow(xi, a + 0.5 * (nn - 3.0)) * std::tgamma(a) * rgamma(a + 0.5 * (nn - 1.0)) *
                    (1.0 + std::cos(0.5 * nn * pi) / std::cos((a + 0.5 * nn) * pi));
  return l1 * gauss_2f1(1.0 - a, 3.0 - a - nn, c1, xi) + l2 * gauss_2f1(0.5 * (3.0 - nn), 0.5 * (nn - 1.0), 0.5 * (nn - 1.0) + a, xi);
}

// Even-n form, n = 2m
inline double g_alpha_even(int m, double a, double xi) {
  const double pi = std::numbers::pi;
  const double d1 = gauss_2f1(1.0 - a, 3.0 - a - 2.0 * m, 2.5 - a - m, xi) * (m % 2 == 0 ? 1.0 : -1.0) *
                    rgamma(a + 2.0 * m - 2.0) * rgamma(2.5 - a - m);
  const double d2 = std::cos(0.5 * a * pi) / std::sin(0.5 * a * pi) * gauss_2f1(1.5 - m, m - 0.5, a + m - 0.5, xi) *
                    std::pow(xi, a + m - 1.5) * rgamma(1.0 - a) * rgamma(a + m - 0.5);
  return pi * std::tgamma(m - 0.5) * std::pow(2.0, a + 2.0 * m - 3.0) * rgamma(0.5 * a) / std::cos(a * pi) * (d1 + d2);
}

// Odd-n form, n = 2m+1; the prefactor is 2^{alpha+2m-3}, a power of 2 higher doubles the direct integral
inline double g_alpha_odd(int m, double a, double xi) {
  const double pi = std::numbers::pi;
  const double e1 = gauss_2f1(1.0 - a, 2.0 - a - 2.0 * m, 2.0 - a - m, xi) * (m % 2 == 0 ? -1.0 : 1.0) *
                    rgamma(a - 1.0 + 2.0 * m) * rgamma(2.0 - a - m);
  const double e2 = std::pow(xi, a + m - 1.0) * gauss_2f1(1.0 - m, m, a + m, xi) * rgamma(1.0 - a) * rgamma(a + m);
  return std::tgamma(m) * std::tgamma(1.0 - 0.5 * a) * std::pow(2.0, a + 2.0 * m - 3.0) / std::cos(0.5 * a * pi) *
         (e1 + e2);
}

// symmetric offsets alpha +- eps, then Richardson over eps and eps/2
template <class G>
double offset_extrapolate(G&& g, double alpha, double eps) {
  auto avg = [&](double e) { return 0.5 * (g(alpha + e) + g(alpha - e)); };
  return (4.0 * avg(0.5 * eps) - avg(eps)) / 3.0;
}

}  // namespace detail

/**
 * \brief Analytic continuation of g_alpha(h) in alpha.
 *
 * Evaluates the two-term hypergeometric form at xi = (1+h)/2.  Where its Gamma
 * and trigonometric factors have removable poles (2 alpha an integer) the value
 * comes from the offsets alpha +- eps, eps in {1e-3, 5e-4}, and Richardson
 * extrapolation; at alpha = 3-n the parity forms are used that way instead.
 */
inline double g_alpha_continued(int n, double alpha, double h) {
  if (n < 3) throw std::invalid_argument("g_alpha_continued: n must be >= 3");
  if (!(std::abs(h) < 1.0)) throw std::domain_error("g_alpha_continued: |h| must be < 1");
  if (!std::isfinite(alpha)) throw std::domain_error("g_alpha_continued: alpha must be finite");
  const double xi = 0.5 * (1.0 + h);
  constexpr double eps = 1e-3;
  double v;
  if (std::abs(alpha - (3.0 - n)) < 1e-9) {
    const int m = n / 2;
    if (n % 2 == 0)
      v = detail::offset_extrapolate([&](double a) { return detail::g_alpha_even(m, a, xi); }, alpha, eps);
    else
      v = detail::offset_extrapolate([&](double a) { return detail::g_alpha_odd(m, a, xi); }, alpha, eps);
  } else if (detail::near_half_integer_multiple(alpha, 1e-9) ||
             detail::near_half_integer_multiple(alpha + 0.5 * n, 1e-9)) {
    v = detail::offset_extrapolate([&](double a) { return detail::g_alpha_two_term(n, a, xi); }, alpha, eps);
  } else {
    v = detail::g_alpha_two_term(n, alpha, xi);
  }
  if (!std::isfinite(v))
    throw std::domain_error("g_alpha_continued: singular parameter point alpha = " + std::to_string(alpha));
  return v;
}

/**
 * \brief Gaussian e^{-t^2} with closed-form derivatives and Taylor data at 0.
 */
struct GaussianProfile {
  double value(double t) const { return std::exp(-t * t); }
  /// d^k/dt^k e^{-t^2} = (-1)^k H_k(t) e^{-t^2}
  double derivative(int k, double t) const {
    // physicists' Hermite H_k by its three-term recurrence
    double h0 = 1.0, h1 = 2.0 * t;
    if (k == 0) h1 = h0;
    for (int j = 1; j < k; ++j) {
      const double h2 = 2.0 * t * h1 - 2.0 * j * h0;
      h0 = h1;
      h1 = h2;
    }
    return (k % 2 == 0 ? 1.0 : -1.0) * h1 * std::exp(-t * t);
  }
  /// Taylor coefficient phi^{(j)}(0)/j!
  double taylor(int j) const {
    if (j % 2 == 1) return 0.0;
    const int k = j / 2;
    return (k % 2 == 0 ? 1.0 : -1.0) / std::tgamma(k + 1.0);
  }
  /// beyond this |t| the profile and its derivatives are below double precision
  double extent() const { return 9.0; }
};

namespace detail {

// phi(t) - sum_{j <= deg} taylor(j) t^j; series tail for small |t| to avoid cancellation
template <class Profile>
double taylor_remainder(const Profile& phi, int deg, double t) {
  if (std::abs(t) < 0.5) {
    double s = 0.0, p = std::pow(t, deg + 1), prev = 0.0;
    for (int j = deg + 1; j < deg + 120; ++j) {
      const double term = phi.taylor(j) * p;
      s += term;
      p *= t;
      // odd or even coefficients may vanish: look at two consecutive terms
      if (j > deg + 4 && std::abs(term) + std::abs(prev) < 1e-18 * std::abs(s)) break;
      prev = term;
    }
    return s;
  }
  double poly = 0.0;
  for (int j = deg; j >= 0; --j) poly = poly * t + phi.taylor(j);
  return phi.value(t) - poly;
}

}  // namespace detail

/**
 * \brief Analytic continuation of \int_R |t|^{alpha-1}/Gamma(alpha/2) phi(t) dt by
 * subtracting the degree 2m+1 Taylor polynomial on |t| <= 1, m = ceil((1-alpha)/2):
 *   [\int_{|t|<=1} |t|^{alpha-1}(phi-P) + sum_{k<=m} 2 phi^{(2k)}(0)/(2k)!/(alpha+2k)
 *    + \int_{|t|>1} |t|^{alpha-1} phi] / Gamma(alpha/2).
 * At alpha = -2k the terms with a pole of 1/Gamma are zero except the k-th,
 * whose limit is (-1)^k k!/2 times its numerator.
 */
template <class Profile>
double regularized_power_integral(const Profile& phi, double alpha, int m = -1) {
  if (m < 0) m = std::max(0, static_cast<int>(std::ceil(0.5 * (1.0 - alpha) - 1e-12)));
  if (!(alpha > -2.0 * m - 2.0))
    throw std::domain_error("regularized_power_integral: alpha too small for subtraction order " + std::to_string(m));
  static const QuadratureRule ref = gauss_legendre(20);
  const int deg = 2 * m + 1;
  auto inner = integrate_graded_from_zero(
      ref,
      [&](double t) {
        return std::pow(t, alpha - 1.0) * (detail::taylor_remainder(phi, deg, t) + detail::taylor_remainder(phi, deg, -t));
      },
      1.0, 1e-16);
  const double ext = phi.extent();
  double outer = 0.0;
  if (ext > 1.0) {
    const std::size_t panels = static_cast<std::size_t>(std::ceil(4.0 * (ext - 1.0)));
    const double w = (ext - 1.0) / panels;
    for (std::size_t i = 0; i < panels; ++i) {
      const double a = 1.0 + w * i;
      outer += integrate(ref, [&](double t) { return std::pow(t, alpha - 1.0) * (phi.value(t) + phi.value(-t)); }, a,
                         a + w);
    }
  }
  const bool at_pole = alpha <= 0.0 && std::abs(alpha - std::round(alpha)) < 1e-14 &&
                       static_cast<long>(std::round(alpha)) % 2 == 0;
  if (at_pole) {
    const int k = static_cast<int>(std::round(-0.5 * alpha));
    return phi.taylor(2 * k) * (k % 2 == 0 ? 1.0 : -1.0) * std::tgamma(k + 1.0);
  }
  double sum = inner + outer;
  for (int k = 0; k <= m; ++k) sum += 2.0 * phi.taylor(2 * k) / (alpha + 2.0 * k);
  return sum / std::tgamma(0.5 * alpha);
}

/** \brief c_{m,1} = (-1)^m m!/(2m)!. */
inline double c_m1(int m) { return (m % 2 == 0 ? 1.0 : -1.0) * std::tgamma(m + 1.0) / std::tgamma(2.0 * m + 1.0); }

/** \brief c_{m,2} = 1/(Gamma(1/2-m) (2m-1)!). */
inline double c_m2(int m) {
  if (m < 1) throw std::invalid_argument("c_m2: m must be >= 1");
  return 1.0 / (std::tgamma(0.5 - m) * std::tgamma(2.0 * m));
}

/** \brief Log form -c_{m,2} \int_R phi^{(2m)}(t) log|t| dt of the continuation at alpha = 1-2m. */
template <class Profile>
double log_form_integral(const Profile& phi, int m) {
  static const QuadratureRule ref = gauss_legendre(20);
  const double ext = phi.extent();
  const int k = 2 * m;
  double s = integrate_graded_from_zero(
      ref, [&](double t) { return std::log(t) * (phi.derivative(k, t) + phi.derivative(k, -t)); }, 1.0, 1e-16);
  const std::size_t panels = static_cast<std::size_t>(std::ceil(4.0 * (ext - 1.0)));
  const double w = (ext - 1.0) / panels;
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = 1.0 + w * i;
    s += integrate(ref, [&](double t) { return std::log(t) * (phi.derivative(k, t) + phi.derivative(k, -t)); }, a, a + w);
  }
  return -c_m2(m) * s;
}

/**
 * \brief 2 \int_{-1}^1 log|t-h| / sqrt(1-t^2) dt, computed in t = cos(psi) as
 * 2 \int_0^pi log|cos psi - h| dpsi with grading toward psi = arccos h.
 */
inline double log_circle_integral(double h, int order = 20) {
  if (!(std::abs(h) < 1.0)) throw std::domain_error("log_circle_integral: |h| must be < 1");
  const QuadratureRule ref = gauss_legendre(order);
  const double p0 = std::acos(h);
  // cos(p0 +- v) - h = -2 sin(p0 +- v/2) sin(+-v/2): no cancellation at small v
  auto f_left = [&](double v) { return std::log(std::abs(2.0 * std::sin(p0 - 0.5 * v) * std::sin(0.5 * v))); };
  auto f_right = [&](double v) { return std::log(std::abs(2.0 * std::sin(p0 + 0.5 * v) * std::sin(0.5 * v))); };
  double s = integrate_graded(ref, [&](double v) { return f_left(v); }, 0.0, p0, Grading::both_ends, 1e-14);
  s += integrate_graded(ref, [&](double v) { return f_right(v); }, 0.0, std::numbers::pi - p0, Grading::both_ends,
                        1e-14);
  return 2.0 * s;
}

/** \brief Chebyshev polynomial of the second kind by recurrence. */
inline double chebyshev_u(int k, double h) {
  if (k < 0) return 0.0;
  double u0 = 1.0, u1 = 2.0 * h;
  if (k == 0) return u0;
  for (int j = 1; j < k; ++j) {
    const double u2 = 2.0 * h * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

namespace detail {

// \int over t in [-1, 1] minus (h-eps, h+eps) of T_nn(t)/((t-h) sqrt(1-t^2)), in t = cos(psi)
inline double chebyshev_excised(int nn, double h, double eps, const QuadratureRule& ref) {
  auto f = [&](double psi) { return std::cos(nn * psi) / (std::cos(psi) - h); };
  double s = 0.0;
  // psi in [0, acos(h+eps)] and [acos(h-eps), pi]; grade toward the excision edges
  if (h + eps < 1.0) s += integrate_graded(ref, f, 0.0, std::acos(h + eps), Grading::toward_b, 1e-12);
  if (h - eps > -1.0) s += integrate_graded(ref, f, std::acos(h - eps), std::numbers::pi, Grading::toward_a, 1e-12);
  return s;
}

}  // namespace detail

/**
 * \brief p.v. \int_{-1}^1 T_nn(t)/((t-h) sqrt(1-t^2)) dt by symmetric excision of
 * radius eps and Richardson extrapolation 2 I(eps/2) - I(eps).
 */
inline double chebyshev_pv(int nn, double h, double eps = 1e-3) {
  if (nn < 1) throw std::invalid_argument("chebyshev_pv: degree must be >= 1");
  if (!(std::abs(h) < 1.0)) throw std::domain_error("chebyshev_pv: |h| must be < 1");
  static const QuadratureRule ref = gauss_legendre(24);
  return 2.0 * detail::chebyshev_excised(nn, h, 0.5 * eps, ref) - detail::chebyshev_excised(nn, h, eps, ref);
}

}  // namespace geomeans

#endif
