#ifndef GEOMEANS_QUADRATURE_HPP
#define GEOMEANS_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace geomeans {

/** \brief Nodes and weights of a one-dimensional rule. */
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/** \brief Gauss-Legendre rule with `order` nodes on [a, b]. */
inline QuadratureRule gauss_legendre(int order, double a = -1.0, double b = 1.0) {
  if (order < 1)
    throw std::invalid_argument("gauss_legendre: order must be >= 1, got " + std::to_string(order));
  if (!(a < b))
    throw std::invalid_argument("gauss_legendre: interval must satisfy a < b");

  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_order starting from the Tricomi estimate of the i-th root
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p0 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double pm = p0;
        p0 = p1;
        p1 = ((2.0 * j - 1.0) * z * p0 - (j - 1.0) * pm) / j;
      }
      dp = order * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = mid - half * z;
    rule.nodes[order - 1 - i] = mid + half * z;
    const double w = 2.0 * half / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

/** \brief Applies a rule given on [-1, 1] to f over [a, b]. */
template <class F>
double integrate(const QuadratureRule& ref, F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) s += ref.weights[i] * f(mid + half * ref.nodes[i]);
  return s * half;
}

/**
 * \brief Integrates f(v) over v in [0, length] on panels halving toward v = 0.
 *
 * Panels are [L 2^{-k-1}, L 2^{-k}] down to a width of min_fraction * L; the
 * innermost panel gets the same rule.  f receives the offset v itself so the
 * caller can evaluate singular factors without cancellation.
 */
template <class F>
double integrate_graded_from_zero(const QuadratureRule& ref, F&& f, double length,
                                  double min_fraction = 1e-10) {
  if (!(length > 0.0)) return 0.0;
  const int levels = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / min_fraction))));
  double s = 0.0;
  double hi = length;
  for (int k = 0; k < levels; ++k) {
    const double lo = 0.5 * hi;
    s += integrate(ref, f, lo, hi);
    hi = lo;
  }
  s += integrate(ref, f, 0.0, hi);
  return s;
}

enum class Grading { toward_a, toward_b, both_ends };

/** \brief Graded integral of f over [a, b]; singular behaviour sits at the graded end(s). */
template <class F>
double integrate_graded(const QuadratureRule& ref, F&& f, double a, double b, Grading grading,
                        double min_fraction = 1e-10) {
  if (!(a < b)) return 0.0;
  switch (grading) {
    case Grading::toward_a:
      return integrate_graded_from_zero(ref, [&](double v) { return f(a + v); }, b - a, min_fraction);
    case Grading::toward_b:
      return integrate_graded_from_zero(ref, [&](double v) { return f(b - v); }, b - a, min_fraction);
    case Grading::both_ends: {
      const double m = 0.5 * (a + b);
      return integrate_graded_from_zero(ref, [&](double v) { return f(a + v); }, m - a, min_fraction) +
             integrate_graded_from_zero(ref, [&](double v) { return f(b - v); }, b - m, min_fraction);
    }
  }
  return 0.0;
}

}  // namespace geomeans

#endif
