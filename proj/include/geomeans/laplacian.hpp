#ifndef GEOMEANS_LAPLACIAN_HPP
#define GEOMEANS_LAPLACIAN_HPP

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace geomeans {

/**
 * \brief Second-order finite-difference Laplacian of a chart field at x.
 *
 * When chart_radius is finite every stencil point must satisfy |y| < chart_radius.
 */
template <class Field>
double laplacian_fd(const Field& field, std::span<const double> x, double h,
                    double chart_radius = std::numeric_limits<double>::infinity()) {
  if (!(h > 0.0)) throw std::invalid_argument("laplacian_fd: step must be positive");
  const std::size_t n = x.size();
  if (std::isfinite(chart_radius)) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, r2 + 2.0 * h * std::abs(x[k]) + h * h);
    if (!(std::sqrt(worst) < chart_radius))
      throw std::domain_error("laplacian_fd: stencil of radius " + std::to_string(h) + " around |x| = " +
                              std::to_string(std::sqrt(r2)) + " leaves the chart ball of radius " +
                              std::to_string(chart_radius));
  }
  std::vector<double> y(x.begin(), x.end());
  const double centre = field(std::span<const double>(y));
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    y[k] = x[k] + h;
    const double fp = field(std::span<const double>(y));
    y[k] = x[k] - h;
    const double fm = field(std::span<const double>(y));
    y[k] = x[k];
    sum += fp - 2.0 * centre + fm;
  }
  return sum / (h * h);
}

}  // namespace geomeans

#endif
