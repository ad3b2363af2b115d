#ifndef GEOMEANS_LOG_KERNEL_HPP
#define GEOMEANS_LOG_KERNEL_HPP

#include <array>
#include <cmath>
#include <vector>

#include "profile.hpp"
#include "quadrature.hpp"

namespace geomeans {

enum class LogKernel {
  difference,             ///< log|t - s|
  difference_of_squares,  ///< log|t^2 - s^2|
};

namespace detail {

struct LogCellRules {
  QuadratureRule regular = gauss_legendre(8);
  QuadratureRule graded = gauss_legendre(8);
  double min_fraction = 1e-10;
};

inline const LogCellRules& default_log_rules() {
  static const LogCellRules rules;
  return rules;
}

// Weights w_k = \int_cell L_k(t) log|t - p| dt for the cubic basis of cell j,
// accumulated into out (length 4).  Local coordinate u = (t - t_j)/h in [0, 1].
inline void log_cell_weights(const TGrid& g, std::size_t cell, double p, const LogCellRules& rules,
                             std::array<double, 4>& out) {
  const double h = g.step();
  const double tj = g[cell];
  const double p0 = static_cast<double>(stencil_start(cell, g.size())) - static_cast<double>(cell);
  const double up = (p - tj) / h;

  auto add = [&](double u, double logv, double w) {
    const auto b = cubic_weights(u, p0);
    for (int k = 0; k < 4; ++k) out[k] += w * b[k] * logv;
  };
  // integrate over u in [a, b] with the log singularity |u - up| handled by grading toward `toward`
  auto graded = [&](double a, double b, bool toward_a) {
    const QuadratureRule& ref = rules.graded;
    const double len = b - a;
    const int levels = static_cast<int>(std::ceil(std::log2(1.0 / rules.min_fraction)));
    double hi = len;
    for (int lev = 0; lev <= levels; ++lev) {
      const double lo = lev == levels ? 0.0 : 0.5 * hi;
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const double v = mid + half * ref.nodes[i];  // offset from the graded end
        const double u = toward_a ? a + v : b - v;
        // distance to the singular point, computed from the offset where possible
        const double dist = toward_a ? std::abs((a - up) + v) : std::abs((b - up) - v);
        add(u, std::log(dist * h), ref.weights[i] * half * h);
      }
      hi = lo;
    }
  };

  if (up > 0.0 && up < 1.0) {
    graded(0.0, up, false);
    graded(up, 1.0, true);
  } else if (up <= 0.0 && up > -1.0) {
    graded(0.0, 1.0, true);
  } else if (up >= 1.0 && up < 2.0) {
    graded(0.0, 1.0, false);
  } else {
    const QuadratureRule& ref = rules.regular;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double u = 0.5 + 0.5 * ref.nodes[i];
      add(u, std::log(std::abs(u - up) * h), 0.5 * ref.weights[i] * h);
    }
  }
}

template <class Visit>
void for_each_singular_point(LogKernel kernel, double s, Visit&& visit) {
  visit(s);
  if (kernel == LogKernel::difference_of_squares) visit(-s);
}

}  // namespace detail

/**
 * \brief \int profile(t) K(t, s) dt over the grid range for a log kernel.
 *
 * The profile is the piecewise cubic interpolant of the samples; cells where
 * the interpolant vanishes identically are skipped.
 */
inline double log_kernel_integral(const SampledProfile& p, double s, LogKernel kernel) {
  const TGrid& g = p.grid;
  const std::size_t n = g.size();
  const auto& rules = detail::default_log_rules();
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t st = detail::stencil_start(j, n);
    if (p.values[st] == 0.0 && p.values[st + 1] == 0.0 && p.values[st + 2] == 0.0 && p.values[st + 3] == 0.0)
      continue;
    std::array<double, 4> w{};
    detail::for_each_singular_point(kernel, s, [&](double q) { detail::log_cell_weights(g, j, q, rules, w); });
    for (int k = 0; k < 4; ++k) total += w[k] * p.values[st + k];
  }
  return total;
}

/**
 * \brief Precomputed log-kernel integration for all s on the grid itself.
 *
 * apply(p)[i] equals log_kernel_integral(p, t_i, kernel) up to rounding; the
 * weights depend only on the grid, so they are shared across many profiles.
 */
class LogKernelOperator {
 public:
  LogKernelOperator(const TGrid& grid, LogKernel kernel) : grid_(grid), weights_(grid.size() * grid.size(), 0.0) {
    const std::size_t n = grid.size();
    const auto& rules = detail::default_log_rules();
    for (std::size_t i = 0; i < n; ++i) {
      double* row = weights_.data() + i * n;
      for (std::size_t j = 0; j + 1 < n; ++j) {
        std::array<double, 4> w{};
        detail::for_each_singular_point(kernel, grid[i],
                                        [&](double q) { detail::log_cell_weights(grid, j, q, rules, w); });
        const std::size_t st = detail::stencil_start(j, n);
        for (int k = 0; k < 4; ++k) row[st + k] += w[k];
      }
    }
  }

  const TGrid& grid() const { return grid_; }

  SampledProfile apply(const SampledProfile& p) const {
    if (!(p.grid == grid_)) throw std::invalid_argument("LogKernelOperator: profile grid differs from operator grid");
    const std::size_t n = grid_.size();
    // restrict the inner sum to the nonzero samples
    std::size_t lo = 0, hi = n;
    while (lo < n && p.values[lo] == 0.0) ++lo;
    while (hi > lo && p.values[hi - 1] == 0.0) --hi;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = weights_.data() + i * n;
      double s = 0.0;
      for (std::size_t k = lo; k < hi; ++k) s += row[k] * p.values[k];
      out[i] = s;
    }
    return {grid_, std::move(out)};
  }

 private:
  TGrid grid_;
  std::vector<double> weights_;
};

}  // namespace geomeans

#endif
