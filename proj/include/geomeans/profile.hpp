#ifndef GEOMEANS_PROFILE_HPP
#define GEOMEANS_PROFILE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geomeans {

/** \brief Uniform samples t_0 < ... < t_{N-1}. */
class TGrid {
 public:
  static constexpr std::size_t min_count = 64;

  TGrid() = default;
  TGrid(double first, double last, std::size_t count) : first_(first), last_(last), count_(count) {
    if (count < min_count)
      throw std::invalid_argument("TGrid: need at least " + std::to_string(min_count) + " nodes, got " +
                                  std::to_string(count));
    if (!(first < last)) throw std::invalid_argument("TGrid: first node must be below last node");
  }

  double first() const { return first_; }
  double last() const { return last_; }
  std::size_t size() const { return count_; }
  double step() const { return (last_ - first_) / static_cast<double>(count_ - 1); }
  double operator[](std::size_t i) const {
    return i + 1 == count_ ? last_ : first_ + static_cast<double>(i) * step();
  }
  bool contains(double t) const { return t >= first_ && t <= last_; }

  friend bool operator==(const TGrid&, const TGrid&) = default;

 private:
  double first_ = 0.0;
  double last_ = 1.0;
  std::size_t count_ = 0;
};

/** \brief Samples of a function of t on a TGrid. */
struct SampledProfile {
  TGrid grid;
  std::vector<double> values;

  SampledProfile() = default;
  SampledProfile(TGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw std::invalid_argument("SampledProfile: sample count does not match grid");
  }

  std::size_t size() const { return values.size(); }
  double t(std::size_t i) const { return grid[i]; }
};

template <class F>
SampledProfile sample(const TGrid& grid, F&& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return {grid, std::move(v)};
}

/** \brief Pointwise product g(t) * p(t). */
template <class F>
SampledProfile multiply(const SampledProfile& p, F&& g) {
  SampledProfile out = p;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= g(p.grid[i]);
  return out;
}

namespace detail {

// Lagrange weights for nodes at positions p0, p0+1, p0+2, p0+3 evaluated at u.
inline std::array<double, 4> cubic_weights(double u, double p0) {
  const double a = u - p0, b = a - 1.0, c = a - 2.0, d = a - 3.0;
  return {-b * c * d / 6.0, a * c * d / 2.0, -a * b * d / 2.0, a * b * c / 6.0};
}

// First stencil node of the cubic interpolant used on cell j.
inline std::size_t stencil_start(std::size_t cell, std::size_t n) {
  if (cell == 0) return 0;
  return std::min(cell - 1, n - 4);
}

}  // namespace detail

/**
 * \brief Cubic (4-point Lagrange) interpolation of a sampled profile.
 *
 * Outside the grid the profile is taken as zero when the nearest end sample
 * is negligible; otherwise the request is an error.
 */
inline double interpolate(const SampledProfile& p, double t, double zero_tol = 1e-12) {
  const TGrid& g = p.grid;
  const std::size_t n = g.size();
  if (t < g.first() || t > g.last()) {
    const double end = t < g.first() ? p.values.front() : p.values.back();
    double scale = 0.0;
    for (double v : p.values) scale = std::max(scale, std::abs(v));
    if (std::abs(end) <= zero_tol * std::max(scale, 1e-300) || scale == 0.0) return 0.0;
    throw std::out_of_range("interpolate: t = " + std::to_string(t) + " outside grid [" +
                            std::to_string(g.first()) + ", " + std::to_string(g.last()) +
                            "] where the profile does not vanish");
  }
  const double u = (t - g.first()) / g.step();
  std::size_t cell = std::min(static_cast<std::size_t>(u), n - 2);
  const std::size_t s = detail::stencil_start(cell, n);
  const auto w = detail::cubic_weights(u, static_cast<double>(s));
  return w[0] * p.values[s] + w[1] * p.values[s + 1] + w[2] * p.values[s + 2] + w[3] * p.values[s + 3];
}

namespace detail {

inline std::vector<double> first_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  const double inv = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv;
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * inv;
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * inv;
  return d;
}

inline void require_positive_grid(const TGrid& g, const char* who) {
  if (!(g.first() > 0.0))
    throw std::domain_error(std::string(who) + ": grid must be strictly positive, first node is " +
                            std::to_string(g.first()));
}

}  // namespace detail

/** \brief k-th derivative by repeated fourth-order differences. */
inline SampledProfile derivative(const SampledProfile& p, int k) {
  if (k < 1) throw std::invalid_argument("derivative: order must be >= 1");
  if (p.size() < static_cast<std::size_t>(k) + 8)
    throw std::invalid_argument("derivative: grid of " + std::to_string(p.size()) + " nodes too short for order " +
                                std::to_string(k));
  std::vector<double> v = p.values;
  for (int j = 0; j < k; ++j) v = detail::first_derivative(v, p.grid.step());
  return {p.grid, std::move(v)};
}

/** \brief Applies D = (1/2t) d/dt m times. */
inline SampledProfile d_operator(const SampledProfile& p, int m) {
  if (m < 0) throw std::invalid_argument("d_operator: m must be >= 0");
  if (m == 0) return p;
  detail::require_positive_grid(p.grid, "d_operator");
  SampledProfile q = p;
  for (int j = 0; j < m; ++j) {
    q = derivative(q, 1);
    for (std::size_t i = 0; i < q.size(); ++i) q.values[i] /= 2.0 * q.grid[i];
  }
  return q;
}

/** \brief L = d^2/dt^2 + (n-1)/t d/dt. */
inline SampledProfile darboux_L(const SampledProfile& p, int n) {
  detail::require_positive_grid(p.grid, "darboux_L");
  const SampledProfile d1 = derivative(p, 1);
  SampledProfile out = derivative(p, 2);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += (n - 1) / out.grid[i] * d1.values[i];
  return out;
}

}  // namespace geomeans

#endif
