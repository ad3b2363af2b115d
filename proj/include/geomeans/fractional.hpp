#ifndef GEOMEANS_FRACTIONAL_HPP
#define GEOMEANS_FRACTIONAL_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "profile.hpp"
#include "quadrature.hpp"

namespace geomeans {

/** \brief Parameters (eta, alpha) of an Erdelyi-Kober operator I_eta^alpha. */
struct FractionalSpec {
  double eta = 0.0;
  double alpha = 1.0;
};

namespace detail {

struct FractionalRules {
  QuadratureRule cell = gauss_legendre(8);
  QuadratureRule graded = gauss_legendre(10);
  int levels = 40;
};

inline const FractionalRules& fractional_rules() {
  static const FractionalRules r;
  return r;
}

/*
 * Dense product-integration matrix for operators of the form
 *   out_i = sum over cells adjacent-and-beyond of \int v^{alpha-1} s_i(tau) p(tau) dtau,
 * where v = |tau - t_i| and p is the cubic interpolant of the samples.
 * `left` selects cells below t_i (Erdelyi-Kober) or above it (right-sided Riemann-Liouville).
 * smooth(i, tau, v) returns the nonsingular factor of the kernel.
 */
template <class Smooth>
std::vector<double> fractional_matrix(const TGrid& g, double alpha, bool left, Smooth&& smooth) {
  const std::size_t n = g.size();
  const double h = g.step();
  const auto& rules = fractional_rules();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = m.data() + i * n;
    const double ti = g[i];
    const std::size_t jbeg = left ? 0 : i;
    const std::size_t jend = left ? i : n - 1;  // cells [t_j, t_{j+1}] with j in [jbeg, jend)
    for (std::size_t j = jbeg; j < jend; ++j) {
      const std::size_t st = stencil_start(j, n);
      const double p0 = static_cast<double>(st) - static_cast<double>(j);
      const double tj = g[j];
      auto accumulate = [&](double v, double w) {
        const double tau = left ? ti - v : ti + v;
        const double u = (tau - tj) / h;
        const auto b = cubic_weights(u, p0);
        const double k = w * std::pow(v, alpha - 1.0) * smooth(i, tau, v);
        for (int q = 0; q < 4; ++q) row[st + q] += k * b[q];
      };
      const bool singular = left ? (j + 1 == i) : (j == i);
      if (!singular) {
        // offsets of the cell ends from t_i
        const double va = left ? ti - g[j + 1] : g[j] - ti;
        const double vb = left ? ti - g[j] : g[j + 1] - ti;
        const double mid = 0.5 * (va + vb), half = 0.5 * (vb - va);
        for (std::size_t q = 0; q < rules.cell.size(); ++q)
          accumulate(mid + half * rules.cell.nodes[q], half * rules.cell.weights[q]);
        continue;
      }
      double hi = h;
      for (int lev = 0; lev < rules.levels; ++lev) {
        const double lo = 0.5 * hi;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t q = 0; q < rules.graded.size(); ++q)
          accumulate(mid + half * rules.graded.nodes[q], half * rules.graded.weights[q]);
        hi = lo;
      }
      // innermost [0, hi]: v^{alpha-1} integrated exactly, smooth part at the midpoint
      const double v = 0.5 * hi;
      const double tau = left ? ti - v : ti + v;
      const double u = (tau - tj) / h;
      const auto b = cubic_weights(u, p0);
      const double k = std::pow(hi, alpha) / alpha * smooth(i, tau, v);
      for (int q = 0; q < 4; ++q) row[st + q] += k * b[q];
    }
  }
  return m;
}

inline std::vector<double> apply_matrix(const std::vector<double>& m, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::size_t lo = 0, hi = n;
  while (lo < n && x[lo] == 0.0) ++lo;
  while (hi > lo && x[hi - 1] == 0.0) --hi;
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = m.data() + i * n;
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += row[k] * x[k];
    y[i] = s;
  }
  return y;
}

inline int negative_order_count(double alpha) { return static_cast<int>(std::ceil(-alpha - 1e-12)); }

}  // namespace detail

/**
 * \brief Erdelyi-Kober operator I_eta^alpha of any real order on a fixed grid.
 *
 * Positive order:
 *   (I_eta^alpha phi)(t) = 2 t^{-2(alpha+eta)}/Gamma(alpha) \int_0^t (t^2-r^2)^{alpha-1} r^{2eta+1} phi(r) dr,
 * with phi taken as zero below the first node.  Order beta <= 0 with
 * m = ceil(-beta): I_eta^{m+beta} followed by t^{-2(eta'-m)} D^m t^{2eta'},
 * eta' = eta + m + beta.
 */
class ErdelyiKoberOperator {
 public:
  ErdelyiKoberOperator(const TGrid& grid, FractionalSpec spec) : grid_(grid), spec_(spec) {
    detail::require_positive_grid(grid, "erdelyi_kober");
    if (spec.alpha > 0.0) {
      positive_order_ = spec.alpha;
      derivative_count_ = 0;
    } else {
      derivative_count_ = detail::negative_order_count(spec.alpha);
      positive_order_ = derivative_count_ + spec.alpha;
      if (positive_order_ < 1e-12) positive_order_ = 0.0;
    }
    if (positive_order_ > 0.0) {
      if (spec.eta < -0.5 - 1e-12)
        throw std::invalid_argument("erdelyi_kober: eta must be >= -1/2 for the integral part, got " +
                                    std::to_string(spec.eta));
      const double a = positive_order_, eta = spec.eta;
      matrix_ = detail::fractional_matrix(grid, a, true, [&](std::size_t i, double r, double v) {
        const double t = grid[i];
        return std::pow(2.0 * t - v, a - 1.0) * std::pow(r, 2.0 * eta + 1.0);
      });
      const double g = std::tgamma(a);
      scale_.resize(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) scale_[i] = 2.0 * std::pow(grid[i], -2.0 * (a + eta)) / g;
    }
  }

  const FractionalSpec& spec() const { return spec_; }

  SampledProfile apply(const SampledProfile& p) const {
    if (!(p.grid == grid_)) throw std::invalid_argument("erdelyi_kober: profile grid differs from operator grid");
    SampledProfile q = p;
    if (positive_order_ > 0.0) {
      q.values = detail::apply_matrix(matrix_, p.values);
      for (std::size_t i = 0; i < q.size(); ++i) q.values[i] *= scale_[i];
    }
    if (derivative_count_ > 0) {
      const int m = derivative_count_;
      const double eta1 = spec_.eta + positive_order_;
      q = multiply(q, [&](double t) { return std::pow(t, 2.0 * eta1); });
      q = d_operator(q, m);
      q = multiply(q, [&](double t) { return std::pow(t, -2.0 * (eta1 - m)); });
    }
    return q;
  }

 private:
  TGrid grid_;
  FractionalSpec spec_;
  double positive_order_ = 0.0;
  int derivative_count_ = 0;
  std::vector<double> matrix_;
  std::vector<double> scale_;
};

/** \brief I_eta^alpha phi for alpha > 0. */
inline SampledProfile erdelyi_kober(const SampledProfile& p, FractionalSpec spec) {
  if (!(spec.alpha > 0.0))
    throw std::invalid_argument("erdelyi_kober: order must be positive; use erdelyi_kober_ac for alpha <= 0");
  return ErdelyiKoberOperator(p.grid, spec).apply(p);
}

/** \brief I_eta^alpha phi for alpha <= 0 by integration then differentiation. */
inline SampledProfile erdelyi_kober_ac(const SampledProfile& p, FractionalSpec spec) {
  if (spec.alpha > 0.0) throw std::invalid_argument("erdelyi_kober_ac: order must be <= 0; use erdelyi_kober");
  if (spec.alpha == 0.0) return p;
  return ErdelyiKoberOperator(p.grid, spec).apply(p);
}

/**
 * \brief Right-sided Riemann-Liouville operator I_-^alpha on a grid inside (-1, 1).
 *
 * (I_-^alpha u)(t) = 1/Gamma(alpha) \int_t^1 (tau - t)^{alpha-1} u(tau) dtau with u
 * taken as zero beyond the last node; alpha <= 0 applies (-d/dt)^m to I_-^{m+alpha}.
 */
class RiemannLiouvilleOperator {
 public:
  RiemannLiouvilleOperator(const TGrid& grid, double alpha) : grid_(grid), alpha_(alpha) {
    if (alpha > 0.0) {
      positive_order_ = alpha;
    } else {
      derivative_count_ = detail::negative_order_count(alpha);
      positive_order_ = derivative_count_ + alpha;
      if (positive_order_ < 1e-12) positive_order_ = 0.0;
    }
    if (positive_order_ > 0.0) {
      matrix_ = detail::fractional_matrix(grid, positive_order_, false,
                                          [](std::size_t, double, double) { return 1.0; });
      const double inv = 1.0 / std::tgamma(positive_order_);
      for (double& v : matrix_) v *= inv;
    }
  }

  double alpha() const { return alpha_; }

  SampledProfile apply(const SampledProfile& p) const {
    if (!(p.grid == grid_)) throw std::invalid_argument("riemann_liouville: profile grid differs from operator grid");
    SampledProfile q = p;
    if (positive_order_ > 0.0) q.values = detail::apply_matrix(matrix_, p.values);
    if (derivative_count_ > 0) {
      q = derivative(q, derivative_count_);
      if (derivative_count_ % 2 == 1)
        for (double& v : q.values) v = -v;
    }
    return q;
  }

 private:
  TGrid grid_;
  double alpha_;
  double positive_order_ = 0.0;
  int derivative_count_ = 0;
  std::vector<double> matrix_;
};

inline SampledProfile riemann_liouville_right(const SampledProfile& p, double alpha) {
  if (alpha == 0.0) return p;
  return RiemannLiouvilleOperator(p.grid, alpha).apply(p);
}

}  // namespace geomeans

#endif
