#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "ergolab/error.hpp"
#include "ergolab/numerics/fft.hpp"

namespace ergolab::numerics {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline GaussRule build_gauss_legendre(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached Gauss-Legendre rule with n points, 1 <= n <= 64.
inline const GaussRule& gauss_legendre(std::size_t n) {
  static const std::vector<GaussRule> table = [] {
    std::vector<GaussRule> t(65);
    t[1] = GaussRule{{0.0}, {2.0}};
    for (std::size_t k = 2; k <= 64; ++k) t[k] = detail::build_gauss_legendre(k);
    return t;
  }();
  if (n < 1 || n > 64) throw ConfigError("Gauss-Legendre order must lie in [1, 64]");
  return table[n];
}

/// Composite Gauss-Legendre with panel doubling.
struct QuadratureRule {
  std::size_t panels = 2;           // starting panel count
  std::size_t nodes_per_panel = 8;
  double rel_tol = 1e-8;
  std::size_t max_panels = std::size_t{1} << 20;
};

struct Integral {
  cplx value{0.0, 0.0};
  cplx previous{0.0, 0.0};
  std::size_t panels = 0;
  bool converged = true;
};

/// Fixed composite rule: `panels` equal panels of `nodes` points. Also returns sum w|f| in mass.
template <class F>
cplx composite_gauss(F&& f, double a, double b, std::size_t panels, std::size_t nodes,
                     double* mass = nullptr) {
  const GaussRule& g = gauss_legendre(nodes);
  const double width = (b - a) / static_cast<double>(panels);
  const double half = 0.5 * width;
  cplx total{0.0, 0.0};
  double abs_total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * width;
    cplx panel{0.0, 0.0};
    for (std::size_t k = 0; k < nodes; ++k) {
      const cplx y = cplx(f(mid + half * g.nodes[k]));
      panel += g.weights[k] * y;
      abs_total += g.weights[k] * std::abs(y);
    }
    total += panel * half;
  }
  if (mass) *mass = abs_total * half;
  return total;
}

/// Integrates f over [a, b], doubling the panel count until successive values agree to
/// rel_tol (relative, with an absolute floor at roundoff of the integrand's mass).
/// Non-convergence at max_panels is reported through Integral::converged.
template <class F>
Integral integrate_1d(F&& f, double a, double b, const QuadratureRule& rule = {}) {
  if (!(a <= b)) throw DomainError("integrate_1d needs a <= b");
  if (rule.panels == 0 || rule.nodes_per_panel == 0 || !(rule.rel_tol > 0.0)) {
    throw ConfigError("quadrature rule needs positive panels, nodes and tolerance");
  }
  Integral out;
  if (a == b) return out;
  std::size_t panels = rule.panels;
  double mass = 0.0;
  cplx prev = composite_gauss(f, a, b, panels, rule.nodes_per_panel, &mass);
  cplx before = prev;
  while (true) {
    const std::size_t next = panels * 2;
    if (next > rule.max_panels) {
      out.value = prev;
      out.previous = before;
      out.panels = panels;
      out.converged = false;
      return out;
    }
    const cplx cur = composite_gauss(f, a, b, next, rule.nodes_per_panel, &mass);
    const double diff = std::abs(cur - prev);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * mass;
    if (diff <= rule.rel_tol * std::abs(cur) || diff <= floor) {
      out.value = cur;
      out.previous = prev;
      out.panels = next;
      return out;
    }
    before = prev;
    prev = cur;
    panels = next;
  }
}

/// integrate_1d that throws ConvergenceError instead of returning an unconverged value.
template <class F>
cplx integrate_1d_or_throw(F&& f, double a, double b, const QuadratureRule& rule = {}) {
  const Integral r = integrate_1d(std::forward<F>(f), a, b, rule);
  if (!r.converged) {
    throw ConvergenceError("quadrature did not converge at the panel cap", r.value, r.previous);
  }
  return r.value;
}

}  // namespace ergolab::numerics
