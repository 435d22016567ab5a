#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "ergolab/bilinear/cutoffs.hpp"
#include "ergolab/error.hpp"
#include "ergolab/numerics/fft.hpp"
#include "ergolab/numerics/grid.hpp"
#include "ergolab/numerics/quadrature.hpp"

namespace ergolab::bilinear {

using numerics::cplx;
using numerics::Grid2D;
using numerics::GridFunction2D;
using numerics::Spectrum2D;

/// Grid indices whose centered coordinates lie in the open eta window (-1, 1)^2.
struct Window {
  std::vector<std::size_t> rows;  // u indices
  std::vector<std::size_t> cols;  // v indices

  static Window of(const Grid2D& g) {
    Window w;
    for (std::size_t i = 0; i < g.n_u; ++i) {
      if (std::abs(g.centered_u(i)) < 1.0) w.rows.push_back(i);
    }
    for (std::size_t j = 0; j < g.n_v; ++j) {
      if (std::abs(g.centered_v(j)) < 1.0) w.cols.push_back(j);
    }
    return w;
  }
};

/// Shifts x + t + delta and y + t^kappa must not alias inside one period.
inline void require_no_wrap(const Grid2D& g, double delta, double kappa) {
  if (g.period_u < 4.0 + delta || g.period_v < 2.0 + std::pow(2.0, kappa)) {
    throw ConfigError("grid periods too small for the t-shifts: need period_u >= 4 + delta and "
                      "period_v >= 2 + 2^kappa");
  }
}

/// The three smooth pieces of the phi support: rise, plateau, fall.
inline std::array<std::pair<double, double>, 3> phi_pieces(const CutoffSpec& cut) {
  return {{{cut.phi_support_lo(), cut.phi_plateau_lo()},
           {cut.phi_plateau_lo(), cut.phi_plateau_hi()},
           {cut.phi_plateau_hi(), cut.phi_support_hi()}}};
}

namespace detail {

/// Output field over the window, indexed [r * cols + c].
using Field = std::vector<cplx>;

/// Integrates field(t) = accumulate(t, w, field) over the phi support with composite
/// Gauss-Legendre on each piece, doubling panels until the field stops moving.
template <class Accumulate>
Field integrate_field(const CutoffSpec& cut, std::size_t field_size, Accumulate&& accumulate,
                      const numerics::QuadratureRule& rule) {
  const numerics::GaussRule& g = numerics::gauss_legendre(rule.nodes_per_panel);
  const auto pieces = phi_pieces(cut);
  const auto pass = [&](std::size_t panels) {
    Field field(field_size, cplx{});
    for (const auto& [lo, hi] : pieces) {
      const double width = (hi - lo) / static_cast<double>(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const double mid = lo + (static_cast<double>(p) + 0.5) * width;
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
          const double t = mid + 0.5 * width * g.nodes[k];
          accumulate(t, 0.5 * width * g.weights[k] * cut.phi(t), field);
        }
      }
    }
    return field;
  };
  std::size_t panels = std::max<std::size_t>(rule.panels, 1);
  Field prev = pass(panels);
  while (true) {
    panels *= 2;
    if (panels > rule.max_panels) {
      throw ConvergenceError("local operator t-integral did not converge", 0.0, 0.0);
    }
    Field cur = pass(panels);
    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      diff = std::max(diff, std::abs(cur[k] - prev[k]));
      scale = std::max(scale, std::abs(cur[k]));
    }
    if (diff <= rule.rel_tol * scale || diff <= 1e-15) return cur;
    prev = std::move(cur);
  }
}

/// Shared FFT-path evaluator of int F1~(x+t, y) F2(x, y+t^kappa) zeta dt, where F1~ is F1
/// with each u-frequency xi multiplied by first_multiplier(xi).
template <class Multiplier>
GridFunction2D local_operator_fft(const GridFunction2D& f1, const GridFunction2D& f2,
                                  const CutoffSpec& cut, double kappa,
                                  Multiplier&& first_multiplier,
                                  const numerics::QuadratureRule& rule) {
  const Grid2D& g = f1.grid();
  if (!(g == f2.grid())) throw ConfigError("B_delta inputs live on different grids");
  const Window win = Window::of(g);
  const std::size_t nr = win.rows.size(), nc = win.cols.size();
  const numerics::Fft fft_u(g.n_u), fft_v(g.n_v);

  // u-spectra of the window columns of F1 and v-spectra of the window rows of F2.
  std::vector<std::vector<cplx>> col_spec(nc, std::vector<cplx>(g.n_u));
  for (std::size_t c = 0; c < nc; ++c) {
    auto& s = col_spec[c];
    for (std::size_t i = 0; i < g.n_u; ++i) s[i] = f1(i, win.cols[c]);
    fft_u.forward(s);
    for (std::size_t a = 0; a < g.n_u; ++a) {
      s[a] *= first_multiplier(g.frequency_u(a)) / static_cast<double>(g.n_u);
    }
  }
  std::vector<std::vector<cplx>> row_spec(nr, std::vector<cplx>(g.n_v));
  for (std::size_t r = 0; r < nr; ++r) {
    auto& s = row_spec[r];
    for (std::size_t j = 0; j < g.n_v; ++j) s[j] = f2(win.rows[r], j);
    fft_v.forward(s);
    for (auto& c : s) c /= static_cast<double>(g.n_v);
  }

  std::vector<cplx> phase_u(g.n_u), phase_v(g.n_v), buf_u(g.n_u), buf_v(g.n_v);
  std::vector<cplx> shifted1(nr * nc);
  const auto accumulate = [&](double t, double w, Field& field) {
    for (std::size_t a = 0; a < g.n_u; ++a) phase_u[a] = numerics::unit_phase(g.frequency_u(a) * t);
    const double tk = std::pow(t, kappa);
    for (std::size_t b = 0; b < g.n_v; ++b) phase_v[b] = numerics::unit_phase(g.frequency_v(b) * tk);
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t a = 0; a < g.n_u; ++a) buf_u[a] = col_spec[c][a] * phase_u[a];
      fft_u.inverse(buf_u);
      for (std::size_t r = 0; r < nr; ++r) shifted1[r * nc + c] = buf_u[win.rows[r]];
    }
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::size_t b = 0; b < g.n_v; ++b) buf_v[b] = row_spec[r][b] * phase_v[b];
      fft_v.inverse(buf_v);
      for (std::size_t c = 0; c < nc; ++c) {
        field[r * nc + c] += w * shifted1[r * nc + c] * buf_v[win.cols[c]];
      }
    }
  };
  const Field field = integrate_field(cut, nr * nc, accumulate, rule);

  GridFunction2D out(g);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t i = win.rows[r], j = win.cols[c];
      out(i, j) = cut.eta(g.centered_u(i), g.centered_v(j)) * field[r * nc + c];
    }
  }
  return out;
}

}  // namespace detail

/// Default t-rule for the operator paths.
inline numerics::QuadratureRule local_operator_rule() {
  return numerics::QuadratureRule{2, 8, 1e-10, std::size_t{1} << 14};
}

/// L(F1, F2)(x, y) = int F1(x+t, y) F2(x, y+t^kappa) zeta(x, y, t) dt on the eta window,
/// with off-grid values by trigonometric interpolation.
inline GridFunction2D apply_local_operator(const GridFunction2D& f1, const GridFunction2D& f2,
                                           const CutoffSpec& cut, double kappa = 2.0,
                                           const numerics::QuadratureRule& rule =
                                               local_operator_rule()) {
  require_no_wrap(f1.grid(), 0.0, kappa);
  return detail::local_operator_fft(f1, f2, cut, kappa, [](double) { return cplx{1.0}; }, rule);
}

/// B_delta(F1, F2) = L(F1(. + delta, .) - F1, F2).
inline GridFunction2D apply_B_delta(const GridFunction2D& f1, const GridFunction2D& f2,
                                    const CutoffSpec& cut, double delta, double kappa = 2.0,
                                    const numerics::QuadratureRule& rule = local_operator_rule()) {
  if (!(delta >= 0.0)) throw DomainError("B_delta needs delta >= 0");
  require_no_wrap(f1.grid(), delta, kappa);
  return detail::local_operator_fft(
      f1, f2, cut, kappa,
      [delta](double xi) { return numerics::unit_phase(xi * delta) - 1.0; }, rule);
}

/// Pointwise oracle for B_delta: each window point integrates the t-integrand directly,
/// evaluating F1 and F2 by trigonometric interpolation at the exact shifted points.
inline GridFunction2D apply_B_delta_brute_force(const GridFunction2D& f1, const GridFunction2D& f2,
                                                const CutoffSpec& cut, double delta,
                                                double kappa = 2.0, double rel_tol = 1e-11) {
  const Grid2D& g = f1.grid();
  if (!(g == f2.grid())) throw ConfigError("B_delta inputs live on different grids");
  require_no_wrap(g, delta, kappa);
  const Spectrum2D s1 = numerics::dft_forward(f1);
  const Spectrum2D s2 = numerics::dft_forward(f2);
  const Window win = Window::of(g);
  const numerics::QuadratureRule rule{2, 8, rel_tol, std::size_t{1} << 14};
  GridFunction2D out(g);
  std::vector<cplx> r(g.n_u), q(g.n_v);
  for (std::size_t i : win.rows) {
    for (std::size_t j : win.cols) {
      const double x = g.centered_u(i), y = g.centered_v(j);
      // F1(., y) = sum_a r_a e(xi_a .) and F2(x, .) = sum_b q_b e(xi_b .).
      for (std::size_t a = 0; a < g.n_u; ++a) {
        r[a] = 0.0;
        for (std::size_t b = 0; b < g.n_v; ++b) {
          r[a] += s1.slot(a, b) * numerics::unit_phase(g.frequency_v(b) * y);
        }
      }
      for (std::size_t b = 0; b < g.n_v; ++b) {
        q[b] = 0.0;
        for (std::size_t a = 0; a < g.n_u; ++a) {
          q[b] += s2.slot(a, b) * numerics::unit_phase(g.frequency_u(a) * x);
        }
      }
      const auto integrand = [&](double t) {
        cplx diff{}, second{};
        for (std::size_t a = 0; a < g.n_u; ++a) {
          const double xi = g.frequency_u(a);
          diff += r[a] * (numerics::unit_phase(xi * (x + t + delta)) - numerics::unit_phase(xi * (x + t)));
        }
        const double yt = y + std::pow(t, kappa);
        for (std::size_t b = 0; b < g.n_v; ++b) second += q[b] * numerics::unit_phase(g.frequency_v(b) * yt);
        return cut.phi(t) * diff * second;
      };
      cplx total{};
      for (const auto& [lo, hi] : phi_pieces(cut)) {
        total += numerics::integrate_1d_or_throw(integrand, lo, hi, rule);
      }
      out(i, j) = cut.eta(x, y) * total;
    }
  }
  return out;
}

/// c e^{2 pi i (xi_u u + xi_v v)}; a finite sum of these is a modal function.
struct PlaneWave {
  double xi_u = 0.0;
  double xi_v = 0.0;
  cplx c{1.0};
};
using ModalFunction = std::vector<PlaneWave>;

inline GridFunction2D modal_to_grid(const ModalFunction& f, const Grid2D& g) {
  return GridFunction2D::sample(g, [&](double u, double v) {
    cplx s{};
    for (const auto& w : f) s += w.c * numerics::unit_phase(w.xi_u * u + w.xi_v * v);
    return s;
  });
}

/// Psi(a, b) = int phi(t) e(a t + b t^kappa) dt.
inline cplx phi_transform(const CutoffSpec& cut, double a, double b, double kappa,
                          double rel_tol = 1e-11) {
  const auto integrand = [&](double t) {
    return cut.phi(t) * numerics::unit_phase(a * t + b * std::pow(t, kappa));
  };
  cplx total{};
  for (const auto& [lo, hi] : phi_pieces(cut)) {
    const double cycles = (std::abs(a) + std::abs(b) * kappa * std::pow(2.0, kappa - 1.0)) * (hi - lo);
    const auto panels = static_cast<std::size_t>(std::clamp(std::ceil(cycles), 2.0, 4096.0));
    const numerics::QuadratureRule rule{panels, 8, rel_tol, std::size_t{1} << 18};
    total += numerics::integrate_1d_or_throw(integrand, lo, hi, rule);
  }
  return total;
}

/// Exact evaluation for modal inputs on the window points of g (no interpolation, no
/// periodization):
///   out = eta sum_{p,q} c_p d_q m(xi_p) e((xi_p + eta_q).(x, y)) Psi(xi_{p,u}, eta_{q,v}),
/// where m = 1 for the single-copy operator and m(xi) = e(xi_u delta) - 1 for B_delta.
inline GridFunction2D local_operator_modal(const ModalFunction& f1, const ModalFunction& f2,
                                           const CutoffSpec& cut, const Grid2D& g,
                                           double kappa = 2.0,
                                           std::optional<double> delta = std::nullopt) {
  if (g.period_u < 2.0 || g.period_v < 2.0) {
    throw ConfigError("modal evaluation grid must cover the window (-1, 1)^2");
  }
  struct Term {
    cplx c;
    double fu, fv;
  };
  std::vector<Term> terms;
  for (const auto& p : f1) {
    const cplx m = delta ? numerics::unit_phase(p.xi_u * *delta) - 1.0 : cplx{1.0};
    if (m == cplx{}) continue;
    for (const auto& q : f2) {
      const cplx psi = phi_transform(cut, p.xi_u, q.xi_v, kappa);
      terms.push_back({p.c * q.c * m * psi, p.xi_u + q.xi_u, p.xi_v + q.xi_v});
    }
  }
  const Window win = Window::of(g);
  std::vector<cplx> ev(win.cols.size() * terms.size());
  for (std::size_t c = 0; c < win.cols.size(); ++c) {
    const double y = g.centered_v(win.cols[c]);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      ev[c * terms.size() + k] = numerics::unit_phase(terms[k].fv * y);
    }
  }
  GridFunction2D out(g);
  std::vector<cplx> eu(terms.size());
  for (std::size_t i : win.rows) {
    const double x = g.centered_u(i);
    for (std::size_t k = 0; k < terms.size(); ++k) eu[k] = terms[k].c * numerics::unit_phase(terms[k].fu * x);
    for (std::size_t c = 0; c < win.cols.size(); ++c) {
      const std::size_t j = win.cols[c];
      cplx s{};
      for (std::size_t k = 0; k < terms.size(); ++k) s += eu[k] * ev[c * terms.size() + k];
      out(i, j) = cut.eta(x, g.centered_v(j)) * s;
    }
  }
  return out;
}

}  // namespace ergolab::bilinear
