#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ergolab/averages/average.hpp"
#include "ergolab/dynamics/transfer.hpp"
#include "ergolab/error.hpp"
#include "ergolab/numerics/grid.hpp"
#include "ergolab/numerics/norms.hpp"
#include "ergolab/numerics/parallel.hpp"
#include "ergolab/numerics/phase_integral.hpp"

namespace ergolab::bilinear {

using dynamics::FlowPair;
using dynamics::TorusPoint;
using dynamics::TrigPolynomial;

/// Sample mean and its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;

  static MeanEstimate of(const std::vector<double>& v) {
    MeanEstimate e;
    if (v.empty()) return e;
    const double n = static_cast<double>(v.size());
    for (double x : v) e.mean += x / n;
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - e.mean) * (x - e.mean);
      e.standard_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return e;
  }
};

struct TransferenceResult {
  MeanEstimate ergodic_lhs;   // E_x |difference average|
  MeanEstimate transfer_rhs;  // E_x N^{-3} || J^x ||_{L1(u,v)}
  double tolerance = 1e-6;
  bool holds = false;
  std::size_t samples = 0;
};

namespace detail {

/// x-independent pieces of J^x(u, v) for one pair (k, m) of modes.
struct TransferTerm {
  cplx c1, c2;               // coefficients of f1 at k and f2 at m
  std::vector<double> k, m;  // frequencies as reals, for the e(k.x) factors
  cplx shift_phase;          // e(alpha_k delta)
  std::vector<cplx> eu, ev;  // e(gamma_u u_i), e(gamma_v v_j) over the box
  std::vector<cplx> phi_u1, phi_u2, phi_v;  // Phi(3N - u_i - delta), Phi(3N - u_i), Phi(sqrt(2N^2 - v_j))
  cplx phi_n;                                // Phi(N)
};

}  // namespace detail

/// Both sides of the transference inequality for the difference average with kappa = 2.
///
/// For each x the right side is N^{-3} sum over grid nodes of the box [0,3N] x [0,2N^2] of
/// |J^x(u, v)| h_u h_v, where
///   J^x(u, v) = (1/N) int_0^N (F1(u+t+delta, v) - F1(u+t, v)) F2(u, v+t^2) dt
/// and F_j = f_j(S^u T^v x) on the closed box. The t-integral is exact: the indicators cut
/// [0, N] at T = min(N, 3N - u - delta, sqrt(2N^2 - v)) (resp. without delta), and each mode
/// pair contributes a phase integral over [0, T].
inline TransferenceResult transference_check(const FlowPair& sys, const TrigPolynomial& f1,
                                             const TrigPolynomial& f2,
                                             const std::vector<TorusPoint>& xs, double n,
                                             double delta, const numerics::Grid2D& grid,
                                             std::size_t workers = numerics::worker_count()) {
  dynamics::require_transfer_padding(grid, n);
  if (!(delta > 0.0) || delta > 1.0) throw DomainError("transference delta must lie in (0, 1]");
  if (xs.empty()) throw DomainError("transference needs at least one x sample");
  sys.require_dimension(f1.dimension());
  sys.require_dimension(f2.dimension());

  const double u_max = 3.0 * n, v_max = 2.0 * n * n;
  std::vector<double> us, vs;
  for (std::size_t i = 0; i < grid.n_u && grid.u(i) <= u_max; ++i) us.push_back(grid.u(i));
  for (std::size_t j = 0; j < grid.n_v && grid.v(j) <= v_max; ++j) vs.push_back(grid.v(j));

  const auto cut = [n](double t) { return std::clamp(t, 0.0, n); };
  std::vector<detail::TransferTerm> terms;
  for (const auto& [k, c1] : f1.terms()) {
    for (const auto& [m, c2] : f2.terms()) {
      detail::TransferTerm term;
      term.c1 = c1;
      term.c2 = c2;
      term.k.assign(k.begin(), k.end());
      term.m.assign(m.begin(), m.end());
      const double alpha = dynamics::s_speed(sys, k);
      const double beta = dynamics::t_speed(sys, m);
      const double gamma_u = alpha + dynamics::s_speed(sys, m);
      const double gamma_v = dynamics::t_speed(sys, k) + beta;
      term.shift_phase = numerics::unit_phase(alpha * delta);
      const numerics::Phase phase{alpha, beta, 2.0};
      const auto phi = [&](double t) { return numerics::phase_integral(phase, 0.0, cut(t)); };
      term.phi_n = phi(n);
      for (double u : us) {
        term.eu.push_back(numerics::unit_phase(gamma_u * u));
        term.phi_u1.push_back(phi(u_max - u - delta));
        term.phi_u2.push_back(phi(u_max - u));
      }
      for (double v : vs) {
        term.ev.push_back(numerics::unit_phase(gamma_v * v));
        term.phi_v.push_back(phi(std::sqrt(std::max(v_max - v, 0.0))));
      }
      terms.push_back(std::move(term));
    }
  }

  std::vector<double> lhs(xs.size()), rhs(xs.size());
  numerics::parallel_for(
      xs.size(),
      [&](std::size_t s) {
        const TorusPoint& x = xs[s];
        lhs[s] = std::abs(averages::difference_average(sys, f1, f2, x, n, delta));
        std::vector<cplx> amp(terms.size());
        for (std::size_t t = 0; t < terms.size(); ++t) {
          double phase = 0.0;
          for (std::size_t d = 0; d < x.dimension(); ++d) {
            phase += (terms[t].k[d] + terms[t].m[d]) * x[d];
          }
          amp[t] = terms[t].c1 * terms[t].c2 * numerics::unit_phase(phase) / n;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < us.size(); ++i) {
          const double a1 = u_max - us[i] - delta, a2 = u_max - us[i];
          for (std::size_t j = 0; j < vs.size(); ++j) {
            const double b = std::sqrt(std::max(v_max - vs[j], 0.0));
            cplx sum{};
            for (std::size_t t = 0; t < terms.size(); ++t) {
              const auto& term = terms[t];
              // Pick the table entry of whichever bound is active.
              const cplx p1 = (a1 <= b && a1 < n) ? term.phi_u1[i] : (b < n ? term.phi_v[j] : term.phi_n);
              const cplx p2 = (a2 <= b && a2 < n) ? term.phi_u2[i] : (b < n ? term.phi_v[j] : term.phi_n);
              sum += amp[t] * term.eu[i] * term.ev[j] * (term.shift_phase * p1 - p2);
            }
            total += std::abs(sum);
          }
        }
        rhs[s] = total * grid.cell_area() / (n * n * n);
      },
      workers);

  TransferenceResult r;
  r.samples = xs.size();
  r.ergodic_lhs = MeanEstimate::of(lhs);
  r.transfer_rhs = MeanEstimate::of(rhs);
  const double se = std::hypot(r.ergodic_lhs.standard_error, r.transfer_rhs.standard_error);
  r.holds = r.ergodic_lhs.mean <= r.transfer_rhs.mean + 3.0 * se + r.tolerance;
  return r;
}

struct NormAccounting {
  double mean_norm_squared = 0.0;  // E_x ||F^{x,N}||_2^2 on the grid
  double expected = 0.0;           // 6 N^3 ||f||_2^2
  double relative_error = 0.0;
};

inline NormAccounting transfer_norm_accounting(const FlowPair& sys, const TrigPolynomial& f,
                                               const std::vector<TorusPoint>& xs, double n,
                                               const numerics::Grid2D& grid) {
  if (xs.empty()) throw DomainError("norm accounting needs at least one x sample");
  NormAccounting acc;
  for (const auto& x : xs) {
    const double l2 = numerics::lp_norm(dynamics::embed_transfer_function(sys, f, x, n, grid), 2.0);
    acc.mean_norm_squared += l2 * l2 / static_cast<double>(xs.size());
  }
  acc.expected = 6.0 * n * n * n * f.l2_norm() * f.l2_norm();
  acc.relative_error = std::abs(acc.mean_norm_squared - acc.expected) / std::max(acc.expected, 1e-300);
  return acc;
}

}  // namespace ergolab::bilinear
