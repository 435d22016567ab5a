#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ergolab/error.hpp"
#include "ergolab/numerics/fft.hpp"
#include "ergolab/numerics/quadrature.hpp"

namespace ergolab::numerics {

/// Real phase phi(t) = linear * t + power * t^kappa on t >= 0.
struct Phase {
  double linear = 0.0;
  double power = 0.0;
  double kappa = 2.0;

  double value(double t) const noexcept {
    return linear * t + (power == 0.0 ? 0.0 : power * std::pow(t, kappa));
  }
  double derivative(double t) const noexcept {
    if (power == 0.0) return linear;
    return linear + kappa * power * std::pow(t, kappa - 1.0);
  }
};

namespace detail {

// Chebyshev-Lobatto collocation order for the Levin panels.
inline constexpr std::size_t kLevinOrder = 16;
// Panels with more phase cycles than this go to Levin, the rest to Gauss-Legendre.
inline constexpr double kLevinMinCycles = 12.0;
// Levin panels must keep max|phi'| / min|phi'| below this ratio.
inline constexpr double kLevinMaxRatio = 2.0;

struct Chebyshev {
  std::array<double, kLevinOrder + 1> x{};
  std::array<std::array<double, kLevinOrder + 1>, kLevinOrder + 1> d{};
};

inline const Chebyshev& chebyshev_lobatto() {
  static const Chebyshev cheb = [] {
    constexpr std::size_t n = kLevinOrder;
    Chebyshev c;
    std::array<double, n + 1> weight{};
    for (std::size_t j = 0; j <= n; ++j) {
      c.x[j] = std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
      weight[j] = ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
    }
    for (std::size_t i = 0; i <= n; ++i) {
      double diag = 0.0;
      for (std::size_t j = 0; j <= n; ++j) {
        if (i == j) continue;
        c.d[i][j] = (weight[i] / weight[j]) / (c.x[i] - c.x[j]);
        diag -= c.d[i][j];
      }
      c.d[i][i] = diag;
    }
    return c;
  }();
  return cheb;
}

/// Solves A p = rhs in place (dense, partial pivoting).
template <std::size_t N>
void solve_dense(std::array<std::array<cplx, N>, N>& a, std::array<cplx, N>& rhs) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(rhs[col], rhs[piv]);
    const cplx inv = 1.0 / a[col][col];
    for (std::size_t r = col + 1; r < N; ++r) {
      const cplx factor = a[r][col] * inv;
      if (factor == cplx{}) continue;
      for (std::size_t c = col; c < N; ++c) a[r][c] -= factor * a[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  for (std::size_t i = N; i-- > 0;) {
    cplx s = rhs[i];
    for (std::size_t c = i + 1; c < N; ++c) s -= a[i][c] * rhs[c];
    rhs[i] = s / a[i][i];
  }
}

/// Levin collocation: find a smooth p with p' + 2 pi i phi' p = 1, then the integral is
/// p e^{2 pi i phi} evaluated between the endpoints.
inline cplx levin_panel(const Phase& phase, double lo, double hi) {
  constexpr std::size_t m = kLevinOrder + 1;
  const Chebyshev& cheb = chebyshev_lobatto();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<std::array<cplx, m>, m> a{};
  std::array<cplx, m> rhs{};
  for (std::size_t i = 0; i < m; ++i) {
    const double t = mid + half * cheb.x[i];
    for (std::size_t j = 0; j < m; ++j) a[i][j] = cheb.d[i][j] / half;
    a[i][i] += cplx(0.0, 2.0 * std::numbers::pi * phase.derivative(t));
    rhs[i] = 1.0;
  }
  solve_dense(a, rhs);
  // x_0 = 1 maps to hi, x_n = -1 to lo.
  return rhs[0] * unit_phase(phase.value(hi)) - rhs[m - 1] * unit_phase(phase.value(lo));
}

inline cplx gauss_panel(const Phase& phase, double lo, double hi, double cycles) {
  const auto sub = static_cast<std::size_t>(std::ceil(2.0 * cycles)) + 1;
  return composite_gauss([&](double t) { return unit_phase(phase.value(t)); }, lo, hi, sub, 16);
}

inline bool is_integer(double k) noexcept { return std::floor(k) == k; }

}  // namespace detail

/// Integral of e^{2 pi i phi(t)} over [a, b], 0 <= a <= b, for phi = linear t + power t^kappa.
///
/// The interval is cut at the stationary point and then bisected until each panel is
/// either short in phase (composite Gauss-Legendre) or has a nonvanishing, slowly varying
/// phi' (Levin collocation). Cost grows with log of the phase range, not with the number
/// of oscillations.
inline cplx phase_integral(const Phase& phase, double a, double b) {
  if (!(a >= 0.0) || !(a <= b)) throw DomainError("phase_integral needs 0 <= a <= b");
  if (!(phase.kappa > 0.0)) throw DomainError("phase_integral needs kappa > 0");
  if (a == b) return {0.0, 0.0};

  Phase ph = phase;
  if (ph.kappa == 1.0) {
    ph.linear += ph.power;
    ph.power = 0.0;
  }
  if (ph.power == 0.0) {
    if (ph.linear == 0.0) return {b - a, 0.0};
    // e(lin a) (e(lin L) - 1) / (2 pi i lin), with e^{i theta} - 1 = 2 i sin(theta/2) e^{i theta/2}.
    const double len = b - a;
    const double theta_half = std::numbers::pi * ph.linear * len;
    const cplx diff = cplx(0.0, 2.0 * std::sin(theta_half)) * unit_phase(0.5 * ph.linear * len);
    return unit_phase(ph.linear * a) * diff / cplx(0.0, 2.0 * std::numbers::pi * ph.linear);
  }

  std::vector<double> cuts{a};
  if (ph.linear != 0.0 && (ph.linear > 0.0) != (ph.power > 0.0)) {
    const double stationary = std::pow(-ph.linear / (ph.kappa * ph.power), 1.0 / (ph.kappa - 1.0));
    if (stationary > a && stationary < b) cuts.push_back(stationary);
  }
  cuts.push_back(b);

  const bool singular_origin = !detail::is_integer(ph.kappa) && a == 0.0;
  const double tiny = 1e-15 * std::max(1.0, b);

  cplx total{0.0, 0.0};
  struct Span {
    double lo, hi;
  };
  std::vector<Span> stack;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    stack.push_back({cuts[c], cuts[c + 1]});
    while (!stack.empty()) {
      const Span s = stack.back();
      stack.pop_back();
      const double cycles = std::abs(ph.value(s.hi) - ph.value(s.lo));
      const double d_lo = std::abs(ph.derivative(s.lo));
      const double d_hi = std::abs(ph.derivative(s.hi));
      const double ratio = std::max(d_lo, d_hi) / std::max(std::min(d_lo, d_hi), 1e-300);
      const bool at_singular = singular_origin && s.lo == 0.0;
      const bool small = (s.hi - s.lo) <= tiny;
      if (small || (cycles <= detail::kLevinMinCycles && !at_singular)) {
        total += detail::gauss_panel(ph, s.lo, s.hi, cycles);
      } else if (cycles > detail::kLevinMinCycles && ratio <= detail::kLevinMaxRatio &&
                 std::isfinite(ratio) && !at_singular) {
        // phi' is not smooth at a fractional-power origin, so Levin never sees that panel.
        total += detail::levin_panel(ph, s.lo, s.hi);
      } else {
        const double mid = 0.5 * (s.lo + s.hi);
        stack.push_back({mid, s.hi});
        stack.push_back({s.lo, mid});
      }
    }
  }
  return total;
}

}  // namespace ergolab::numerics
