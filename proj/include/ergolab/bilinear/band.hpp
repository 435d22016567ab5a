#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ergolab/error.hpp"
#include "ergolab/numerics/grid.hpp"
#include "ergolab/numerics/norms.hpp"

namespace ergolab::bilinear {

using numerics::cplx;
using numerics::Grid2D;
using numerics::GridFunction2D;

/// Closed-band membership |xi| <= R, with a relative allowance for the rounding of k / P.
inline bool in_band(double xi, double r) noexcept {
  return std::abs(xi) <= r + 1e-12 * std::max(1.0, r);
}

struct BandSplit {
  GridFunction2D low;   // spectrum kept on |xi_1| <= R
  GridFunction2D high;  // the complement
};

inline BandSplit band_split(const GridFunction2D& f, double r) {
  if (!(r >= 0.0)) throw DomainError("band radius must be nonnegative");
  const Grid2D& g = f.grid();
  numerics::Spectrum2D low = numerics::dft_forward(f);
  numerics::Spectrum2D high = low;
  for (std::size_t a = 0; a < g.n_u; ++a) {
    const bool keep = in_band(g.frequency_u(a), r);
    for (std::size_t b = 0; b < g.n_v; ++b) (keep ? high.slot(a, b) : low.slot(a, b)) = cplx{};
  }
  return {numerics::dft_inverse(low), numerics::dft_inverse(high)};
}

struct ShiftDifference {
  double spatial = 0.0;   // || F(. + delta, .) - F ||_2 on the grid
  double spectral = 0.0;  // (P_u P_v sum |c|^2 |e(delta xi_1) - 1|^2)^{1/2}
  std::optional<double> bound;  // 2 pi delta R ||F||_2 when R is given
  bool band_limited = true;     // spectrum vanishes outside |xi_1| <= R
  bool bound_holds = true;
};

/// Both sides of the Plancherel shift identity. The spatial shift is an index roll when
/// delta is a multiple of h_u, otherwise a trigonometric interpolation shift.
inline ShiftDifference shift_difference_norm(const GridFunction2D& f, double delta,
                                             std::optional<double> r = std::nullopt) {
  const Grid2D& g = f.grid();
  GridFunction2D shifted(g);
  const double steps = delta / g.h_u();
  if (std::abs(steps - std::nearbyint(steps)) <= 1e-12 * std::max(1.0, std::abs(steps))) {
    const auto n = static_cast<long>(g.n_u);
    const long s = static_cast<long>(std::nearbyint(steps));
    for (std::size_t i = 0; i < g.n_u; ++i) {
      const auto src = static_cast<std::size_t>(((static_cast<long>(i) + s) % n + n) % n);
      for (std::size_t j = 0; j < g.n_v; ++j) shifted(i, j) = f(src, j);
    }
  } else {
    shifted = numerics::spectral_shift(f, delta, 0.0);
  }
  ShiftDifference out;
  out.spatial = numerics::lp_norm(shifted - f, 2.0);

  const numerics::Spectrum2D s = numerics::dft_forward(f);
  double sum = 0.0, outside = 0.0, total = 0.0;
  for (std::size_t a = 0; a < g.n_u; ++a) {
    const double xi = g.frequency_u(a);
    const double factor = std::norm(numerics::unit_phase(delta * xi) - 1.0);
    const bool inside = !r || in_band(xi, *r);
    for (std::size_t b = 0; b < g.n_v; ++b) {
      const double m = std::norm(s.slot(a, b));
      sum += m * factor;
      total += m;
      if (!inside) outside += m;
    }
  }
  out.spectral = std::sqrt(g.period_u * g.period_v * sum);
  if (r) {
    const double norm = std::sqrt(g.period_u * g.period_v * total);
    out.bound = 2.0 * std::numbers::pi * std::abs(delta) * *r * norm;
    out.band_limited = outside <= 1e-24 * std::max(total, 1e-300);
    out.bound_holds = out.spatial <= *out.bound * (1.0 + 1e-12) + 1e-14;
  }
  return out;
}

/// a^{3/2} F(a x, a^2 y), realized exactly on the grid with periods (P_u / a, P_v / a^2):
/// node (i, j) of the output sits at (i h_u / a, j h_v / a^2) and carries a^{3/2} F(i h_u, j h_v).
inline GridFunction2D rescale_parabolic(const GridFunction2D& f, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("rescaling factor must be positive");
  const Grid2D& g = f.grid();
  const Grid2D out_grid = Grid2D::make(g.period_u / a, g.period_v / (a * a), g.n_u, g.n_v);
  GridFunction2D out(out_grid, std::vector<cplx>(f.samples().begin(), f.samples().end()));
  out *= std::pow(a, 1.5);
  return out;
}

struct DyadicPiece {
  double lo = 0.0;  // open left end 2^{-k} N
  double hi = 0.0;  // closed right end 2^{1-k} N
  double weight = 0.0;  // 2^{-k}
};

/// (1/N) 1_(0,N] = sum_k 2^{-k} (1 / (2^{-k} N)) 1_(2^{-k} N, 2^{1-k} N], truncated at K.
class DyadicDecomposition {
 public:
  static DyadicDecomposition make(double n, int k_max) {
    if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("dyadic decomposition needs N >= 1");
    if (k_max < 1) throw DomainError("dyadic decomposition needs K >= 1");
    DyadicDecomposition d;
    d.n_ = n;
    for (int k = 1; k <= k_max; ++k) {
      d.pieces_.push_back({std::ldexp(n, -k), std::ldexp(n, 1 - k), std::ldexp(1.0, -k)});
    }
    return d;
  }

  double n() const noexcept { return n_; }
  const std::vector<DyadicPiece>& pieces() const noexcept { return pieces_; }

  /// sum_k weight_k / lo_k at t, over the pieces containing t.
  double partial_sum(double t) const noexcept {
    double s = 0.0;
    for (const auto& p : pieces_) {
      if (t > p.lo && t <= p.hi) s += p.weight / p.lo;
    }
    return s;
  }

  /// L1 mass of (1/N) 1_(0,N] not covered by the truncated sum: 2^{-K}.
  double residual_mass() const noexcept { return pieces_.empty() ? 1.0 : pieces_.back().lo / n_; }

 private:
  double n_ = 1.0;
  std::vector<DyadicPiece> pieces_;
};

inline DyadicDecomposition dyadic_scale_decomposition(double n, int k_max) {
  return DyadicDecomposition::make(n, k_max);
}

}  // namespace ergolab::bilinear
