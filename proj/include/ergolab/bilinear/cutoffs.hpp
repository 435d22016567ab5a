#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "ergolab/error.hpp"
#include "ergolab/numerics/quadrature.hpp"

namespace ergolab::bilinear {

/// Standard bump e^{-1/(1-s^2)} on (-1, 1), zero elsewhere.
inline double bump(double s) noexcept {
  const double r = 1.0 - s * s;
  return r > 0.0 ? std::exp(-1.0 / r) : 0.0;
}

namespace detail {

inline constexpr int kCdfKnots = 128;  // knots at -1 + k / 64

/// Cumulative bump integrals from -1 to each knot, accurate to roundoff.
inline const std::array<double, kCdfKnots + 1>& bump_knot_table() {
  static const auto table = [] {
    std::array<double, kCdfKnots + 1> t{};
    for (int k = 1; k <= kCdfKnots; ++k) {
      const double lo = -1.0 + 2.0 * (k - 1) / kCdfKnots, hi = -1.0 + 2.0 * k / kCdfKnots;
      t[k] = t[k - 1] + numerics::composite_gauss(bump, lo, hi, 1, 32).real();
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// Normalized primitive of the bump: 0 for s <= -1, 1 for s >= 1, smooth and increasing.
inline double bump_cdf(double s) {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const auto& table = detail::bump_knot_table();
  const int k = std::min(static_cast<int>((s + 1.0) * detail::kCdfKnots / 2.0), detail::kCdfKnots - 1);
  const double knot = -1.0 + 2.0 * k / detail::kCdfKnots;
  const double partial = table[k] + numerics::composite_gauss(bump, knot, s, 1, 16).real();
  return partial / table[detail::kCdfKnots];
}

/// One-dimensional partition profile: theta(s - m) summed over m in Z equals 1.
inline double partition_profile(double s) noexcept {
  const double b = bump(s);
  if (b == 0.0) return 0.0;
  return b / (bump(s - 1.0) + b + bump(s + 1.0));
}

/// The cutoffs zeta = eta(x, y) phi(t), eta_tilde, built for one delta in (0, 1].
///
/// phi rises on [1 + delta/8, 1 + 3 delta/8], equals 1 up to 2 - 3 delta/8 and falls to 0 at
/// 2 - delta/8, so its L1 distance to 1_[1,2] is exactly delta/2.
class CutoffSpec {
 public:
  static CutoffSpec build(double delta) {
    if (!(delta > 0.0) || delta > 1.0) throw DomainError("cutoff delta must lie in (0, 1]");
    return CutoffSpec(delta);
  }

  double delta() const noexcept { return delta_; }

  double phi_support_lo() const noexcept { return 1.0 + delta_ / 8.0; }
  double phi_support_hi() const noexcept { return 2.0 - delta_ / 8.0; }
  double phi_plateau_lo() const noexcept { return 1.0 + 3.0 * delta_ / 8.0; }
  double phi_plateau_hi() const noexcept { return 2.0 - 3.0 * delta_ / 8.0; }

  double phi(double t) const {
    const double w = delta_ / 8.0;
    return bump_cdf((t - (1.0 + delta_ / 4.0)) / w) - bump_cdf((t - (2.0 - delta_ / 4.0)) / w);
  }

  /// Tensor bump supported in [-1, 1]^2 whose integer translates sum to 1.
  double eta(double x, double y) const noexcept {
    return partition_profile(x) * partition_profile(y);
  }

  double eta_m(long m1, long m2, double x, double y) const noexcept {
    return eta(x - static_cast<double>(m1), y - static_cast<double>(m2));
  }

  /// Plateau cutoff: 1 on [-10, 10]^2, 0 outside (-20, 20)^2.
  double eta_tilde(double x, double y) const {
    return plateau(x) * plateau(y);
  }

  double zeta(double x, double y, double t) const { return eta(x, y) * phi(t); }

  /// sum_{|m1|, |m2| <= radius} eta_m(x, y).
  double partition_sum(double x, double y, long radius) const noexcept {
    double s = 0.0;
    for (long m1 = -radius; m1 <= radius; ++m1) {
      for (long m2 = -radius; m2 <= radius; ++m2) s += eta_m(m1, m2, x, y);
    }
    return s;
  }

  /// int |phi - 1_[1,2]| by quadrature over the two transition zones and the gaps.
  double phi_l1_gap() const {
    const numerics::QuadratureRule rule{4, 16, 1e-12, std::size_t{1} << 16};
    const auto gap = [this](double t) { return std::abs(1.0 - phi(t)); };
    double total = 2.0 * (phi_support_lo() - 1.0);  // phi vanishes on [1, 1+delta/8] and its mirror
    total += numerics::integrate_1d_or_throw(gap, phi_support_lo(), phi_plateau_lo(), rule).real();
    total += numerics::integrate_1d_or_throw(gap, phi_plateau_hi(), phi_support_hi(), rule).real();
    return total;
  }

 private:
  explicit CutoffSpec(double delta) : delta_(delta) {}

  static double plateau(double s) {
    return bump_cdf((s + 15.0) / 5.0) - bump_cdf((s - 15.0) / 5.0);
  }

  double delta_;
};

}  // namespace ergolab::bilinear
