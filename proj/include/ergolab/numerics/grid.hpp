#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/error.hpp"
#include "ergolab/numerics/fft.hpp"

namespace ergolab::numerics {

/// Uniform periodic sampling of the box [0, period_u) x [0, period_v).
/// Sample (i, j) sits at (i * h_u, j * h_v); coordinates are understood modulo the periods.
struct Grid2D {
  double period_u = 1.0;
  double period_v = 1.0;
  std::size_t n_u = 2;
  std::size_t n_v = 2;

  static Grid2D make(double period_u, double period_v, std::size_t n_u, std::size_t n_v) {
    if (!(period_u > 0.0) || !(period_v > 0.0) || !std::isfinite(period_u) ||
        !std::isfinite(period_v)) {
      throw ConfigError("grid periods must be positive and finite");
    }
    if (n_u < 2 || n_v < 2 || !is_power_of_two(n_u) || !is_power_of_two(n_v)) {
      throw ConfigError("grid sizes must be powers of two >= 2, got " +
                        std::to_string(n_u) + "x" + std::to_string(n_v));
    }
    return Grid2D{period_u, period_v, n_u, n_v};
  }

  double h_u() const noexcept { return period_u / static_cast<double>(n_u); }
  double h_v() const noexcept { return period_v / static_cast<double>(n_v); }
  double cell_area() const noexcept { return h_u() * h_v(); }
  std::size_t size() const noexcept { return n_u * n_v; }

  double u(std::size_t i) const noexcept { return static_cast<double>(i) * h_u(); }
  double v(std::size_t j) const noexcept { return static_cast<double>(j) * h_v(); }

  /// Representative of u(i) in [-period_u/2, period_u/2).
  double centered_u(std::size_t i) const noexcept {
    return static_cast<double>(signed_index(i, n_u)) * h_u();
  }
  double centered_v(std::size_t j) const noexcept {
    return static_cast<double>(signed_index(j, n_v)) * h_v();
  }

  /// Physical frequency of spectral slot idx.
  double frequency_u(std::size_t idx) const noexcept {
    return static_cast<double>(signed_index(idx, n_u)) / period_u;
  }
  double frequency_v(std::size_t idx) const noexcept {
    return static_cast<double>(signed_index(idx, n_v)) / period_v;
  }

  bool operator==(const Grid2D&) const = default;
};

/// Complex samples on a Grid2D, row-major with u as the slow index.
class GridFunction2D {
 public:
  GridFunction2D() = default;

  explicit GridFunction2D(Grid2D grid)
      : grid_(grid), samples_(grid.size(), cplx{0.0, 0.0}) {}

  GridFunction2D(Grid2D grid, std::vector<cplx> samples)
      : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
      throw ConfigError("sample count does not match grid size");
    }
    for (const auto& s : samples_) {
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        throw DomainError("grid function samples must be finite");
      }
    }
  }

  /// Samples f(u, v) at the grid points (u, v) = (i h_u, j h_v).
  template <class F>
  static GridFunction2D sample(const Grid2D& grid, F&& f) {
    std::vector<cplx> values(grid.size());
    for (std::size_t i = 0; i < grid.n_u; ++i) {
      for (std::size_t j = 0; j < grid.n_v; ++j) {
        values[i * grid.n_v + j] = cplx(f(grid.u(i), grid.v(j)));
      }
    }
    return GridFunction2D(grid, std::move(values));
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const cplx> samples() const noexcept { return samples_; }
  std::span<cplx> samples() noexcept { return samples_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return samples_[i * grid_.n_v + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept {
    return samples_[i * grid_.n_v + j];
  }

  GridFunction2D& operator+=(const GridFunction2D& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] += other.samples_[k];
    return *this;
  }
  GridFunction2D& operator-=(const GridFunction2D& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] -= other.samples_[k];
    return *this;
  }
  GridFunction2D& operator*=(cplx scale) {
    for (auto& s : samples_) s *= scale;
    return *this;
  }
  friend GridFunction2D operator+(GridFunction2D a, const GridFunction2D& b) { return a += b; }
  friend GridFunction2D operator-(GridFunction2D a, const GridFunction2D& b) { return a -= b; }
  friend GridFunction2D operator*(cplx s, GridFunction2D a) { return a *= s; }

  /// Largest pointwise modulus of the difference; requires identical grids.
  double max_abs_difference(const GridFunction2D& other) const {
    require_same_grid(other);
    double m = 0.0;
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      m = std::max(m, std::abs(samples_[k] - other.samples_[k]));
    }
    return m;
  }

 private:
  void require_same_grid(const GridFunction2D& other) const {
    if (!(grid_ == other.grid_)) throw ConfigError("grid functions live on different grids");
  }

  Grid2D grid_{};
  std::vector<cplx> samples_;
};

/// Fourier coefficients c_k with F(u, v) = sum_k c_k e^{2 pi i (k_u u / P_u + k_v v / P_v)}.
/// Stored in FFT slot order; signed indices via at().
class Spectrum2D {
 public:
  Spectrum2D() = default;
  Spectrum2D(Grid2D grid, std::vector<cplx> coefficients)
      : grid_(grid), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != grid_.size()) {
      throw ConfigError("coefficient count does not match grid size");
    }
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const cplx> coefficients() const noexcept { return coefficients_; }
  std::span<cplx> coefficients() noexcept { return coefficients_; }

  cplx& slot(std::size_t a, std::size_t b) noexcept { return coefficients_[a * grid_.n_v + b]; }
  const cplx& slot(std::size_t a, std::size_t b) const noexcept {
    return coefficients_[a * grid_.n_v + b];
  }

  /// Coefficient at signed frequency indices (k_u, k_v), |k| <= n/2.
  cplx at(long k_u, long k_v) const noexcept {
    return slot(slot_of(k_u, grid_.n_u), slot_of(k_v, grid_.n_v));
  }

  /// Spectral (trigonometric) interpolation at an arbitrary point.
  cplx evaluate(double u, double v) const {
    std::vector<cplx> ev(grid_.n_v);
    for (std::size_t b = 0; b < grid_.n_v; ++b) ev[b] = unit_phase(grid_.frequency_v(b) * v);
    cplx total{0.0, 0.0};
    for (std::size_t a = 0; a < grid_.n_u; ++a) {
      cplx row{0.0, 0.0};
      for (std::size_t b = 0; b < grid_.n_v; ++b) row += slot(a, b) * ev[b];
      if (row != cplx{}) total += unit_phase(grid_.frequency_u(a) * u) * row;
    }
    return total;
  }

 private:
  Grid2D grid_{};
  std::vector<cplx> coefficients_;
};

namespace detail {

inline void transform_2d(const Grid2D& g, std::vector<cplx>& data, bool inverse) {
  const Fft fft_v(g.n_v);
  const Fft fft_u(g.n_u);
  for (std::size_t i = 0; i < g.n_u; ++i) {
    std::span<cplx> row(data.data() + i * g.n_v, g.n_v);
    inverse ? fft_v.inverse(row) : fft_v.forward(row);
  }
  std::vector<cplx> column(g.n_u);
  for (std::size_t j = 0; j < g.n_v; ++j) {
    for (std::size_t i = 0; i < g.n_u; ++i) column[i] = data[i * g.n_v + j];
    inverse ? fft_u.inverse(column) : fft_u.forward(column);
    for (std::size_t i = 0; i < g.n_u; ++i) data[i * g.n_v + j] = column[i];
  }
}

}  // namespace detail

inline Spectrum2D dft_forward(const GridFunction2D& f) {
  const Grid2D& g = f.grid();
  if (!is_power_of_two(g.n_u) || !is_power_of_two(g.n_v)) {
    throw ConfigError("dft requires power-of-two grid sizes");
  }
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  detail::transform_2d(g, data, false);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : data) c *= scale;
  return Spectrum2D(g, std::move(data));
}

inline GridFunction2D dft_inverse(const Spectrum2D& s) {
  const Grid2D& g = s.grid();
  if (!is_power_of_two(g.n_u) || !is_power_of_two(g.n_v)) {
    throw ConfigError("dft requires power-of-two grid sizes");
  }
  std::vector<cplx> data(s.coefficients().begin(), s.coefficients().end());
  detail::transform_2d(g, data, true);
  return GridFunction2D(g, std::move(data));
}

/// Multiplies every coefficient by m(xi_u, xi_v) and transforms back.
template <class Multiplier>
GridFunction2D apply_multiplier(const GridFunction2D& f, Multiplier&& m) {
  Spectrum2D s = dft_forward(f);
  const Grid2D& g = f.grid();
  for (std::size_t a = 0; a < g.n_u; ++a) {
    for (std::size_t b = 0; b < g.n_v; ++b) {
      s.slot(a, b) *= m(g.frequency_u(a), g.frequency_v(b));
    }
  }
  return dft_inverse(s);
}

/// Translate by (du, dv) using trigonometric interpolation: result(u, v) = F(u + du, v + dv).
inline GridFunction2D spectral_shift(const GridFunction2D& f, double du, double dv) {
  return apply_multiplier(f, [du, dv](double xu, double xv) {
    return unit_phase(xu * du + xv * dv);
  });
}

}  // namespace ergolab::numerics
