#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "ergolab/error.hpp"

namespace ergolab::numerics {

using cplx = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n >= 1 && (n & (n - 1)) == 0;
}

/// e^{2 pi i x}, with the argument reduced modulo 1 first so large phases keep
/// their fractional part.
inline cplx unit_phase(double x) noexcept {
  const double r = x - std::nearbyint(x);
  const double angle = 2.0 * std::numbers::pi * r;
  return {std::cos(angle), std::sin(angle)};
}

/// Iterative radix-2 transform of fixed power-of-two length.
///
/// forward(x)_k = sum_j x_j e^{-2 pi i jk/n}; inverse uses the conjugate kernel
/// and is left unnormalized. One instance can be shared across threads.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) {
      throw ConfigError("FFT length " + std::to_string(n) + " is not a power of two");
    }
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n_) ++bits;
    rev_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) {
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      }
      rev_[i] = r;
    }
    twiddle_.resize(n_ / 2 + (n_ == 1 ? 1 : 0));
    for (std::size_t k = 0; k < n_ / 2; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(n_);
      twiddle_[k] = {std::cos(angle), std::sin(angle)};
    }
  }

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<cplx> data) const { run(data, false); }
  void inverse(std::span<cplx> data) const { run(data, true); }

 private:
  void run(std::span<cplx> a, bool inverse) const {
    if (a.size() != n_) throw ConfigError("FFT buffer length mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          cplx w = twiddle_[j * step];
          if (inverse) w = std::conj(w);
          const cplx u = a[start + j];
          const cplx v = a[start + j + half] * w;
          a[start + j] = u + v;
          a[start + j + half] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<cplx> twiddle_;
};

/// Signed frequency index of FFT slot idx: 0..n/2-1 stay, n/2..n-1 map to -n/2..-1.
constexpr long signed_index(std::size_t idx, std::size_t n) noexcept {
  return idx < n / 2 ? static_cast<long>(idx)
                     : static_cast<long>(idx) - static_cast<long>(n);
}

/// Inverse of signed_index for |k| <= n/2 (k = n/2 folds onto the Nyquist slot).
constexpr std::size_t slot_of(long k, std::size_t n) noexcept {
  const long nn = static_cast<long>(n);
  return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

}  // namespace ergolab::numerics
