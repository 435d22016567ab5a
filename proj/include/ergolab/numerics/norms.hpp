#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "ergolab/error.hpp"
#include "ergolab/numerics/grid.hpp"

namespace ergolab::numerics {

/// Riemann-sum L^p norm with cell weight h_u * h_v; p = infinity gives the max modulus.
inline double lp_norm(const GridFunction2D& f, double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("lp_norm needs p >= 1");
  const auto samples = f.samples();
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, std::abs(s));
    return m;
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& s : samples) acc += std::norm(s);
    return std::sqrt(acc * f.grid().cell_area());
  }
  if (p == 1.0) {
    for (const auto& s : samples) acc += std::abs(s);
    return acc * f.grid().cell_area();
  }
  for (const auto& s : samples) acc += std::pow(std::abs(s), p);
  return std::pow(acc * f.grid().cell_area(), 1.0 / p);
}

/// L^2 norm computed on the Fourier side: (P_u P_v sum |c_k|^2)^{1/2}.
inline double spectral_l2_norm(const Spectrum2D& s) {
  double acc = 0.0;
  for (const auto& c : s.coefficients()) acc += std::norm(c);
  return std::sqrt(acc * s.grid().period_u * s.grid().period_v);
}

/// sup_a a * mass{|value| > a} for a weighted finite sample set.
///
/// The supremum is approached from below each distinct level |v|, so it equals
/// max_k |v|_(k) * mass{|v| >= |v|_(k)}; computed exactly after sorting.
inline double weak_l1_norm(std::span<const cplx> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw ConfigError("weak_l1_norm: values and weights differ in length");
  }
  if (values.empty()) return 0.0;
  std::vector<std::pair<double, double>> level;  // (|v|, weight)
  level.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(weights[k] >= 0.0)) throw DomainError("weak_l1_norm: weights must be nonnegative");
    level.emplace_back(std::abs(values[k]), weights[k]);
  }
  std::sort(level.begin(), level.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = 0.0;
  double tail = 0.0;
  std::size_t k = 0;
  while (k < level.size()) {
    const double v = level[k].first;
    while (k < level.size() && level[k].first == v) tail += level[k++].second;
    best = std::max(best, v * tail);
  }
  return best;
}

/// Uniform-weight convenience overload: every value carries total_mass / n.
inline double weak_l1_norm(std::span<const cplx> values, double total_mass = 1.0) {
  const std::vector<double> w(values.size(),
                              values.empty() ? 0.0 : total_mass / static_cast<double>(values.size()));
  return weak_l1_norm(values, std::span<const double>(w));
}

}  // namespace ergolab::numerics
