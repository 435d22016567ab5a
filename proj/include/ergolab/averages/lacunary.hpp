#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/averages/average.hpp"
#include "ergolab/error.hpp"

namespace ergolab::averages {

/// Geometric scales alpha^n for 0 <= n <= n_max.
class LacunarySchedule {
 public:
  static LacunarySchedule make(double alpha, int n_max) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("lacunary ratio must exceed 1");
    if (n_max < 1) throw DomainError("lacunary schedule needs n_max >= 1");
    return LacunarySchedule(alpha, n_max);
  }

  double alpha() const noexcept { return alpha_; }
  int n_max() const noexcept { return n_max_; }

  std::vector<double> scales() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max_) + 1);
    for (int n = 0; n <= n_max_; ++n) out.push_back(std::pow(alpha_, n));
    return out;
  }

 private:
  LacunarySchedule(double alpha, int n_max) : alpha_(alpha), n_max_(n_max) {}
  double alpha_;
  int n_max_;
};

struct TrajectoryRecord {
  std::vector<double> scales;
  std::vector<cplx> values;
  std::optional<cplx> limit_estimate;
  double cauchy_residual = 0.0;
};

/// Largest pairwise distance among the last three values (fewer if the list is shorter).
inline double cauchy_residual(const std::vector<cplx>& values) {
  const std::size_t first = values.size() > 3 ? values.size() - 3 : 0;
  double r = 0.0;
  for (std::size_t i = first; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) r = std::max(r, std::abs(values[i] - values[j]));
  }
  return r;
}

inline TrajectoryRecord lacunary_trajectory(const FlowPair& sys, const TrigPolynomial& f1,
                                            const TrigPolynomial& f2, const TorusPoint& x,
                                            const LacunarySchedule& sched, double kappa = 2.0) {
  TrajectoryRecord rec;
  rec.scales = sched.scales();
  const auto terms = expand_phase_terms(sys, f1, f2, x);
  for (double n : rec.scales) {
    AverageRequest{n, kappa, {}}.validate();
    rec.values.push_back(integrate_phase_terms(terms, kappa, 0.0, n) / n);
  }
  rec.cauchy_residual = cauchy_residual(rec.values);
  const cplx last = rec.values.back();
  if (rec.cauchy_residual < 1e-3 * (1.0 + std::abs(last))) rec.limit_estimate = last;
  return rec;
}

/// Throws DomainError unless f is real-valued and nonnegative on the torus. Real-valuedness
/// is checked on coefficients; nonnegativity is certified by c_0 >= sum_{k != 0} |c_k| or,
/// failing that, by sampling a torus grid finer than the highest frequency.
inline void require_nonnegative(const TrigPolynomial& f, const char* name) {
  const double scale = std::max(1.0, f.sup_bound());
  double others = 0.0;
  int max_freq = 0;
  for (const auto& [k, c] : f.terms()) {
    Frequency neg(k);
    for (auto& v : neg) v = -v;
    if (std::abs(c - std::conj(f.coefficient(neg))) > 1e-12 * scale) {
      throw DomainError(std::string(name) + " must be real-valued");
    }
    bool zero = true;
    for (int v : k) {
      zero = zero && v == 0;
      max_freq = std::max(max_freq, std::abs(v));
    }
    if (!zero) others += std::abs(c);
  }
  const double c0 = f.coefficient(Frequency(f.dimension(), 0)).real();
  if (c0 + 1e-12 * scale >= others) return;

  const int per_axis = std::min(8 * max_freq + 8, 256);
  std::size_t total = 1;
  for (std::size_t i = 0; i < f.dimension(); ++i) total *= static_cast<std::size_t>(per_axis);
  if (total > (1u << 22)) throw DomainError(std::string(name) + " nonnegativity not certifiable");
  std::vector<double> pt(f.dimension());
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    for (auto& c : pt) {
      c = static_cast<double>(r % per_axis) / per_axis;
      r /= per_axis;
    }
    if (f.evaluate(pt).real() < -1e-12 * scale) {
      throw DomainError(std::string(name) + " takes negative values; use |g|^2 forms");
    }
  }
}

struct SandwichResult {
  double lower = 0.0;   // alpha^{-1} A_{alpha^k}
  double middle = 0.0;  // A_N
  double upper = 0.0;   // alpha A_{alpha^{k+1}}
  double lower_scale = 0.0;
  double upper_scale = 0.0;
  bool holds = false;
};

/// Largest k with alpha^k <= N, robust to rounding in log(N)/log(alpha).
inline int lacunary_floor(double alpha, double n) {
  int k = static_cast<int>(std::floor(std::log(n) / std::log(alpha)));
  while (std::pow(alpha, k + 1) <= n) ++k;
  while (std::pow(alpha, k) > n) --k;
  return k;
}

/// For nonnegative f1, f2: alpha^{-1} A_{alpha^k} <= A_N <= alpha A_{alpha^{k+1}} with
/// k = floor(log_alpha N).
inline SandwichResult sandwich_check(const FlowPair& sys, const TrigPolynomial& f1,
                                     const TrigPolynomial& f2, const TorusPoint& x, double alpha,
                                     double n, double kappa = 2.0) {
  if (!(alpha > 1.0)) throw DomainError("sandwich ratio must exceed 1");
  AverageRequest{n, kappa, {}}.validate();
  require_nonnegative(f1, "f1");
  require_nonnegative(f2, "f2");

  const int k = lacunary_floor(alpha, n);
  SandwichResult r;
  r.lower_scale = std::pow(alpha, k);
  r.upper_scale = std::pow(alpha, k + 1);
  const auto terms = expand_phase_terms(sys, f1, f2, x);
  const auto avg = [&](double m) { return (integrate_phase_terms(terms, kappa, 0.0, m) / m).real(); };
  r.lower = avg(r.lower_scale) / alpha;
  r.middle = avg(n);
  r.upper = alpha * avg(r.upper_scale);
  const double tol = 1e-9 * std::max({1.0, std::abs(r.upper), std::abs(r.middle)});
  r.holds = r.lower <= r.middle + tol && r.middle <= r.upper + tol;
  return r;
}

}  // namespace ergolab::averages
