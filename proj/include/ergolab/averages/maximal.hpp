#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ergolab/averages/average.hpp"
#include "ergolab/error.hpp"
#include "ergolab/numerics/norms.hpp"
#include "ergolab/numerics/quadrature.hpp"

namespace ergolab::averages {

/// Hoelder conjugate exponents, 1/p + 1/q = 1.
struct ExponentPair {
  double p = 2.0;
  double q = 2.0;

  static ExponentPair make(double p, double q) {
    if (!(p > 1.0) || !(q > 1.0) || !std::isfinite(p) || !std::isfinite(q)) {
      throw DomainError("exponents must lie in (1, inf)");
    }
    if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12) {
      throw DomainError("exponents must satisfy 1/p + 1/q = 1");
    }
    return {p, q};
  }
};

/// t -> f(S^{a t} T^{b t} x) with the orbit phases precomputed.
class OrbitSampler {
 public:
  OrbitSampler(const FlowPair& sys, const TrigPolynomial& f, const TorusPoint& x, double s_weight,
               double t_weight) {
    sys.require_dimension(f.dimension());
    sys.require_dimension(x.dimension());
    for (const auto& [k, c] : f.terms()) {
      base_.push_back(c * numerics::unit_phase(TrigPolynomial::dot(k, x.coords())));
      speed_.push_back(s_weight * dynamics::s_speed(sys, k) + t_weight * dynamics::t_speed(sys, k));
    }
  }

  cplx operator()(double t) const {
    cplx s{};
    for (std::size_t i = 0; i < base_.size(); ++i) s += base_[i] * numerics::unit_phase(t * speed_[i]);
    return s;
  }

 private:
  std::vector<cplx> base_;
  std::vector<double> speed_;
};

/// ceil(log2(N^2 / resolution)): the last dyadic piece has length below `resolution`.
inline int default_m_max(double n, double resolution = 1e-6) {
  return std::max(1, static_cast<int>(std::ceil(std::log2(n * n / resolution))));
}

struct MaximalChainResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double tail_bound = 0.0;
  int m_max = 0;
  bool holds = false;
};

/// |A_N(f1, f2)(x)| against the Hoelder and dyadic-splitting bound for kappa = 2:
///   (1/N int_0^N |f1(S^t x)|^p)^{1/p}
///     * (sum_{m<=m_max} 2^{-m/2} (1/L_m) int_0^{L_m} |f2(T^s x)|^q ds + tail)^{1/q},
/// with L_m = 2^{1-m} N^2 and tail = sum_{m>m_max} 2^{-m/2} (sum |c_k|)^q.
inline MaximalChainResult maximal_chain_check(const FlowPair& sys, const TrigPolynomial& f1,
                                              const TrigPolynomial& f2, const TorusPoint& x,
                                              double n, const ExponentPair& exps, int m_max) {
  ExponentPair::make(exps.p, exps.q);
  if (!(n >= 1.0)) throw DomainError("maximal chain needs N >= 1");
  if (m_max < 1) throw DomainError("maximal chain needs m_max >= 1");

  MaximalChainResult r;
  r.m_max = m_max;
  r.lhs = std::abs(compute_average(sys, f1, f2, x, AverageRequest{n, 2.0, {}}));

  const numerics::QuadratureRule rule{2, 8, 1e-10, std::size_t{1} << 20};
  const OrbitSampler g1(sys, f1, x, 1.0, 0.0);
  const OrbitSampler g2(sys, f2, x, 0.0, 1.0);
  const auto pow_abs1 = [&](double t) { return std::pow(std::abs(g1(t)), exps.p); };
  const auto pow_abs2 = [&](double s) { return std::pow(std::abs(g2(s)), exps.q); };

  const double first = numerics::integrate_1d_or_throw(pow_abs1, 0.0, n, rule).real() / n;

  // Nested prefixes: I_m = int_0^{L_m}, built from the innermost piece outwards.
  std::vector<double> lengths(static_cast<std::size_t>(m_max) + 1);
  for (int m = 1; m <= m_max; ++m) lengths[m] = std::ldexp(n * n, 1 - m);
  double prefix = numerics::integrate_1d_or_throw(pow_abs2, 0.0, lengths[m_max], rule).real();
  double chain = std::pow(2.0, -0.5 * m_max) * prefix / lengths[m_max];
  for (int m = m_max - 1; m >= 1; --m) {
    prefix += numerics::integrate_1d_or_throw(pow_abs2, lengths[m + 1], lengths[m], rule).real();
    chain += std::pow(2.0, -0.5 * m) * prefix / lengths[m];
  }
  const double geometric_tail = std::pow(2.0, -0.5 * (m_max + 1)) / (1.0 - std::sqrt(0.5));
  r.tail_bound = geometric_tail * std::pow(f2.sup_bound(), exps.q);
  chain += r.tail_bound;

  r.rhs = std::pow(std::max(first, 0.0), 1.0 / exps.p) * std::pow(std::max(chain, 0.0), 1.0 / exps.q);
  r.holds = r.lhs <= r.rhs + 1e-6;
  return r;
}

/// sup over N in {step, 2 step, ..., n_max} of |A_N(f1, f2)(x)|: the maximal function
/// restricted to the grid step * Z.
inline double grid_maximal_average(const FlowPair& sys, const TrigPolynomial& f1,
                                   const TrigPolynomial& f2, const TorusPoint& x, double step,
                                   double n_max, double kappa = 2.0) {
  if (!(step > 0.0) || !(n_max >= step)) throw DomainError("maximal grid needs 0 < step <= N_max");
  const auto terms = expand_phase_terms(sys, f1, f2, x);
  // Consecutive grid values share their prefix integral.
  double best = 0.0;
  cplx running{};
  double prev = 0.0;
  const auto count = static_cast<std::size_t>(std::floor(n_max / step + 1e-9));
  for (std::size_t j = 1; j <= count; ++j) {
    const double n = step * static_cast<double>(j);
    running += integrate_phase_terms(terms, kappa, prev, n);
    prev = n;
    best = std::max(best, std::abs(running) / n);
  }
  return best;
}

/// Weak-L1 norm over uniformly weighted x samples of the grid maximal function.
inline double maximal_weak_l1_estimate(const FlowPair& sys, const TrigPolynomial& f1,
                                       const TrigPolynomial& f2,
                                       const std::vector<TorusPoint>& xs, double step,
                                       double n_max, double kappa = 2.0) {
  std::vector<cplx> values;
  values.reserve(xs.size());
  for (const auto& x : xs) values.emplace_back(grid_maximal_average(sys, f1, f2, x, step, n_max, kappa));
  return numerics::weak_l1_norm(values, 1.0);
}

}  // namespace ergolab::averages
