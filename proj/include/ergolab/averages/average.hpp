#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/dynamics/torus.hpp"
#include "ergolab/dynamics/trig_polynomial.hpp"
#include "ergolab/error.hpp"
#include "ergolab/numerics/phase_integral.hpp"
#include "ergolab/numerics/quadrature.hpp"

namespace ergolab::averages {

using dynamics::FlowPair;
using dynamics::Frequency;
using dynamics::TorusPoint;
using dynamics::TrigPolynomial;
using numerics::cplx;

/// A_N(f1, f2)(x) = (1/N) int_0^N f1(S^t x) f2(T^{t^kappa} x) dt.
struct AverageRequest {
  double n = 1.0;
  double kappa = 2.0;
  numerics::QuadratureRule rule{};

  void validate() const {
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("average length N must be positive");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive");
  }

  /// kappa = 1 is accepted, but both orbits are then linear and nothing curved remains.
  std::vector<std::string> warnings() const {
    if (kappa == 1.0) {
      return {"kappa = 1 gives linear-linear averages, outside the quadratic-type regime"};
    }
    return {};
  }
};

/// c e^{2 pi i (linear t + power t^kappa)}.
struct PhaseTerm {
  cplx coefficient;
  double linear;
  double power;
};

/// Expands f1(S^{t + shift} x) f2(T^{t^kappa} x) into pure phases, merging equal
/// (linear, power) pairs.
inline std::vector<PhaseTerm> expand_phase_terms(const FlowPair& sys, const TrigPolynomial& f1,
                                                 const TrigPolynomial& f2, const TorusPoint& x,
                                                 double shift = 0.0) {
  sys.require_dimension(f1.dimension());
  sys.require_dimension(f2.dimension());
  sys.require_dimension(x.dimension());
  std::map<std::pair<double, double>, cplx> merged;
  for (const auto& [k, c] : f1.terms()) {
    const double a = dynamics::s_speed(sys, k);
    const cplx ck =
        c * numerics::unit_phase(TrigPolynomial::dot(k, x.coords()) + shift * a);
    for (const auto& [m, d] : f2.terms()) {
      const double b = dynamics::t_speed(sys, m);
      const cplx dm = d * numerics::unit_phase(TrigPolynomial::dot(m, x.coords()));
      merged[{a, b}] += ck * dm;
    }
  }
  std::vector<PhaseTerm> out;
  out.reserve(merged.size());
  for (const auto& [key, c] : merged) {
    if (c != cplx{}) out.push_back({c, key.first, key.second});
  }
  return out;
}

/// sum_terms c int_a^b e(linear t + power t^kappa) dt.
inline cplx integrate_phase_terms(const std::vector<PhaseTerm>& terms, double kappa, double a,
                                  double b) {
  cplx total{};
  for (const auto& term : terms) {
    total += term.coefficient *
             numerics::phase_integral(numerics::Phase{term.linear, term.power, kappa}, a, b);
  }
  return total;
}

/// A_N computed term by term with the oscillatory phase kernel; accurate for any N.
inline cplx compute_average(const FlowPair& sys, const TrigPolynomial& f1,
                            const TrigPolynomial& f2, const TorusPoint& x,
                            const AverageRequest& req) {
  req.validate();
  const auto terms = expand_phase_terms(sys, f1, f2, x);
  return integrate_phase_terms(terms, req.kappa, 0.0, req.n) / req.n;
}

/// A_N by direct composite Gauss-Legendre on the evaluated integrand. Independent of the
/// phase kernel; practical only while N^kappa stays moderate. For fractional kappa the
/// variable is t = s^2, which removes the t^kappa kink at 0 whenever 2 kappa is an integer.
inline numerics::Integral average_by_quadrature(const FlowPair& sys, const TrigPolynomial& f1,
                                                const TrigPolynomial& f2, const TorusPoint& x,
                                                const AverageRequest& req) {
  req.validate();
  sys.require_dimension(x.dimension());
  const auto integrand = [&](double t) {
    return f1.evaluate(dynamics::flow_apply(sys, x, t, 0.0)) *
           f2.evaluate(dynamics::flow_apply(sys, x, 0.0, std::pow(t, req.kappa)));
  };
  numerics::Integral r;
  if (std::floor(req.kappa) == req.kappa) {
    r = numerics::integrate_1d(integrand, 0.0, req.n, req.rule);
  } else {
    const auto squared = [&](double s) { return 2.0 * s * integrand(s * s); };
    r = numerics::integrate_1d(squared, 0.0, std::sqrt(req.n), req.rule);
  }
  r.value /= req.n;
  r.previous /= req.n;
  return r;
}

/// (1/N) int_0^N f2(T^{t^kappa} x) dt.
inline cplx single_quadratic_average(const FlowPair& sys, const TrigPolynomial& f2,
                                     const TorusPoint& x, double n, double kappa = 2.0) {
  return compute_average(sys, TrigPolynomial::constant(f2.dimension(), 1.0), f2, x,
                         AverageRequest{n, kappa, {}});
}

/// (1/N) int_0^N (f1(S^{t+delta} x) - f1(S^t x)) f2(T^{t^kappa} x) dt.
inline cplx difference_average(const FlowPair& sys, const TrigPolynomial& f1,
                               const TrigPolynomial& f2, const TorusPoint& x, double n,
                               double delta, double kappa = 2.0) {
  if (!(delta > 0.0) || delta > 1.0) throw DomainError("difference step must lie in (0, 1]");
  const AverageRequest req{n, kappa, {}};
  req.validate();
  auto shifted = expand_phase_terms(sys, f1, f2, x, delta);
  for (auto& term : expand_phase_terms(sys, f1, f2, x)) {
    term.coefficient = -term.coefficient;
    shifted.push_back(term);
  }
  return integrate_phase_terms(shifted, kappa, 0.0, n) / n;
}

}  // namespace ergolab::averages
