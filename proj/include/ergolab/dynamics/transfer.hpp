#pragma once

#include <vector>

#include "ergolab/dynamics/trig_polynomial.hpp"
#include "ergolab/error.hpp"
#include "ergolab/numerics/grid.hpp"

namespace ergolab::dynamics {

/// Padding the embedding grid needs beyond the orbit box [0, 3N] x [0, 2N^2].
inline void require_transfer_padding(const numerics::Grid2D& grid, double n) {
  if (!(n >= 1.0)) throw DomainError("transference needs N >= 1");
  if (grid.period_u < 3.0 * n + 4.0 || grid.period_v < 2.0 * n * n + 4.0) {
    throw ConfigError("embedding grid too small: need period_u >= 3N+4 and period_v >= 2N^2+4");
  }
}

/// Samples F(u, v) = f(S^u T^v x) 1_[0,3N](u) 1_[0,2N^2](v) on the grid, evaluating the
/// polynomial exactly at every node.
inline numerics::GridFunction2D embed_transfer_function(const FlowPair& sys,
                                                        const TrigPolynomial& f,
                                                        const TorusPoint& x, double n,
                                                        const numerics::Grid2D& grid) {
  sys.require_dimension(f.dimension());
  sys.require_dimension(x.dimension());
  require_transfer_padding(grid, n);
  const double u_max = 3.0 * n;
  const double v_max = 2.0 * n * n;

  // f(S^u T^v x) = sum_k c_k e(k.x) e(u k.s) e(v k.t), separable in (u, v).
  std::vector<cplx> base;
  std::vector<double> su, sv;
  for (const auto& [k, c] : f.terms()) {
    base.push_back(c * numerics::unit_phase(TrigPolynomial::dot(k, x.coords())));
    su.push_back(s_speed(sys, k));
    sv.push_back(t_speed(sys, k));
  }
  std::vector<cplx> out(grid.size(), cplx{});
  std::vector<cplx> row(base.size());
  for (std::size_t i = 0; i < grid.n_u; ++i) {
    const double u = grid.u(i);
    if (u > u_max) break;
    for (std::size_t m = 0; m < base.size(); ++m) row[m] = base[m] * numerics::unit_phase(u * su[m]);
    for (std::size_t j = 0; j < grid.n_v; ++j) {
      const double v = grid.v(j);
      if (v > v_max) break;
      cplx s{};
      for (std::size_t m = 0; m < base.size(); ++m) s += row[m] * numerics::unit_phase(v * sv[m]);
      out[i * grid.n_v + j] = s;
    }
  }
  return numerics::GridFunction2D(grid, std::move(out));
}

}  // namespace ergolab::dynamics
