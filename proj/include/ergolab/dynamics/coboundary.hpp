#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "ergolab/dynamics/trig_polynomial.hpp"
#include "ergolab/error.hpp"

namespace ergolab::dynamics {

/// f = (g o S^delta - g) + h with h invariant under every S^t.
struct CoboundaryDecomposition {
  TrigPolynomial invariant_part;  // h
  TrigPolynomial transfer_part;   // g
  double delta = 1.0;

  /// (U^delta - I) g + h, for checking against the decomposed function.
  TrigPolynomial reconstruct(const FlowPair& sys) const {
    return koopman_apply(sys, transfer_part, delta, 0.0) - transfer_part + invariant_part;
  }
};

/// Speeds |k.s_dir| at or below this count as exactly invariant.
inline constexpr double kInvariantSpeed = 1e-14;

/// Splits f into the kernel of U^delta - I (modes with k.s_dir = 0) and a preimage under
/// U^delta - I of the remaining modes: g_k = c_k / (e^{2 pi i delta k.s} - 1).
///
/// Throws ResonanceError when a non-invariant mode has |e^{2 pi i delta k.s} - 1| below
/// resonance_floor.
inline CoboundaryDecomposition coboundary_decompose(const FlowPair& sys, const TrigPolynomial& f,
                                                    double delta,
                                                    double resonance_floor = 1e-8) {
  sys.require_dimension(f.dimension());
  if (!(delta > 0.0) || delta > 1.0) throw DomainError("coboundary step must lie in (0, 1]");
  CoboundaryDecomposition out{TrigPolynomial(f.dimension()), TrigPolynomial(f.dimension()),
                              delta};
  for (const auto& [k, c] : f.terms()) {
    const double speed = s_speed(sys, k);
    if (std::abs(speed) <= kInvariantSpeed) {
      out.invariant_part.add_term(k, c);
      continue;
    }
    const cplx denom = numerics::unit_phase(delta * speed) - 1.0;
    if (std::abs(denom) < resonance_floor) {
      std::ostringstream msg;
      msg << "near-resonant frequency k=(";
      for (std::size_t i = 0; i < k.size(); ++i) msg << (i ? "," : "") << k[i];
      msg << "): |e^{2 pi i delta k.s} - 1| = " << std::abs(denom) << " < " << resonance_floor;
      throw ResonanceError(msg.str(), k);
    }
    out.transfer_part.add_term(k, c / denom);
  }
  return out;
}

}  // namespace ergolab::dynamics
