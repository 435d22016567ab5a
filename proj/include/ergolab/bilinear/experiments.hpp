#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/bilinear/band.hpp"
#include "ergolab/bilinear/cutoffs.hpp"
#include "ergolab/bilinear/local_operator.hpp"
#include "ergolab/error.hpp"
#include "ergolab/numerics/fit.hpp"
#include "ergolab/numerics/norms.hpp"
#include "ergolab/numerics/parallel.hpp"
#include "ergolab/numerics/rng.hpp"

namespace ergolab::bilinear {

using numerics::FitResult;

/// Random grid function with complex Gaussian coefficients under the envelope
/// exp(-|xi|^2 / (2 sigma^2)), optionally restricted to |xi_1| <= band, scaled to unit L2.
inline GridFunction2D random_band_limited(const Grid2D& g, numerics::CounterRng& rng,
                                          double sigma, std::optional<double> band = std::nullopt) {
  numerics::Spectrum2D s(g, std::vector<cplx>(g.size()));
  double mass = 0.0;
  for (std::size_t a = 0; a < g.n_u; ++a) {
    for (std::size_t b = 0; b < g.n_v; ++b) {
      const double xu = g.frequency_u(a), xv = g.frequency_v(b);
      const double re = rng.normal(), im = rng.normal();
      if (band && !in_band(xu, *band)) continue;
      const double env = std::exp(-(xu * xu + xv * xv) / (2.0 * sigma * sigma));
      if (env < 1e-12) continue;
      s.slot(a, b) = env * cplx(re, im);
      mass += std::norm(s.slot(a, b));
    }
  }
  if (mass == 0.0) throw DomainError("band-limited family is empty on this grid");
  const double scale = 1.0 / std::sqrt(g.period_u * g.period_v * mass);
  for (auto& c : s.coefficients()) c *= scale;
  return numerics::dft_inverse(s);
}

/// R as a function of delta: fixed, or delta^{-1/2}.
struct RadiusRule {
  enum class Kind { fixed, inverse_sqrt };
  Kind kind = Kind::inverse_sqrt;
  double r = 1.0;

  double operator()(double delta) const {
    return kind == Kind::fixed ? r : 1.0 / std::sqrt(delta);
  }
};

struct DeltaDecayRow {
  double delta = 0.0;
  double r = 0.0;
  double norm_low = 0.0;    // family mean of ||B_delta(F_{1,R}, F2)||_1
  double norm_high = 0.0;   // family mean of ||B_delta(G_{1,R}, F2)||_1
  double norm_total = 0.0;  // family mean of ||B_delta(F1, F2)||_1
  bool triangle_holds = true;
};

struct DeltaDecayReport {
  std::vector<DeltaDecayRow> rows;
  std::optional<FitResult> total_fit;  // exponent = gamma_emp
  std::optional<FitResult> low_fit;    // slope of the low-band part in delta
  std::vector<std::string> notes;
};

namespace detail {

inline std::optional<FitResult> try_fit(const std::vector<double>& x, const std::vector<double>& y,
                                        const std::string& what, std::vector<std::string>& notes) {
  try {
    return numerics::fit_power_law(x, y);
  } catch (const DomainError& e) {
    notes.push_back(what + " fit degenerate: " + e.what());
    return std::nullopt;
  }
}

}  // namespace detail

using FunctionPair = std::pair<GridFunction2D, GridFunction2D>;

/// For each delta: rebuild the cutoffs, split F1 at R(delta), and record the family-mean
/// L1 norms of B_delta on the low part, the high part and the whole.
inline DeltaDecayReport delta_decay_experiment(const std::vector<FunctionPair>& family,
                                               const std::vector<double>& deltas,
                                               const RadiusRule& rule, double kappa = 2.0,
                                               std::size_t workers = numerics::worker_count()) {
  if (family.empty()) throw DomainError("delta-decay family is empty");
  if (deltas.size() < 4) throw DomainError("delta-decay needs at least 4 delta values");
  for (double d : deltas) {
    if (!(d > 0.0) || d > 1.0) {
      throw DomainError("delta must lie in (0, 1]; the claim is trivial for delta > 1");
    }
  }
  DeltaDecayReport report;
  const std::size_t m = family.size();
  for (double delta : deltas) {
    const CutoffSpec cut = CutoffSpec::build(delta);
    const double r = rule(delta);
    std::vector<double> low(m), high(m), total(m);
    numerics::parallel_for(
        m,
        [&](std::size_t k) {
          const auto& [f1, f2] = family[k];
          const BandSplit split = band_split(f1, r);
          low[k] = numerics::lp_norm(apply_B_delta(split.low, f2, cut, delta, kappa), 1.0);
          high[k] = numerics::lp_norm(apply_B_delta(split.high, f2, cut, delta, kappa), 1.0);
          total[k] = numerics::lp_norm(apply_B_delta(f1, f2, cut, delta, kappa), 1.0);
        },
        workers);
    DeltaDecayRow row{delta, r, 0.0, 0.0, 0.0, true};
    for (std::size_t k = 0; k < m; ++k) {
      row.norm_low += low[k] / static_cast<double>(m);
      row.norm_high += high[k] / static_cast<double>(m);
      row.norm_total += total[k] / static_cast<double>(m);
      row.triangle_holds = row.triangle_holds && total[k] <= low[k] + high[k] + 1e-8;
    }
    report.rows.push_back(row);
  }
  std::vector<double> x, y_total, y_low;
  for (const auto& row : report.rows) {
    x.push_back(row.delta);
    y_total.push_back(row.norm_total);
    y_low.push_back(row.norm_low);
  }
  report.total_fit = detail::try_fit(x, y_total, "total", report.notes);
  report.low_fit = detail::try_fit(x, y_low, "low-band", report.notes);
  return report;
}

/// Which function carries the spectral gap |xi_j| >= lambda: F1 in xi_1 or F2 in xi_2.
enum class ExclusionIndex { first = 1, second = 2 };

/// Seeded sparse families for the localization probe. Member k draws `modes` plane waves for
/// the excluded function with |xi_j| = lambda * u, u uniform in [1, 2), and a fixed
/// low-frequency partner with all |xi| <= low_band. Uniform draws are shared across lambda.
struct ProbeFamily {
  ExclusionIndex j = ExclusionIndex::first;
  std::uint64_t seed = 1;
  std::size_t modes = 6;
  double low_band = 2.0;

  std::pair<ModalFunction, ModalFunction> member(std::size_t k, double lambda) const {
    numerics::CounterRng rng(seed, k);
    const auto draw = [&](bool excluded) {
      ModalFunction f;
      double mass = 0.0;
      for (std::size_t p = 0; p < modes; ++p) {
        PlaneWave w;
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double gap = sign * lambda * rng.uniform(1.0, 2.0);
        const double free = rng.uniform(-low_band, low_band);
        const double other = rng.uniform(-low_band, low_band);
        if (!excluded) {
          w.xi_u = free;
          w.xi_v = other;
        } else if (j == ExclusionIndex::first) {
          w.xi_u = gap;
          w.xi_v = other;
        } else {
          w.xi_u = free;
          w.xi_v = gap;
        }
        const double re = rng.normal(), im = rng.normal();
        w.c = cplx(re, im);
        mass += std::norm(w.c);
        f.push_back(w);
      }
      for (auto& w : f) w.c /= std::sqrt(mass);
      return f;
    };
    ModalFunction f1 = draw(j == ExclusionIndex::first);
    ModalFunction f2 = draw(j == ExclusionIndex::second);
    return {std::move(f1), std::move(f2)};
  }
};

struct ProbeResult {
  std::vector<double> lambdas;
  std::vector<double> mean_l1;
  std::optional<FitResult> fit;  // exponent = -sigma_emp
  double sigma_emp = 0.0;
  double spearman = 0.0;
  std::vector<std::string> notes;
};

/// Family-mean L1 norm of the single-copy operator int F1(x+t,y) F2(x,y+t^kappa) zeta dt
/// at each lambda, with zeta held fixed across the sweep.
inline ProbeResult local_estimate_probe(
    const std::function<std::pair<ModalFunction, ModalFunction>(std::size_t, double)>& family,
    std::size_t family_size, const CutoffSpec& cut, const std::vector<double>& lambdas,
    const Grid2D& grid, double kappa = 2.0, std::size_t workers = numerics::worker_count()) {
  if (family_size == 0) throw DomainError("probe family is empty");
  if (lambdas.size() < 2) throw DomainError("probe needs at least 2 lambda values");
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > lambdas[k - 1])) throw DomainError("probe lambdas must increase");
  }
  ProbeResult out;
  out.lambdas = lambdas;
  std::vector<double> values(lambdas.size() * family_size);
  numerics::parallel_for(
      values.size(),
      [&](std::size_t idx) {
        const std::size_t li = idx / family_size, k = idx % family_size;
        const auto [f1, f2] = family(k, lambdas[li]);
        values[idx] = numerics::lp_norm(local_operator_modal(f1, f2, cut, grid, kappa), 1.0);
      },
      workers);
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    double s = 0.0;
    for (std::size_t k = 0; k < family_size; ++k) s += values[li * family_size + k];
    out.mean_l1.push_back(s / static_cast<double>(family_size));
  }
  out.spearman = numerics::spearman_rho(out.lambdas, out.mean_l1);
  if (lambdas.size() >= 3) out.fit = detail::try_fit(out.lambdas, out.mean_l1, "probe", out.notes);
  if (out.fit) out.sigma_emp = -out.fit->exponent;
  return out;
}

}  // namespace ergolab::bilinear
