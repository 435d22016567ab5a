#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergolab/averages/average.hpp"
#include "ergolab/averages/lacunary.hpp"
#include "ergolab/averages/maximal.hpp"
#include "ergolab/bilinear/experiments.hpp"
#include "ergolab/bilinear/transference.hpp"
#include "ergolab/error.hpp"
#include "ergolab/lab/config.hpp"
#include "ergolab/lab/csv.hpp"
#include "ergolab/lab/manifest.hpp"
#include "ergolab/numerics/parallel.hpp"

namespace ergolab::lab {

/// Everything a run produces before it touches the filesystem.
struct RunOutcome {
  CsvTable table;
  json provenance = json::object();
  json summary = json::object();
  std::vector<std::string> warnings;
  std::size_t violations = 0;
};

namespace detail {

inline std::vector<std::string> complex_fields(double scale, numerics::cplx v) {
  return {format_number(scale), format_number(v.real()), format_number(v.imag()),
          format_number(std::abs(v))};
}

inline std::vector<double> scales_of(const ExperimentConfig& c) {
  if (c.params.contains("n_values")) return number_list(c.params, "n_values");
  return averages::LacunarySchedule::make(number_field(c.params, "alpha"),
                                          static_cast<int>(integer_field(c.params, "n_max")))
      .scales();
}

inline std::string fit_field(const std::optional<numerics::FitResult>& fit, bool r_squared) {
  if (!fit) return "nan";
  return format_number(r_squared ? fit->r_squared : fit->exponent);
}

inline void add_kappa_warning(const ExperimentConfig& c, RunOutcome& out) {
  for (auto& w : averages::AverageRequest{1.0, c.kappa(), {}}.warnings()) out.warnings.push_back(w);
}

inline RunOutcome run_trajectory(const ExperimentConfig& c) {
  RunOutcome out;
  add_kappa_warning(c, out);
  const auto sched = averages::LacunarySchedule::make(number_field(c.params, "alpha"),
                                                      static_cast<int>(integer_field(c.params, "n_max")));
  const auto rec = averages::lacunary_trajectory(c.system, c.observable("f1", 0), c.observable("f2", 0),
                                                 c.sample_point(0, 0), sched, c.kappa());
  out.table.header = {"scale", "re", "im", "abs"};
  for (std::size_t i = 0; i < rec.scales.size(); ++i) out.table.add_row(complex_fields(rec.scales[i], rec.values[i]));
  out.summary["cauchy_residual"] = rec.cauchy_residual;
  out.summary["limit_declared"] = rec.limit_estimate.has_value();
  if (rec.limit_estimate) out.summary["limit"] = {rec.limit_estimate->real(), rec.limit_estimate->imag()};
  out.provenance = {{"method", "phase-integral kernel per merged phase term"},
                    {"limit_rule", "cauchy residual < 1e-3 (1 + |last|)"}};
  return out;
}

inline RunOutcome run_single_quadratic(const ExperimentConfig& c) {
  RunOutcome out;
  add_kappa_warning(c, out);
  const auto f2 = c.observable("f2", 0);
  const auto x = c.sample_point(0, 0);
  out.table.header = {"scale", "re", "im", "abs"};
  for (double n : number_list(c.params, "n_values")) {
    out.table.add_row(complex_fields(n, averages::single_quadratic_average(c.system, f2, x, n, c.kappa())));
  }
  out.provenance = {{"method", "phase-integral kernel"}};
  return out;
}

inline RunOutcome run_sandwich(const ExperimentConfig& c, std::size_t workers) {
  RunOutcome out;
  add_kappa_warning(c, out);
  const double alpha = number_field(c.params, "alpha");
  const auto ns = number_list(c.params, "n_values");
  const std::size_t pairs = c.pairs(), xs = c.x_samples();
  std::vector<averages::SandwichResult> results(pairs * xs * ns.size());
  numerics::parallel_for(
      pairs * xs,
      [&](std::size_t idx) {
        const std::size_t p = idx / xs, s = idx % xs;
        const auto f1 = c.observable("f1", p), f2 = c.observable("f2", p);
        const auto x = c.sample_point(p, s);
        for (std::size_t i = 0; i < ns.size(); ++i) {
          results[idx * ns.size() + i] = averages::sandwich_check(c.system, f1, f2, x, alpha, ns[i], c.kappa());
        }
      },
      workers);
  out.table.header = {"pair_id", "x_id", "n", "lower", "middle", "upper", "holds"};
  for (std::size_t idx = 0; idx < pairs * xs; ++idx) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const auto& r = results[idx * ns.size() + i];
      out.violations += r.holds ? 0 : 1;
      out.table.add_row({std::to_string(idx / xs), std::to_string(idx % xs), format_number(ns[i]),
                         format_number(r.lower), format_number(r.middle), format_number(r.upper),
                         format_bool(r.holds)});
    }
  }
  out.provenance = {{"method", "phase-integral kernel at alpha^k, N, alpha^(k+1)"},
                    {"tolerance", "1e-9 max(1, |upper|, |middle|)"}};
  return out;
}

inline RunOutcome run_maximal_chain(const ExperimentConfig& c, std::size_t workers) {
  RunOutcome out;
  const double n = number_field(c.params, "n");
  const auto exps = averages::ExponentPair::make(number_field(c.params, "p", 2.0), number_field(c.params, "q", 2.0));
  const int m_max = static_cast<int>(integer_field(c.params, "m_max", averages::default_m_max(n)));
  if (c.kappa() != 2.0) out.warnings.push_back("maximal-chain is defined for kappa = 2; kappa ignored");
  const std::size_t pairs = c.pairs(), xs = c.x_samples();
  std::vector<averages::MaximalChainResult> results(pairs * xs);
  numerics::parallel_for(
      pairs * xs,
      [&](std::size_t idx) {
        const std::size_t p = idx / xs;
        results[idx] = averages::maximal_chain_check(c.system, c.observable("f1", p), c.observable("f2", p),
                                                     c.sample_point(p, idx % xs), n, exps, m_max);
      },
      workers);
  out.table.header = {"pair_id", "x_id", "lhs", "rhs", "holds"};
  for (std::size_t idx = 0; idx < results.size(); ++idx) {
    const auto& r = results[idx];
    out.violations += r.holds ? 0 : 1;
    out.table.add_row({std::to_string(idx / xs), std::to_string(idx % xs), format_number(r.lhs),
                       format_number(r.rhs), format_bool(r.holds)});
  }
  out.summary["m_max"] = m_max;
  out.provenance = {{"method", "Hoelder plus dyadic chain with analytic tail"},
                    {"quadrature_rel_tol", 1e-10},
                    {"tolerance", 1e-6}};
  return out;
}

inline RunOutcome run_oracle_xcheck(const ExperimentConfig& c) {
  RunOutcome out;
  add_kappa_warning(c, out);
  const double tol = number_field(c.params, "tolerance", 1e-8);
  const double max_oscillations = number_field(c.params, "max_oscillations", 2e4);
  const auto f1 = c.observable("f1", 0), f2 = c.observable("f2", 0);
  const auto x = c.sample_point(0, 0);
  double a_max = 0.0, b_max = 0.0;
  for (const auto& [k, v] : f1.terms()) a_max = std::max(a_max, std::abs(dynamics::s_speed(c.system, k)));
  for (const auto& [m, v] : f2.terms()) b_max = std::max(b_max, std::abs(dynamics::t_speed(c.system, m)));
  const numerics::QuadratureRule rule{4, 16, 1e-12, std::size_t{1} << 18};

  out.table.header = {"scale", "re", "im", "oracle_re", "oracle_im", "abs_diff", "holds"};
  for (double n : scales_of(c)) {
    if (a_max * n + b_max * std::pow(n, c.kappa()) > max_oscillations) {
      out.warnings.push_back("scale " + format_number(n) + " skipped: too oscillatory for brute quadrature");
      continue;
    }
    const averages::AverageRequest req{n, c.kappa(), rule};
    const auto fast = averages::compute_average(c.system, f1, f2, x, req);
    const auto slow = averages::average_by_quadrature(c.system, f1, f2, x, req);
    if (!slow.converged) throw ConvergenceError("oracle quadrature did not converge", slow.value, slow.previous);
    const double diff = std::abs(fast - slow.value);
    const bool holds = diff <= tol * std::max(1.0, std::abs(slow.value));
    out.violations += holds ? 0 : 1;
    out.table.add_row({format_number(n), format_number(fast.real()), format_number(fast.imag()),
                       format_number(slow.value.real()), format_number(slow.value.imag()),
                       format_number(diff), format_bool(holds)});
  }
  out.provenance = {{"method", "phase-integral kernel"},
                    {"oracle", "composite Gauss-Legendre on the evaluated integrand"},
                    {"oracle_rel_tol", 1e-12},
                    {"tolerance", tol}};
  return out;
}

inline RunOutcome run_delta_decay(const ExperimentConfig& c, std::size_t workers) {
  RunOutcome out;
  const auto grid = grid_from_json(c.params.at("grid"));
  const json& fam = c.params.at("family");
  const auto size = static_cast<std::size_t>(integer_field(fam, "size"));
  const double sigma = number_field(fam, "sigma");
  std::optional<double> band;
  if (fam.contains("band")) band = number_field(fam, "band");
  std::vector<bilinear::FunctionPair> family;
  for (std::size_t k = 0; k < size; ++k) {
    numerics::CounterRng rng(c.seed, k);
    auto f1 = bilinear::random_band_limited(grid, rng, sigma, band);
    auto f2 = bilinear::random_band_limited(grid, rng, sigma);
    family.emplace_back(std::move(f1), std::move(f2));
  }
  bilinear::RadiusRule rule;
  const json rr = c.params.value("r_rule", json{{"kind", "inverse_sqrt"}});
  if (rr.value("kind", std::string("inverse_sqrt")) == "fixed") {
    rule.kind = bilinear::RadiusRule::Kind::fixed;
    rule.r = number_field(rr, "r");
  }
  const auto report = bilinear::delta_decay_experiment(family, number_list(c.params, "deltas"), rule,
                                                       c.kappa(), workers);
  out.table.header = {"parameter", "r",    "norm_low",      "norm_high", "norm_total",
                      "holds",     "fit_exponent", "fit_r_squared", "low_slope"};
  for (const auto& row : report.rows) {
    out.violations += row.triangle_holds ? 0 : 1;
    out.table.add_row({format_number(row.delta), format_number(row.r), format_number(row.norm_low),
                       format_number(row.norm_high), format_number(row.norm_total),
                       format_bool(row.triangle_holds), fit_field(report.total_fit, false),
                       fit_field(report.total_fit, true), fit_field(report.low_fit, false)});
  }
  for (const auto& n : report.notes) out.warnings.push_back(n);
  if (report.total_fit) out.summary["gamma_emp"] = report.total_fit->exponent;
  if (report.low_fit) out.summary["low_slope"] = report.low_fit->exponent;
  out.provenance = {{"method", "FFT path with spectral interpolation, adaptive t panels"},
                    {"t_rel_tol", 1e-10},
                    {"triangle_tolerance", 1e-8}};
  return out;
}

inline RunOutcome run_lambda_probe(const ExperimentConfig& c, std::size_t workers) {
  RunOutcome out;
  const auto grid = grid_from_json(c.params.at("grid"));
  const json& fam = c.params.at("family");
  bilinear::ProbeFamily family;
  family.j = integer_field(c.params, "j") == 1 ? bilinear::ExclusionIndex::first : bilinear::ExclusionIndex::second;
  family.seed = c.seed;
  family.modes = static_cast<std::size_t>(integer_field(fam, "modes", 6));
  family.low_band = number_field(fam, "low_band", 2.0);
  const auto cut = bilinear::CutoffSpec::build(number_field(c.params, "cutoff_delta", 1.0));
  const auto res = bilinear::local_estimate_probe(
      [&family](std::size_t k, double lambda) { return family.member(k, lambda); },
      static_cast<std::size_t>(integer_field(fam, "size")), cut, number_list(c.params, "lambdas"), grid,
      c.kappa(), workers);
  out.table.header = {"parameter", "mean_l1", "spearman", "sigma_emp", "fit_exponent", "fit_r_squared"};
  for (std::size_t i = 0; i < res.lambdas.size(); ++i) {
    out.table.add_row({format_number(res.lambdas[i]), format_number(res.mean_l1[i]),
                       format_number(res.spearman), format_number(res.sigma_emp),
                       fit_field(res.fit, false), fit_field(res.fit, true)});
  }
  for (const auto& n : res.notes) out.warnings.push_back(n);
  out.summary["spearman"] = res.spearman;
  out.summary["sigma_emp"] = res.sigma_emp;
  out.provenance = {{"method", "modal evaluation on the cutoff window"},
                    {"note", "sigma_emp is descriptive only"}};
  return out;
}

inline RunOutcome run_transference(const ExperimentConfig& c, std::size_t workers) {
  RunOutcome out;
  const double n = number_field(c.params, "n"), delta = number_field(c.params, "delta");
  const auto grid = grid_from_json(c.params.at("grid"));
  if (c.kappa() != 2.0) out.warnings.push_back("transference is defined for kappa = 2; kappa ignored");
  out.table.header = {"pair_id", "n", "delta", "lhs", "lhs_se", "rhs", "rhs_se", "holds"};
  for (std::size_t p = 0; p < c.pairs(); ++p) {
    std::vector<dynamics::TorusPoint> xs;
    for (std::size_t s = 0; s < c.x_samples(); ++s) xs.push_back(c.sample_point(p, s));
    const auto r = bilinear::transference_check(c.system, c.observable("f1", p), c.observable("f2", p), xs,
                                                n, delta, grid, workers);
    out.violations += r.holds ? 0 : 1;
    out.table.add_row({std::to_string(p), format_number(n), format_number(delta),
                       format_number(r.ergodic_lhs.mean), format_number(r.ergodic_lhs.standard_error),
                       format_number(r.transfer_rhs.mean), format_number(r.transfer_rhs.standard_error),
                       format_bool(r.holds)});
  }
  out.provenance = {{"method", "exact phase tables on the transfer box"},
                    {"rule", "lhs <= rhs + 3 se + 1e-6"}};
  return out;
}

}  // namespace detail

/// Runs the experiment in memory. Numerical results depend only on the config, never on
/// the worker count.
inline RunOutcome execute(const ExperimentConfig& c, std::size_t workers = numerics::worker_count()) {
  switch (c.kind) {
    case ExperimentKind::average_trajectory: return detail::run_trajectory(c);
    case ExperimentKind::single_quadratic: return detail::run_single_quadratic(c);
    case ExperimentKind::sandwich: return detail::run_sandwich(c, workers);
    case ExperimentKind::maximal_chain: return detail::run_maximal_chain(c, workers);
    case ExperimentKind::oracle_xcheck: return detail::run_oracle_xcheck(c);
    case ExperimentKind::delta_decay: return detail::run_delta_decay(c, workers);
    case ExperimentKind::lambda_probe: return detail::run_lambda_probe(c, workers);
    case ExperimentKind::transference: return detail::run_transference(c, workers);
  }
  throw ConfigError("unhandled experiment kind");
}

struct RunArtifacts {
  std::string csv_path;
  std::string manifest_path;
  RunOutcome outcome;
};

/// Executes and writes `<output>` plus `<output>.manifest.json`.
inline RunArtifacts run(const ExperimentConfig& c, const std::string& output_override = {},
                        std::size_t workers = numerics::worker_count()) {
  RunArtifacts art;
  art.csv_path = output_override.empty() ? c.output : output_override;
  if (art.csv_path.empty()) throw ConfigError("no output path: set \"output\" or pass -o");
  art.manifest_path = art.csv_path + ".manifest.json";

  RunManifest manifest = RunManifest::begin(c, workers);
  art.outcome = execute(c, workers);

  std::ofstream csv(art.csv_path, std::ios::binary);
  if (!csv) throw ConfigError("cannot write " + art.csv_path);
  write_csv(art.outcome.table, csv);
  csv.close();

  manifest.finish(art.outcome.table, art.outcome.provenance, art.outcome.summary, art.outcome.warnings,
                  art.outcome.violations);
  std::ofstream mf(art.manifest_path, std::ios::binary);
  if (!mf) throw ConfigError("cannot write " + art.manifest_path);
  mf << manifest.to_json().dump(2) << '\n';
  return art;
}

}  // namespace ergolab::lab
