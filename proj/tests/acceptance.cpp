// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergolab/ergolab.hpp"

using namespace ergolab;
using bilinear::CutoffSpec;
using dynamics::FlowPair;
using dynamics::TorusPoint;
using dynamics::TrigPolynomial;
using numerics::cplx;
using numerics::CounterRng;
using numerics::Grid2D;
using numerics::GridFunction2D;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

const FlowPair kIrrational = FlowPair::make({1.0, std::sqrt(2.0) - 1.0}, {std::sqrt(3.0) - 1.0, 1.0});

GridFunction2D random_grid_function(const Grid2D& g, CounterRng& rng) {
  std::vector<cplx> v(g.size());
  for (auto& c : v) {
    const double re = rng.normal(), im = rng.normal();
    c = cplx(re, im);
  }
  return GridFunction2D(g, std::move(v));
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1
Verdict spectral_hygiene() {
  const auto g = Grid2D::make(16.0, 16.0, 256, 256);
  double worst_roundtrip = 0.0, worst_parseval = 0.0, worst_split = 0.0, worst_additive = 0.0;
  for (std::uint64_t k = 0; k < 4; ++k) {
    CounterRng rng(101, k);
    const auto f = random_grid_function(g, rng);
    const double norm = numerics::lp_norm(f, 2.0);
    const auto s = numerics::dft_forward(f);
    worst_roundtrip = std::max(worst_roundtrip, numerics::lp_norm(numerics::dft_inverse(s) - f, 2.0) / norm);
    worst_parseval = std::max(worst_parseval, std::abs(numerics::spectral_l2_norm(s) - norm) / norm);
    const auto split = bilinear::band_split(f, 1.0 + 2.0 * static_cast<double>(k));
    worst_split = std::max(worst_split, numerics::lp_norm(split.low + split.high - f, 2.0) / norm);
    const double a = numerics::lp_norm(split.low, 2.0), b = numerics::lp_norm(split.high, 2.0);
    worst_additive = std::max(worst_additive, std::abs(a * a + b * b - norm * norm) / (norm * norm));
  }
  const double worst = std::max({worst_roundtrip, worst_parseval, worst_split, worst_additive});
  return {worst <= 1e-10, "max relative error " + fmt("%.2e", worst)};
}

// 2
Verdict plancherel_shift() {
  double worst = 0.0;
  std::size_t bound_failures = 0;
  const auto g = Grid2D::make(8.0, 8.0, 128, 64);
  for (std::uint64_t k = 0; k < 50; ++k) {
    CounterRng rng(202, k);
    const double r = std::ldexp(1.0, static_cast<int>(rng.integer(0, 3)));
    const auto f = bilinear::random_band_limited(g, rng, 2.0, r);
    for (double delta : {rng.uniform(0.0, 1.0), std::ldexp(1.0, -static_cast<int>(rng.integer(1, 8))), 0.375}) {
      const auto d = bilinear::shift_difference_norm(f, delta, r);
      worst = std::max(worst, std::abs(d.spatial - d.spectral) / std::max(1.0, d.spectral));
      if (!d.bound_holds || !d.band_limited) ++bound_failures;
    }
  }
  return {worst <= 1e-8 && bound_failures == 0,
          "max spatial/spectral gap " + fmt("%.2e", worst) + ", bound failures " + std::to_string(bound_failures)};
}

// 3
Verdict coboundary_exactness() {
  const FlowPair sys = FlowPair::make({1.0, 2.0}, {0.5, std::sqrt(2.0)});
  CounterRng rng(303);
  double worst = 0.0, worst_invariance = 0.0;
  int checked = 0, skipped = 0;
  while (checked < 100 && skipped < 1000) {
    auto f = TrigPolynomial::random(2, 6, 3, rng);
    f.add_term({2, -1}, cplx(rng.normal(), rng.normal()));
    const double delta = rng.uniform(0.05, 1.0);
    dynamics::CoboundaryDecomposition d;
    try {
      d = dynamics::coboundary_decompose(sys, f, delta);
    } catch (const ResonanceError&) {
      ++skipped;
      continue;
    }
    ++checked;
    worst = std::max(worst, d.reconstruct(sys).max_coefficient_distance(f));
    for (double t : {1.0, std::sqrt(2.0), std::numbers::pi}) {
      worst_invariance = std::max(
          worst_invariance, dynamics::koopman_apply(sys, d.invariant_part, t, 0.0).max_coefficient_distance(d.invariant_part));
    }
  }
  return {checked == 100 && worst <= 1e-12 && worst_invariance <= 1e-12,
          std::to_string(checked) + " instances, reconstruction error " + fmt("%.2e", worst) +
              ", invariance error " + fmt("%.2e", worst_invariance)};
}

// 4
Verdict inequality_chains() {
  std::size_t sandwich_viol = 0, sandwich_total = 0;
  std::vector<double> ns;
  for (int i = 0; i < 20; ++i) ns.push_back(std::pow(200.0, i / 19.0) + 0.01 * i);
  for (std::uint64_t k = 0; k < 100; ++k) {
    CounterRng rng(404, k);
    const auto f1 = TrigPolynomial::random(2, 3, 2, rng).abs_squared() + TrigPolynomial::constant(2, 0.25);
    const auto f2 = TrigPolynomial::random(2, 3, 2, rng).abs_squared();
    const TorusPoint x({rng.uniform(), rng.uniform()});
    const double alpha = rng.uniform(1.2, 3.0);
    for (double n : ns) {
      ++sandwich_total;
      if (!averages::sandwich_check(kIrrational, f1, f2, x, alpha, n).holds) ++sandwich_viol;
    }
  }
  std::size_t chain_viol = 0, chain_total = 0;
  for (const auto& [p, q] : {std::pair{2.0, 2.0}, std::pair{3.0, 1.5}}) {
    const auto exps = averages::ExponentPair::make(p, q);
    for (std::uint64_t k = 0; k < 1000; ++k) {
      CounterRng rng(405 + static_cast<std::uint64_t>(p), k);
      const auto f1 = TrigPolynomial::random(2, 3, 2, rng);
      const auto f2 = TrigPolynomial::random(2, 3, 2, rng);
      const TorusPoint x({rng.uniform(), rng.uniform()});
      const double n = rng.uniform(1.0, 4.0);
      ++chain_total;
      if (!averages::maximal_chain_check(kIrrational, f1, f2, x, n, exps, averages::default_m_max(n)).holds) {
        ++chain_viol;
      }
    }
  }
  return {sandwich_viol == 0 && chain_viol == 0,
          "sandwich " + std::to_string(sandwich_viol) + "/" + std::to_string(sandwich_total) + " violations, chain " +
              std::to_string(chain_viol) + "/" + std::to_string(chain_total) + " violations"};
}

// 5
Verdict fresnel_convergence() {
  const FlowPair std2;
  const auto mode = TrigPolynomial::mode({0, 1});
  const TorusPoint origin({0.0, 0.0});
  const cplx a200 = averages::single_quadratic_average(std2, mode, origin, 200.0);
  const double gap = std::abs(200.0 * a200 - cplx(0.25, 0.25));
  std::vector<double> xs, ys;
  for (int e = 4; e <= 14; ++e) {
    const double n = std::ldexp(1.0, e);
    xs.push_back(n);
    ys.push_back(std::abs(averages::single_quadratic_average(std2, mode, origin, n)));
  }
  const auto fit = numerics::fit_power_law(xs, ys);
  return {gap <= 1e-3 && fit.exponent >= -1.15 && fit.exponent <= -0.85,
          "|N A_N - (1+i)/4| = " + fmt("%.2e", gap) + " at N=200, exponent " + fmt("%.4f", fit.exponent)};
}

// 6
Verdict bilinear_decay() {
  const auto f1 = TrigPolynomial::mode({1, 0}), f2 = TrigPolynomial::mode({0, 1});
  const TorusPoint x({0.3, 0.1});
  std::vector<double> xs, ys;
  for (int e = 2; e <= 12; ++e) {
    const double n = std::ldexp(1.0, e);
    xs.push_back(n);
    ys.push_back(std::abs(averages::compute_average(kIrrational, f1, f2, x, averages::AverageRequest{n, 2.0, {}})));
  }
  const auto fit = numerics::fit_power_law(xs, ys);
  const auto rec = averages::lacunary_trajectory(kIrrational, f1, f2, x, averages::LacunarySchedule::make(2.0, 12));
  const bool limit_zero = rec.limit_estimate && std::abs(*rec.limit_estimate) < 1e-2;
  return {fit.exponent <= -0.4 && limit_zero && rec.cauchy_residual < 1e-2,
          "exponent " + fmt("%.4f", fit.exponent) + ", limit " +
              (rec.limit_estimate ? fmt("%.2e", std::abs(*rec.limit_estimate)) : std::string("undeclared")) +
              ", residual " + fmt("%.2e", rec.cauchy_residual)};
}

// 7
Verdict oracle_equivalence() {
  const auto g = Grid2D::make(8.0, 8.0, 64, 64);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    CounterRng rng(707, k);
    const auto f1 = bilinear::random_band_limited(g, rng, 1.0);
    const auto f2 = bilinear::random_band_limited(g, rng, 1.0);
    const double delta = rng.uniform(0.05, 1.0);
    const auto cut = CutoffSpec::build(delta);
    const auto fast = bilinear::apply_B_delta(f1, f2, cut, delta);
    const auto slow = bilinear::apply_B_delta_brute_force(f1, f2, cut, delta);
    worst = std::max(worst, numerics::lp_norm(fast - slow, 1.0) / numerics::lp_norm(slow, 1.0));
  }
  return {worst <= 1e-6, "max relative L1 gap " + fmt("%.2e", worst) + " over 10 instances"};
}

std::vector<bilinear::FunctionPair> decay_family(const Grid2D& g, std::uint64_t seed, std::size_t size,
                                                 std::optional<double> band) {
  std::vector<bilinear::FunctionPair> family;
  for (std::size_t k = 0; k < size; ++k) {
    CounterRng rng(seed, k);
    auto f1 = bilinear::random_band_limited(g, rng, 1.0, band);
    auto f2 = bilinear::random_band_limited(g, rng, 1.0);
    family.emplace_back(std::move(f1), std::move(f2));
  }
  return family;
}

// 8
Verdict delta_decay() {
  const auto g = Grid2D::make(8.0, 8.0, 128, 64);
  std::vector<double> deltas;
  for (int e = 1; e <= 8; ++e) deltas.push_back(std::ldexp(1.0, -e));
  const auto rule = bilinear::delta_decay_experiment(decay_family(g, 2024, 10, std::nullopt), deltas,
                                                     bilinear::RadiusRule{});
  const auto fixed = bilinear::delta_decay_experiment(
      decay_family(g, 77, 10, 1.0), deltas, bilinear::RadiusRule{bilinear::RadiusRule::Kind::fixed, 1.0});
  bool ok = rule.total_fit && fixed.low_fit;
  std::string detail = "gamma_emp ";
  if (rule.total_fit) {
    ok = ok && rule.total_fit->exponent > 0.3 && rule.total_fit->r_squared > 0.9;
    detail += fmt("%.4f", rule.total_fit->exponent) + " (r^2 " + fmt("%.4f", rule.total_fit->r_squared) + ")";
  } else {
    detail += "unavailable";
  }
  detail += ", fixed-band low slope ";
  if (fixed.low_fit) {
    ok = ok && fixed.low_fit->exponent >= 0.8 && fixed.low_fit->exponent <= 1.1;
    detail += fmt("%.4f", fixed.low_fit->exponent);
  } else {
    detail += "unavailable";
  }
  for (const auto& rows : {rule.rows, fixed.rows}) {
    for (const auto& r : rows) ok = ok && r.triangle_holds;
  }
  return {ok, detail};
}

// 9
Verdict lambda_probe() {
  const auto cut = CutoffSpec::build(1.0);
  const std::vector<double> lambdas{4.0, 8.0, 16.0, 32.0, 64.0};
  double worst = -1.0;
  std::string sigmas;
  for (auto j : {bilinear::ExclusionIndex::first, bilinear::ExclusionIndex::second}) {
    const auto grid = j == bilinear::ExclusionIndex::first ? Grid2D::make(2.0, 2.0, 2048, 64)
                                                           : Grid2D::make(2.0, 2.0, 64, 2048);
    for (std::uint64_t fam_seed = 1; fam_seed <= 5; ++fam_seed) {
      const bilinear::ProbeFamily fam{j, 900 + fam_seed, 6, 2.0};
      const auto res = bilinear::local_estimate_probe(
          [&](std::size_t k, double l) { return fam.member(k, l); }, 4, cut, lambdas, grid);
      worst = std::max(worst, res.spearman);
      if (fam_seed == 1) sigmas += (sigmas.empty() ? "" : ", ") + fmt("%.2f", res.sigma_emp);
    }
  }
  return {worst <= -0.8, "max Spearman rho " + fmt("%.3f", worst) + " over 10 families (descriptive sigma_emp " +
                             sigmas + ")"};
}

// 10
Verdict transference() {
  struct Setup {
    double n, pu, pv;
  };
  const Setup setups[] = {{1.0, 16.0, 8.0}, {2.0, 16.0, 16.0}, {4.0, 32.0, 64.0}};
  bool ok = true;
  double worst_accounting = 0.0;
  std::string detail;
  for (const auto& s : setups) {
    CounterRng rng(1010, static_cast<std::uint64_t>(s.n));
    const auto f1 = TrigPolynomial::random(2, 3, 2, rng), f2 = TrigPolynomial::random(2, 3, 2, rng);
    std::vector<TorusPoint> xs;
    for (int i = 0; i < 100; ++i) {
      const double a = rng.uniform(), b = rng.uniform();
      xs.emplace_back(std::vector<double>{a, b});
    }
    const auto grid = Grid2D::make(s.pu, s.pv, 512, 1024);
    const auto r = bilinear::transference_check(kIrrational, f1, f2, xs, s.n, 0.3, grid);
    ok = ok && r.holds;
    for (const auto* f : {&f1, &f2}) {
      const auto acc = bilinear::transfer_norm_accounting(kIrrational, *f, xs, s.n, grid);
      worst_accounting = std::max(worst_accounting, acc.relative_error);
    }
    detail += "N=" + fmt("%g", s.n) + ": " + fmt("%.4f", r.ergodic_lhs.mean) + " <= " +
              fmt("%.4f", r.transfer_rhs.mean) + "; ";
  }
  ok = ok && worst_accounting <= 0.02;
  return {ok, detail + "norm accounting within " + fmt("%.2f", 100.0 * worst_accounting) + "%"};
}

// 11
Verdict dyadic_and_cutoffs() {
  bool ok = true;
  for (int k_max : {1, 5, 20}) {
    const double n = 7.0;
    const auto d = bilinear::dyadic_scale_decomposition(n, k_max);
    ok = ok && d.residual_mass() == std::ldexp(1.0, -k_max);
    CounterRng rng(1111, static_cast<std::uint64_t>(k_max));
    for (int s = 0; s < 200; ++s) {
      const double lo = std::ldexp(n, -k_max);
      const double t = lo + (n - lo) * (1.0 - rng.uniform());  // in (lo, n]
      ok = ok && std::abs(d.partial_sum(t) - 1.0 / n) <= 1e-15;
    }
  }
  const auto g = Grid2D::make(8.0, 8.0, 64, 64);
  CounterRng rng(1112);
  const auto f = bilinear::random_band_limited(g, rng, 1.0);
  double iso = 0.0;
  for (double a : {0.5, 2.0, 3.7}) {
    iso = std::max(iso, std::abs(numerics::lp_norm(bilinear::rescale_parabolic(f, a), 2.0) - numerics::lp_norm(f, 2.0)));
  }
  ok = ok && iso <= 1e-8;
  double worst_partition = 0.0;
  for (double delta : {1.0, 0.25, 1.0 / 16}) {
    const auto cut = CutoffSpec::build(delta);
    ok = ok && cut.phi_l1_gap() <= delta;
    ok = ok && cut.eta_tilde(3.0, -7.0) == 1.0 && cut.eta_tilde(-10.0, 10.0) == 1.0 && cut.eta_tilde(25.0, 0.0) == 0.0;
    CounterRng prng(1113, static_cast<std::uint64_t>(1.0 / delta));
    for (int s = 0; s < 200; ++s) {
      const double x = prng.uniform(-3.0, 3.0), y = prng.uniform(-3.0, 3.0);
      worst_partition = std::max(worst_partition, std::abs(cut.partition_sum(x, y, 5) - 1.0));
    }
  }
  ok = ok && worst_partition <= 1e-10;
  return {ok, "rescale isometry error " + fmt("%.2e", iso) + ", partition error " + fmt("%.2e", worst_partition)};
}

// 12
Verdict reproducibility() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"sandwich.json", "delta_decay.json", "transference.json"}) {
    std::ifstream in(std::string(ERGOLAB_SOURCE_DIR) + "/configs/" + name);
    auto j = nlohmann::json::parse(in);
    if (j["kind"] == "sandwich") j["pairs"] = 5;
    if (j["kind"] == "transference") j["x_samples"] = 10;
    const auto c = lab::ExperimentConfig::from_json(j);
    const auto text = [&](std::size_t workers) {
      std::ostringstream out;
      lab::write_csv(lab::execute(c, workers).table, out);
      return out.str();
    };
    const std::string a = text(1), b = text(1), w = text(3);
    const bool same = a == b && a == w;
    ok = ok && same;
    detail += std::string(name) + (same ? " identical; " : " DIFFERS; ");
  }
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "spectral hygiene", 5.0, spectral_hygiene},
      {2, "Plancherel shift identity", 10.0, plancherel_shift},
      {3, "coboundary exactness", 5.0, coboundary_exactness},
      {4, "exact inequality chains", 300.0, inequality_chains},
      {5, "Fresnel convergence", 60.0, fresnel_convergence},
      {6, "bilinear average decay", 120.0, bilinear_decay},
      {7, "B_delta oracle equivalence", 300.0, oracle_equivalence},
      {8, "delta decay", 600.0, delta_decay},
      {9, "lambda localization probe", 600.0, lambda_probe},
      {10, "transference inequality", 600.0, transference},
      {11, "dyadic decomposition and cutoffs", 60.0, dyadic_and_cutoffs},
      {12, "reproducibility", 60.0, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = v.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %2d: %s: %s [%.2f s of %.0f s]%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs, c.budget_seconds, in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
