#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ergolab/dynamics/torus.hpp"
#include "ergolab/dynamics/trig_polynomial.hpp"
#include "ergolab/error.hpp"
#include "ergolab/numerics/grid.hpp"
#include "ergolab/numerics/rng.hpp"

namespace ergolab::lab {

using nlohmann::json;

enum class ExperimentKind {
  average_trajectory,
  sandwich,
  maximal_chain,
  single_quadratic,
  delta_decay,
  lambda_probe,
  transference,
  oracle_xcheck,
};

inline const char* kind_name(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::average_trajectory: return "average-trajectory";
    case ExperimentKind::sandwich: return "sandwich";
    case ExperimentKind::maximal_chain: return "maximal-chain";
    case ExperimentKind::single_quadratic: return "single-quadratic";
    case ExperimentKind::delta_decay: return "delta-decay";
    case ExperimentKind::lambda_probe: return "lambda-probe";
    case ExperimentKind::transference: return "transference";
    case ExperimentKind::oracle_xcheck: return "oracle-xcheck";
  }
  return "unknown";
}

inline ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::average_trajectory, ExperimentKind::sandwich,
                 ExperimentKind::maximal_chain, ExperimentKind::single_quadratic,
                 ExperimentKind::delta_decay, ExperimentKind::lambda_probe,
                 ExperimentKind::transference, ExperimentKind::oracle_xcheck}) {
    if (s == kind_name(k)) return k;
  }
  throw ConfigError("unknown experiment kind \"" + s + "\"");
}

// ---- field readers -------------------------------------------------------------------------

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline double number_field(const json& j, const char* key, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing field \"") + key + "\"");
  }
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field \"") + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(std::string("field \"") + key + "\" must be finite");
  return d;
}

inline long integer_field(const json& j, const char* key, std::optional<long> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing field \"") + key + "\"");
  }
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("field \"") + key + "\" must be an integer");
  return v.get<long>();
}

inline std::vector<double> number_list(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array() || v.empty()) throw ConfigError(std::string("field \"") + key + "\" must be a nonempty list");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(std::string("field \"") + key + "\" must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline void require_range(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

// ---- observables ---------------------------------------------------------------------------

/// An observable spec is one of
///   [ {"k": [...], "re": x, "im": y}, ... ]       explicit terms
///   {"constant": c}
///   {"random": {"terms": n, "max_freq": m}}        seeded per (seed, role, pair)
///   {"abs_squared": <spec>}                        |g|^2, nonnegative by construction
///   {"sum": [<spec>, ...]}
inline dynamics::TrigPolynomial resolve_observable(const json& spec, std::size_t dimension,
                                                   numerics::CounterRng& rng) {
  using dynamics::TrigPolynomial;
  if (spec.is_array()) return dynamics::trig_polynomial_from_json(spec, dimension);
  if (!spec.is_object() || spec.size() != 1) throw ConfigError("observable spec must be a list or a one-key object");
  if (spec.contains("constant")) {
    const json& c = spec.at("constant");
    if (!c.is_number()) throw ConfigError("\"constant\" must be a number");
    return TrigPolynomial::constant(dimension, c.get<double>());
  }
  if (spec.contains("random")) {
    const json& r = spec.at("random");
    const long terms = integer_field(r, "terms");
    const long max_freq = integer_field(r, "max_freq");
    require_range(terms >= 1 && terms <= 256, "\"random.terms\" must lie in [1, 256]");
    require_range(max_freq >= 0 && max_freq <= 64, "\"random.max_freq\" must lie in [0, 64]");
    return TrigPolynomial::random(dimension, static_cast<std::size_t>(terms), static_cast<int>(max_freq), rng);
  }
  if (spec.contains("abs_squared")) return resolve_observable(spec.at("abs_squared"), dimension, rng).abs_squared();
  if (spec.contains("sum")) {
    const json& parts = spec.at("sum");
    if (!parts.is_array() || parts.empty()) throw ConfigError("\"sum\" must be a nonempty list");
    TrigPolynomial total(dimension);
    for (const auto& p : parts) total += resolve_observable(p, dimension, rng);
    return total;
  }
  throw ConfigError("unknown observable spec key \"" + spec.begin().key() + "\"");
}

inline numerics::Grid2D grid_from_json(const json& j) {
  return numerics::Grid2D::make(number_field(j, "period_u"), number_field(j, "period_v"),
                                static_cast<std::size_t>(integer_field(j, "n_u")),
                                static_cast<std::size_t>(integer_field(j, "n_v")));
}

// ---- the configuration ---------------------------------------------------------------------

/// A validated experiment description. Per-kind parameters stay in `params` and are read
/// through the accessors above; construction checks every range the kind uses.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::average_trajectory;
  std::uint64_t seed = 0;
  std::string output;
  dynamics::FlowPair system;
  json params;

  /// Observable f1 or f2 for sample pair `pair`, drawn from its own counter stream.
  dynamics::TrigPolynomial observable(const char* role, std::size_t pair) const {
    const std::uint64_t role_id = std::string(role) == "f1" ? 1 : 2;
    numerics::CounterRng rng(seed, (pair << 2) | role_id);
    return resolve_observable(require(params, role), system.dimension, rng);
  }

  /// Sample point s: the configured "x" when present, otherwise uniform on the torus.
  dynamics::TorusPoint sample_point(std::size_t pair, std::size_t s) const {
    if (params.contains("x")) {
      const auto x = params.at("x").get<std::vector<double>>();
      system.require_dimension(x.size());
      return dynamics::TorusPoint(x);
    }
    numerics::CounterRng rng(seed ^ 0x5eedULL, (pair << 20) | s);
    std::vector<double> coords(system.dimension);
    for (auto& c : coords) c = rng.uniform();
    return dynamics::TorusPoint(std::move(coords));
  }

  std::size_t pairs() const { return static_cast<std::size_t>(integer_field(params, "pairs", 1)); }
  /// Transference estimates x-norms by Monte-Carlo and defaults to 200 points; the
  /// pointwise kinds default to one sample.
  std::size_t x_samples() const {
    if (params.contains("x")) return 1;
    const long fallback = kind == ExperimentKind::transference ? 200 : 1;
    return static_cast<std::size_t>(integer_field(params, "x_samples", fallback));
  }
  double kappa() const { return number_field(params, "kappa", 2.0); }

  static ExperimentConfig from_json(const json& j) {
    try {
      ExperimentConfig c;
      if (!j.is_object()) throw ConfigError("config must be a JSON object");
      c.kind = parse_kind(require(j, "kind").get<std::string>());
      const long long seed = j.contains("seed") ? j.at("seed").get<long long>() : 0;
      c.seed = static_cast<std::uint64_t>(seed);
      c.output = j.value("output", std::string{});
      c.system = j.contains("system") ? dynamics::flow_pair_from_json(j.at("system")) : dynamics::FlowPair{};
      c.params = j;
      c.validate();
      return c;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed config: ") + e.what());
    }
  }

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
  }

  /// Canonical text of the config, used for hashing.
  std::string canonical() const { return params.dump(); }

 private:
  void validate() const {
    const double k = kappa();
    require_range(k > 0.0, "kappa must be positive");
    require_range(pairs() >= 1, "\"pairs\" must be at least 1");
    require_range(x_samples() >= 1, "\"x_samples\" must be at least 1");
    const auto check_scales = [](const std::vector<double>& ns) {
      for (double n : ns) require_range(n >= 1.0, "every N must satisfy N >= 1");
    };
    const auto check_delta = [](double d) {
      require_range(d > 0.0 && d <= 1.0, "delta must lie in (0, 1]");
    };
    switch (kind) {
      case ExperimentKind::average_trajectory:
        require_range(number_field(params, "alpha") > 1.0, "alpha must exceed 1");
        require_range(integer_field(params, "n_max") >= 1, "n_max must be at least 1");
        break;
      case ExperimentKind::sandwich:
        require_range(number_field(params, "alpha") > 1.0, "alpha must exceed 1");
        check_scales(number_list(params, "n_values"));
        break;
      case ExperimentKind::maximal_chain: {
        require_range(number_field(params, "n") >= 1.0, "N must satisfy N >= 1");
        const double p = number_field(params, "p", 2.0), q = number_field(params, "q", 2.0);
        require_range(p > 1.0 && q > 1.0 && std::abs(1.0 / p + 1.0 / q - 1.0) <= 1e-12,
                      "exponents must satisfy p, q > 1 and 1/p + 1/q = 1");
        require_range(integer_field(params, "m_max", 1) >= 1, "m_max must be at least 1");
        break;
      }
      case ExperimentKind::single_quadratic:
        check_scales(number_list(params, "n_values"));
        break;
      case ExperimentKind::oracle_xcheck:
        if (params.contains("n_values")) {
          check_scales(number_list(params, "n_values"));
        } else {
          require_range(number_field(params, "alpha") > 1.0, "alpha must exceed 1");
          require_range(integer_field(params, "n_max") >= 1, "n_max must be at least 1");
        }
        require_range(number_field(params, "tolerance", 1e-8) > 0.0, "tolerance must be positive");
        break;
      case ExperimentKind::delta_decay: {
        const auto deltas = number_list(params, "deltas");
        require_range(deltas.size() >= 4, "delta-decay needs at least 4 deltas");
        for (double d : deltas) check_delta(d);
        grid_from_json(require(params, "grid"));
        const json& fam = require(params, "family");
        require_range(integer_field(fam, "size") >= 1, "family size must be at least 1");
        require_range(number_field(fam, "sigma") > 0.0, "family sigma must be positive");
        if (fam.contains("band")) require_range(number_field(fam, "band") >= 0.0, "family band must be >= 0");
        const json& rr = params.value("r_rule", json{{"kind", "inverse_sqrt"}});
        const std::string rk = rr.value("kind", std::string("inverse_sqrt"));
        require_range(rk == "inverse_sqrt" || rk == "fixed", "r_rule.kind must be inverse_sqrt or fixed");
        if (rk == "fixed") require_range(number_field(rr, "r") >= 0.0, "r_rule.r must be >= 0");
        break;
      }
      case ExperimentKind::lambda_probe: {
        const auto lambdas = number_list(params, "lambdas");
        require_range(lambdas.size() >= 2, "lambda-probe needs at least 2 lambdas");
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
          require_range(lambdas[i] >= 0.0 && (i == 0 || lambdas[i] > lambdas[i - 1]),
                        "lambdas must be nonnegative and increasing");
        }
        const long j = integer_field(params, "j");
        require_range(j == 1 || j == 2, "j must be 1 or 2");
        grid_from_json(require(params, "grid"));
        check_delta(number_field(params, "cutoff_delta", 1.0));
        const json& fam = require(params, "family");
        require_range(integer_field(fam, "size") >= 1, "family size must be at least 1");
        require_range(integer_field(fam, "modes", 6) >= 1, "family modes must be at least 1");
        require_range(number_field(fam, "low_band", 2.0) >= 0.0, "family low_band must be >= 0");
        break;
      }
      case ExperimentKind::transference:
        require_range(number_field(params, "n") >= 1.0, "N must satisfy N >= 1");
        check_delta(number_field(params, "delta"));
        grid_from_json(require(params, "grid"));
        break;
    }
    // Observables must resolve for the kinds that use them.
    if (kind != ExperimentKind::delta_decay && kind != ExperimentKind::lambda_probe) {
      if (kind != ExperimentKind::single_quadratic) observable("f1", 0);
      observable("f2", 0);
      sample_point(0, 0);
    }
  }
};

}  // namespace ergolab::lab
