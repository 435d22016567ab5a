#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergolab/dynamics/torus.hpp"
#include "ergolab/error.hpp"
#include "ergolab/numerics/fft.hpp"
#include "ergolab/numerics/rng.hpp"

namespace ergolab::dynamics {

using numerics::cplx;
using Frequency = std::vector<int>;

/// Finite Fourier sum f(x) = sum_k c_k e^{2 pi i k.x} on T^d. Terms are kept sorted by
/// frequency; zero coefficients are dropped.
class TrigPolynomial {
 public:
  explicit TrigPolynomial(std::size_t dimension = 2) : dimension_(dimension) {}

  static TrigPolynomial constant(std::size_t dimension, cplx c) {
    TrigPolynomial p(dimension);
    p.add_term(Frequency(dimension, 0), c);
    return p;
  }

  static TrigPolynomial mode(Frequency k, cplx c = 1.0) {
    TrigPolynomial p(k.size());
    p.add_term(std::move(k), c);
    return p;
  }

  /// Random polynomial with `terms` distinct frequencies in [-max_freq, max_freq]^d and
  /// standard complex Gaussian coefficients.
  static TrigPolynomial random(std::size_t dimension, std::size_t terms, int max_freq,
                               numerics::CounterRng& rng) {
    TrigPolynomial p(dimension);
    std::size_t guard = 0;
    while (p.size() < terms && guard++ < 100 * terms + 100) {
      Frequency k(dimension);
      for (auto& ki : k) ki = static_cast<int>(rng.integer(-max_freq, max_freq));
      if (p.terms_.count(k)) continue;
      const double re = rng.normal(), im = rng.normal();
      p.add_term(std::move(k), cplx(re, im));
    }
    return p;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::map<Frequency, cplx>& terms() const noexcept { return terms_; }

  cplx coefficient(const Frequency& k) const {
    const auto it = terms_.find(k);
    return it == terms_.end() ? cplx{} : it->second;
  }

  void add_term(Frequency k, cplx c) {
    if (k.size() != dimension_) throw ConfigError("frequency dimension mismatch");
    const auto [it, inserted] = terms_.try_emplace(std::move(k), cplx{});
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }

  /// Exact evaluation at raw coordinates (no reduction needed: the sum is 1-periodic).
  cplx evaluate(const std::vector<double>& x) const {
    if (x.size() != dimension_) throw ConfigError("evaluation point dimension mismatch");
    cplx total{};
    for (const auto& [k, c] : terms_) total += c * numerics::unit_phase(dot(k, x));
    return total;
  }
  cplx evaluate(const TorusPoint& x) const { return evaluate(x.coords()); }

  /// L^2(T^d) norm, exact from the coefficients.
  double l2_norm() const {
    double s = 0.0;
    for (const auto& [k, c] : terms_) s += std::norm(c);
    return std::sqrt(s);
  }

  /// sum |c_k|, an upper bound for sup |f|.
  double sup_bound() const {
    double s = 0.0;
    for (const auto& [k, c] : terms_) s += std::abs(c);
    return s;
  }

  /// Largest coefficientwise modulus of the difference.
  double max_coefficient_distance(const TrigPolynomial& other) const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c - other.coefficient(k)));
    for (const auto& [k, c] : other.terms_) m = std::max(m, std::abs(c - coefficient(k)));
    return m;
  }

  TrigPolynomial conj() const {
    TrigPolynomial out(dimension_);
    for (const auto& [k, c] : terms_) {
      Frequency neg(k);
      for (auto& v : neg) v = -v;
      out.add_term(std::move(neg), std::conj(c));
    }
    return out;
  }

  /// |f|^2 = f * conj(f): a nonnegative real-valued polynomial.
  TrigPolynomial abs_squared() const { return (*this) * conj(); }

  TrigPolynomial& operator+=(const TrigPolynomial& o) {
    require_same_dimension(o);
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  TrigPolynomial& operator-=(const TrigPolynomial& o) {
    require_same_dimension(o);
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  TrigPolynomial& operator*=(cplx s) {
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }
  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
  friend TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) { return a -= b; }
  friend TrigPolynomial operator*(cplx s, TrigPolynomial a) { return a *= s; }
  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
    a.require_same_dimension(b);
    TrigPolynomial out(a.dimension_);
    for (const auto& [k1, c1] : a.terms_) {
      for (const auto& [k2, c2] : b.terms_) {
        Frequency k(k1);
        for (std::size_t i = 0; i < k.size(); ++i) k[i] += k2[i];
        out.add_term(std::move(k), c1 * c2);
      }
    }
    return out;
  }

  static double dot(const Frequency& k, const std::vector<double>& v) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) s += static_cast<double>(k[i]) * v[i];
    return s;
  }

 private:
  void require_same_dimension(const TrigPolynomial& o) const {
    if (o.dimension_ != dimension_) throw ConfigError("trig polynomial dimension mismatch");
  }

  std::size_t dimension_;
  std::map<Frequency, cplx> terms_;
};

/// Speed of mode k along S: k . s_dir.
inline double s_speed(const FlowPair& sys, const Frequency& k) {
  return TrigPolynomial::dot(k, sys.s_dir);
}
/// Speed of mode k along T: k . t_dir.
inline double t_speed(const FlowPair& sys, const Frequency& k) {
  return TrigPolynomial::dot(k, sys.t_dir);
}

/// f o S^s T^t: coefficient c_k picks up e^{2 pi i k.(s s_dir + t t_dir)}.
inline TrigPolynomial koopman_apply(const FlowPair& sys, const TrigPolynomial& f, double s,
                                    double t) {
  sys.require_dimension(f.dimension());
  TrigPolynomial out(f.dimension());
  for (const auto& [k, c] : f.terms()) {
    out.add_term(k, c * numerics::unit_phase(s * s_speed(sys, k) + t * t_speed(sys, k)));
  }
  return out;
}

// JSON: a polynomial is a list of {"k": [..], "re": x, "im": y}; a system is
// {"d": n, "s_dir": [..], "t_dir": [..]}.

inline nlohmann::json to_json(const TrigPolynomial& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [k, c] : f.terms()) {
    out.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  }
  return out;
}

inline TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j, std::size_t dimension) {
  if (!j.is_array()) throw ConfigError("trig polynomial must be a JSON list of terms");
  TrigPolynomial f(dimension);
  for (const auto& term : j) {
    if (!term.is_object() || !term.contains("k")) {
      throw ConfigError("trig polynomial term needs a \"k\" frequency vector");
    }
    const auto k = term.at("k").get<Frequency>();
    if (k.size() != dimension) throw ConfigError("trig polynomial term has wrong dimension");
    const double re = term.value("re", 0.0);
    const double im = term.value("im", 0.0);
    f.add_term(k, cplx(re, im));
  }
  return f;
}

inline nlohmann::json to_json(const FlowPair& sys) {
  return {{"d", sys.dimension}, {"s_dir", sys.s_dir}, {"t_dir", sys.t_dir}};
}

inline FlowPair flow_pair_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("system must be a JSON object");
  auto s = j.at("s_dir").get<std::vector<double>>();
  auto t = j.at("t_dir").get<std::vector<double>>();
  FlowPair sys = FlowPair::make(std::move(s), std::move(t));
  if (j.contains("d") && j.at("d").get<std::size_t>() != sys.dimension) {
    throw ConfigError("system \"d\" disagrees with direction lengths");
  }
  return sys;
}

}  // namespace ergolab::dynamics
