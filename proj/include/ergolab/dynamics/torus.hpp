#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/error.hpp"

namespace ergolab::dynamics {

/// Reduce to [0, 1).
inline double wrap_unit(double x) noexcept {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;  // x slightly below an integer can round up
  return r;
}

/// A point of the torus T^d with each coordinate kept in [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    for (auto& c : coords_) {
      if (!std::isfinite(c)) throw DomainError("torus coordinates must be finite");
      c = wrap_unit(c);
    }
  }

  std::size_t dimension() const noexcept { return coords_.size(); }
  const std::vector<double>& coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }

  bool operator==(const TorusPoint&) const = default;

 private:
  std::vector<double> coords_;
};

/// Two commuting translation flows on T^d: S^s x = x + s * s_dir, T^t x = x + t * t_dir.
struct FlowPair {
  std::size_t dimension = 2;
  std::vector<double> s_dir{1.0, 0.0};
  std::vector<double> t_dir{0.0, 1.0};

  static FlowPair make(std::vector<double> s_dir, std::vector<double> t_dir) {
    if (s_dir.empty() || s_dir.size() != t_dir.size()) {
      throw ConfigError("flow directions must be nonempty and of equal dimension");
    }
    for (double v : s_dir) {
      if (!std::isfinite(v)) throw ConfigError("flow speeds must be finite");
    }
    for (double v : t_dir) {
      if (!std::isfinite(v)) throw ConfigError("flow speeds must be finite");
    }
    FlowPair f;
    f.dimension = s_dir.size();
    f.s_dir = std::move(s_dir);
    f.t_dir = std::move(t_dir);
    return f;
  }

  void require_dimension(std::size_t d) const {
    if (d != dimension) {
      throw ConfigError("dimension mismatch: system has d=" + std::to_string(dimension) +
                        ", argument has d=" + std::to_string(d));
    }
  }
};

/// S^s T^t x, componentwise modulo 1.
inline TorusPoint flow_apply(const FlowPair& sys, const TorusPoint& x, double s, double t) {
  sys.require_dimension(x.dimension());
  std::vector<double> out(sys.dimension);
  for (std::size_t i = 0; i < sys.dimension; ++i) {
    out[i] = x[i] + s * sys.s_dir[i] + t * sys.t_dir[i];
  }
  return TorusPoint(std::move(out));
}

/// Distance on the circle between two coordinates in [0, 1).
inline double circle_distance(double a, double b) noexcept {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

}  // namespace ergolab::dynamics
