#pragma once

// Restricted search space for the high-dimensional variant: N_t small
// hypercubes with centres drawn uniformly from X_t, intersected with X_t.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "hubo/rng.hpp"
#include "hubo/search_space.hpp"
#include "hubo/series.hpp"

namespace hubo {

struct HdConfig {
  double lambda = 1.0;
  std::int64_t n0 = 1;
  double l_h = 0.1;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("HdConfig: lambda must be >= 0");
    if (n0 < 1) throw std::invalid_argument("HdConfig: n0 must be >= 1");
    if (!(l_h > 0.0) || !std::isfinite(l_h)) throw std::invalid_argument("HdConfig: l_h must be positive");
  }

  /// False when lambda <= d(alpha + 1): the distance bound no longer shrinks.
  bool in_theory_regime(int d, double alpha) const { return lambda > d * (alpha + 1.0); }
};

/// N_t = n0 * ceil(t^lambda), rounding instead when t^lambda is within 1e-9
/// of an integer.
inline std::int64_t num_cubes(std::int64_t t, const HdConfig& cfg) {
  if (t < 1) throw std::invalid_argument("num_cubes: t must be >= 1");
  const double p = std::pow(static_cast<double>(t), cfg.lambda);
  const double r = std::round(p);
  const double c = std::abs(p - r) <= 1e-9 ? r : std::ceil(p);
  return cfg.n0 * static_cast<std::int64_t>(c);
}

struct HypercubeSet {
  std::vector<Eigen::VectorXd> centers;
  double l_h = 0.1;
  SearchBox parent;

  std::size_t size() const { return centers.size(); }

  Bounds cube(std::size_t i) const {
    return {centers[i].array() - 0.5 * l_h, centers[i].array() + 0.5 * l_h};
  }

  /// H(z_i, l_h) intersected with the parent box; may be empty.
  Bounds clipped_cube(std::size_t i) const { return cube(i).intersect(parent.bounds()); }
};

inline HypercubeSet sample_cubes(const SearchBox& parent, std::int64_t t, const HdConfig& cfg, Rng& rng) {
  const Bounds b = parent.bounds();
  HypercubeSet set{{}, cfg.l_h, parent};
  const auto n = num_cubes(t, cfg);
  set.centers.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) set.centers.push_back(rng.uniform_in(b.lower, b.upper));
  return set;
}

inline bool membership(const HypercubeSet& set, const Eigen::VectorXd& x) {
  if (x.size() != set.parent.center.size()) throw std::invalid_argument("membership: dimension mismatch");
  if (!contains(set.parent, x)) return false;
  // Same arithmetic as cube(i), so points returned on a face test as members.
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.cube(i).contains(x)) return true;
  }
  return false;
}

struct NearestPoint {
  Eigen::VectorXd point;
  double distance = std::numeric_limits<double>::infinity();
  std::size_t cube = 0;
};

/// Euclidean projection of x_star onto H_t; ties go to the lowest cube index.
inline NearestPoint nearest_in_set(const HypercubeSet& set, const Eigen::VectorXd& x_star) {
  if (set.centers.empty()) throw std::invalid_argument("nearest_in_set: empty set");
  if (x_star.size() != set.parent.center.size()) throw std::invalid_argument("nearest_in_set: dimension mismatch");
  NearestPoint best;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Bounds c = set.clipped_cube(i);
    if (c.empty()) continue;
    Eigen::VectorXd p = c.clamp(x_star);
    const double dist = (p - x_star).norm();
    if (dist < best.distance) best = {std::move(p), dist, i};
  }
  if (!std::isfinite(best.distance)) throw std::invalid_argument("nearest_in_set: every cube is empty");
  return best;
}

/// High-probability bound on the distance from x* to its nearest point in H_t:
/// 2(b - a)/sqrt(pi) * Gamma(d/2 + 1)^(1/d) * log(1/delta)^(1/d) * M_t.
inline double nearest_distance_bound(double initial_width, int d, double alpha, double lambda, double delta,
                                     double t) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("nearest_distance_bound: delta in (0, 1)");
  return 2.0 * initial_width / std::sqrt(std::numbers::pi) * series::gamma_root(d) *
         std::pow(std::log(1.0 / delta), 1.0 / d) * series::distance_scale(alpha, lambda, d, t);
}

}  // namespace hubo
