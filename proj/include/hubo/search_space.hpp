#pragma once

// Search-space geometry of the expanding hypercube: the expand-then-
// translate step, its closed-form side length and volume, the envelope
// that contains every box up to a horizon, and the reachability horizon.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "hubo/series.hpp"

namespace hubo {

/// Axis-aligned box with independent per-dimension extents.
struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }

  bool empty() const { return (lower.array() > upper.array()).any(); }

  bool contains(const Eigen::VectorXd& x) const {
    if (x.size() != lower.size()) throw std::invalid_argument("Bounds::contains: dimension mismatch");
    return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
  }

  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

  Bounds intersect(const Bounds& other) const {
    return {lower.cwiseMax(other.lower), upper.cwiseMin(other.upper)};
  }

  bool contains(const Bounds& inner) const {
    return (inner.lower.array() >= lower.array()).all() && (inner.upper.array() <= upper.array()).all();
  }
};

/// Hypercube with equal side length in every dimension.
struct SearchBox {
  Eigen::VectorXd center;
  double half_side = 0.5;

  int dim() const { return static_cast<int>(center.size()); }
  double side() const { return 2.0 * half_side; }

  Bounds bounds() const {
    return {center.array() - half_side, center.array() + half_side};
  }
};

inline bool contains(const SearchBox& box, const Eigen::VectorXd& x) {
  if (x.size() != box.center.size()) throw std::invalid_argument("contains: dimension mismatch");
  return box.bounds().contains(x);
}

/// Parameters of the expanding search space.
///
/// X_0 = [a, b]^d and C_initial = [c_min, c_max]^d, both shifted by
/// `origin` (one offset per dimension; empty means no shift). The shift
/// lets X_0 sit anywhere in a benchmark domain while every formula keeps
/// using the scalar widths b - a and c_max - c_min.
struct ExpansionConfig {
  double a = 0.0;
  double b = 1.0;
  double alpha = -1.0;
  double c_min = 0.0;
  double c_max = 1.0;
  int dim = 1;
  Eigen::VectorXd origin;

  double width() const { return b - a; }

  Eigen::VectorXd offset() const {
    return origin.size() == 0 ? Eigen::VectorXd::Zero(dim) : origin;
  }

  void validate() const {
    if (dim <= 0) throw std::invalid_argument("ExpansionConfig: dim must be positive");
    if (!(std::isfinite(a) && std::isfinite(b) && b > a)) {
      throw std::invalid_argument("ExpansionConfig: need finite a < b");
    }
    if (!(std::isfinite(c_min) && std::isfinite(c_max) && c_max > c_min)) {
      throw std::invalid_argument("ExpansionConfig: need finite c_min < c_max");
    }
    if (c_min > a || b > c_max) {
      throw std::invalid_argument("ExpansionConfig: X0 = [a, b]^d must lie inside C_initial");
    }
    if (!(alpha >= -1.0 && alpha < 0.0)) {
      throw std::invalid_argument("ExpansionConfig: alpha must lie in [-1, 0), got " + std::to_string(alpha));
    }
    if (origin.size() != 0 && (origin.size() != dim || !origin.allFinite())) {
      throw std::invalid_argument("ExpansionConfig: origin must be empty or a finite dim-vector");
    }
  }

  SearchBox initial_box() const {
    return {Eigen::VectorXd(offset().array() + 0.5 * (a + b)), 0.5 * (b - a)};
  }

  Bounds initial_domain() const {
    const Eigen::VectorXd o = offset();
    return {o.array() + c_min, o.array() + c_max};
  }
};

/// X_{t-1} -> X'_t: grow by ((b - a)/2) t^alpha on every face.
inline SearchBox expand(const SearchBox& box, std::int64_t t, const ExpansionConfig& cfg) {
  if (t < 1) throw std::invalid_argument("expand: t must be >= 1");
  SearchBox out = box;
  out.half_side += 0.5 * cfg.width() * series::detail::term(t, cfg.alpha);
  return out;
}

/// X'_t -> X_t: recentre on the point of C_initial closest to best_x.
inline SearchBox translate(const SearchBox& box, const Eigen::VectorXd& best_x, const ExpansionConfig& cfg) {
  if (best_x.size() != box.center.size()) throw std::invalid_argument("translate: dimension mismatch");
  return {cfg.initial_domain().clamp(best_x), box.half_side};
}

/// b_t - a_t = (b - a)(1 + sum_{j<=t} j^alpha).
inline double side_length_closed_form(std::int64_t t, const ExpansionConfig& cfg) {
  if (t < 0) throw std::invalid_argument("side_length_closed_form: t must be >= 0");
  return cfg.width() * (1.0 + series::partial_sum({cfg.alpha, t}));
}

inline double log_volume(std::int64_t t, const ExpansionConfig& cfg) {
  return cfg.dim * std::log(side_length_closed_form(t, cfg));
}

inline double volume(std::int64_t t, const ExpansionConfig& cfg) {
  const double side = side_length_closed_form(t, cfg);
  const double v = std::pow(side, cfg.dim);
  return std::isfinite(v) ? v : std::exp(cfg.dim * std::log(side));
}

/// C_T: a box containing every X_t for 1 <= t <= T.
inline SearchBox envelope(std::int64_t horizon, const ExpansionConfig& cfg) {
  if (horizon < 1) throw std::invalid_argument("envelope: T must be >= 1");
  const Eigen::VectorXd center = cfg.offset().array() + 0.5 * (cfg.c_min + cfg.c_max);
  const double half = 0.5 * (cfg.c_max - cfg.c_min) + 0.5 * side_length_closed_form(horizon, cfg);
  // A few ulps of slack absorb the rounding of the iterated expand steps.
  return {center, half * (1.0 + 64.0 * std::numeric_limits<double>::epsilon())};
}

struct ReachabilityResult {
  std::int64_t horizon = 0;  ///< Smallest T_0; meaningful only when !exceeds_limit.
  bool exceeds_limit = false;
};

/// Smallest T_0 after which the box contains [a_g, b_g]^d wherever the
/// centre sits in C_initial.
///
/// Per dimension, with c0 the centre of C_initial and
/// h(T) = (c_min - c_max)/2 + side(T)/2, requires h(T) >= b_g - c0 and
/// h(T) > c0 - a_g. The target is widened to include c0 when needed.
inline ReachabilityResult reachability_horizon(double a_g, double b_g, const ExpansionConfig& cfg,
                                               std::int64_t limit = 1'000'000'000) {
  if (!(b_g >= a_g)) throw std::invalid_argument("reachability_horizon: need a_g <= b_g");
  const Eigen::VectorXd c0 = cfg.offset().array() + 0.5 * (cfg.c_min + cfg.c_max);
  double need_upper = -std::numeric_limits<double>::infinity();
  double need_lower = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < c0.size(); ++i) {
    const double lo = std::min(a_g, c0[i]);
    const double hi = std::max(b_g, c0[i]);
    need_upper = std::max(need_upper, hi - c0[i]);
    need_lower = std::max(need_lower, c0[i] - lo);
  }
  auto reach = [&](double partial) { return 0.5 * (cfg.c_min - cfg.c_max) + 0.5 * cfg.width() * (1.0 + partial); };
  // The sum never exceeds its upper bound, so hopeless targets are rejected without scanning.
  const double h_max = reach(series::partial_sum_upper_bound({cfg.alpha, limit}));
  if (h_max < std::max(need_upper, need_lower) * (1.0 - 1e-9) - 1e-9) return {limit, true};
  series::HyperharmonicSum sum(cfg.alpha);
  for (std::int64_t t = 1; t <= limit; ++t) {
    sum.advance();
    const double h = reach(sum.value());
    if (h >= need_upper && h > need_lower) return {t, false};
  }
  return {limit, true};
}

}  // namespace hubo
