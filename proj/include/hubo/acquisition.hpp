#pragma once

// GP-UCB acquisition, the two confidence schedules, and seeded multi-start
// compass search over a box or over a set of clipped hypercubes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "hubo/gp.hpp"
#include "hubo/hypercubes.hpp"
#include "hubo/rng.hpp"
#include "hubo/search_space.hpp"
#include "hubo/series.hpp"

namespace hubo {

enum class BetaVariant { HuBO, HdHuBO };

struct BetaSchedule {
  BetaVariant variant = BetaVariant::HuBO;
  double delta = 0.1;
  double s1 = 1.0;
  double s2 = 1.0;
  int dim = 1;
  double a = 0.0;
  double b = 1.0;
  double alpha = -1.0;  ///< HuBO only.
  double l_h = 0.1;     ///< HdHuBO only.

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("BetaSchedule: delta must lie in (0, 1)");
    if (!(s1 > 0.0 && s2 > 0.0)) throw std::invalid_argument("BetaSchedule: s1, s2 must be positive");
    if (dim <= 0) throw std::invalid_argument("BetaSchedule: dim must be positive");
    if (variant == BetaVariant::HuBO && !(b > a)) throw std::invalid_argument("BetaSchedule: need a < b");
    if (variant == BetaVariant::HdHuBO && !(l_h > 0.0)) throw std::invalid_argument("BetaSchedule: l_h must be positive");
  }
};

/// HuBO beta_t with the search-space side (b - a)(1 + sum j^alpha) supplied
/// by the caller. pi_t = pi^2 t^2 / 6.
inline double beta_for_side(std::int64_t t, const BetaSchedule& s, double side) {
  if (t < 1) throw std::invalid_argument("beta: t must be >= 1");
  const double d = s.dim;
  const double tt = static_cast<double>(t);
  const double pi_t = std::numbers::pi * std::numbers::pi * tt * tt / 6.0;
  const double v = 2.0 * std::log(4.0 * pi_t / s.delta) +
                   4.0 * d * std::log(d * tt * s.s2 * side * std::sqrt(std::log(4.0 * d * s.s1 / s.delta)));
  return std::max(v, 0.0);
}

/// beta_t of the chosen variant, clamped at zero.
inline double beta(std::int64_t t, const BetaSchedule& s) {
  if (t < 1) throw std::invalid_argument("beta: t must be >= 1");
  if (s.variant == BetaVariant::HuBO) {
    return beta_for_side(t, s, (s.b - s.a) * (1.0 + series::partial_sum({s.alpha, t})));
  }
  const double d = s.dim;
  const double tt = static_cast<double>(t);
  const double v = 2.0 * std::log(std::numbers::pi * std::numbers::pi * tt * tt / s.delta) +
                   2.0 * d * std::log(2.0 * s.s2 * s.l_h * d * std::sqrt(std::log(6.0 * d * s.s1 / s.delta)) * tt * tt);
  return std::max(v, 0.0);
}

inline double ucb(const GpPosterior& post, double beta_t, const Eigen::VectorXd& x) {
  const Prediction p = post.predict(x);
  return p.mean + std::sqrt(beta_t) * std::sqrt(std::max(p.variance, 0.0));
}

inline double ucb(const GpModel& model, const Dataset& data, double beta_t, const Eigen::VectorXd& x) {
  return ucb(GpPosterior(model, data), beta_t, x);
}

struct MaximizerConfig {
  int restarts = 20;
  int max_evals = 1000;
  std::uint64_t seed = 0;
  /// Local search stops once every step is below this fraction of the box width.
  double step_tolerance = 1e-6;

  void validate() const {
    if (restarts < 1) throw std::invalid_argument("MaximizerConfig: restarts must be >= 1");
    if (max_evals < restarts) throw std::invalid_argument("MaximizerConfig: max_evals must be >= restarts");
    if (!(step_tolerance > 0.0)) throw std::invalid_argument("MaximizerConfig: step_tolerance must be positive");
  }
};

struct AcquisitionMax {
  Eigen::VectorXd x;
  double value = -std::numeric_limits<double>::infinity();
};

/// Maximize `f` over `bounds`: `restarts` uniform starts, each refined by a
/// compass search clamped to the box with an equal share of the remaining
/// evaluations. The search path does not depend on the budget, so a larger
/// max_evals never returns a worse value.
template <class F>
AcquisitionMax maximize_in_bounds(F&& f, const Bounds& bounds, const MaximizerConfig& cfg) {
  cfg.validate();
  if (bounds.empty()) throw std::invalid_argument("maximize_in_bounds: empty bounds");
  Rng rng(cfg.seed, "starts");
  const int per_start = (cfg.max_evals - cfg.restarts) / cfg.restarts;
  const Eigen::VectorXd width = bounds.upper - bounds.lower;
  const Eigen::Index d = width.size();

  AcquisitionMax best;
  for (int r = 0; r < cfg.restarts; ++r) {
    Eigen::VectorXd x = rng.uniform_in(bounds.lower, bounds.upper);
    double v = f(x);
    Eigen::VectorXd step = 0.25 * width;
    int evals = 0;
    bool active = (width.array() > 0.0).any();
    while (active && evals < per_start) {
      bool improved = false;
      for (Eigen::Index i = 0; i < d && !improved && evals < per_start; ++i) {
        if (step[i] < cfg.step_tolerance * width[i]) continue;
        for (double dir : {1.0, -1.0}) {
          if (evals >= per_start) break;
          Eigen::VectorXd cand = x;
          cand[i] = std::clamp(x[i] + dir * step[i], bounds.lower[i], bounds.upper[i]);
          if (cand[i] == x[i]) continue;
          const double cv = f(cand);
          ++evals;
          if (cv > v) {
            x = std::move(cand);
            v = cv;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        step *= 0.5;
        active = ((width.array() > 0.0) && (step.array() >= cfg.step_tolerance * width.array())).any();
      }
    }
    if (v > best.value) best = {std::move(x), v};
  }
  return best;
}

inline AcquisitionMax maximize_over_box(const GpPosterior& post, double beta_t, const SearchBox& box,
                                        const MaximizerConfig& cfg) {
  return maximize_in_bounds([&](const Eigen::VectorXd& x) { return ucb(post, beta_t, x); }, box.bounds(), cfg);
}

inline AcquisitionMax maximize_over_box(const GpModel& model, const Dataset& data, double beta_t,
                                        const SearchBox& box, const MaximizerConfig& cfg) {
  return maximize_over_box(GpPosterior(model, data), beta_t, box, cfg);
}

/// Seed used for cube `index`; cube 0 reuses the caller's seed.
inline std::uint64_t cube_seed(std::uint64_t seed, std::size_t index) {
  return index == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(index));
}

/// Per-cube share of a maximizer budget, floored at 10 evaluations and one restart.
inline MaximizerConfig cube_share(const MaximizerConfig& cfg, std::size_t n_cubes, std::size_t index) {
  const auto n = static_cast<int>(std::max<std::size_t>(n_cubes, 1));
  MaximizerConfig out = cfg;
  out.restarts = std::max(1, cfg.restarts / n);
  out.max_evals = std::max({10, cfg.max_evals / n, out.restarts});
  out.seed = cube_seed(cfg.seed, index);
  return out;
}

/// Best UCB over every non-empty clipped cube; ties keep the lower cube index.
inline AcquisitionMax maximize_over_cubes(const GpPosterior& post, double beta_t, const HypercubeSet& set,
                                          const MaximizerConfig& cfg) {
  AcquisitionMax best;
  bool any = false;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Bounds cube = set.clipped_cube(i);
    if (cube.empty()) continue;
    auto found = maximize_in_bounds([&](const Eigen::VectorXd& x) { return ucb(post, beta_t, x); }, cube,
                                    cube_share(cfg, set.size(), i));
    if (!any || found.value > best.value) best = std::move(found);
    any = true;
  }
  if (!any) throw std::invalid_argument("maximize_over_cubes: every cube is empty after clipping");
  return best;
}

inline AcquisitionMax maximize_over_cubes(const GpModel& model, const Dataset& data, double beta_t,
                                          const HypercubeSet& set, const MaximizerConfig& cfg) {
  return maximize_over_cubes(GpPosterior(model, data), beta_t, set, cfg);
}

}  // namespace hubo
