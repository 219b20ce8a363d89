#pragma once

// Outer optimisation loops: the expanding-space GP-UCB loop, its
// hypercube-restricted variant, the volume-doubling baseline, and regret
// bookkeeping over the resulting traces.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hubo/acquisition.hpp"
#include "hubo/gp.hpp"
#include "hubo/hypercubes.hpp"
#include "hubo/rng.hpp"
#include "hubo/search_space.hpp"

namespace hubo {

/// Black-box objective in the maximization convention.
struct Objective {
  std::function<double(const Eigen::VectorXd&)> eval;
  int dim = 1;
  double noise_std = 0.0;
  std::optional<double> optimum_value;
  std::optional<Eigen::VectorXd> optimum_point;
};

enum class Algorithm { HuBO, HdHuBO, Vol2 };

/// What the search space is recentred on each iteration.
enum class IncumbentRule { BestObserved, BestPosteriorMean };

struct RunConfig {
  ExpansionConfig expansion;
  std::optional<HdConfig> hd;
  BetaSchedule beta;
  MaximizerConfig maximizer;
  std::int64_t budget_T = 30;
  int n_init = 3;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::HuBO;
  IncumbentRule incumbent = IncumbentRule::BestObserved;
  KernelFamily kernel = KernelFamily::SquaredExponential;
  bool record_wall_time = false;

  void validate() const {
    expansion.validate();
    beta.validate();
    maximizer.validate();
    if (budget_T < 0) throw std::invalid_argument("RunConfig: budget_T must be >= 0");
    if (n_init < 2) throw std::invalid_argument("RunConfig: n_init must be >= 2");
    if (beta.dim != expansion.dim) throw std::invalid_argument("RunConfig: beta.dim != expansion.dim");
    const bool hd_alg = algorithm == Algorithm::HdHuBO;
    if (hd_alg != hd.has_value()) throw std::invalid_argument("RunConfig: hd must be set iff algorithm is HdHuBO");
    if (hd) hd->validate();
    if (hd_alg != (beta.variant == BetaVariant::HdHuBO)) {
      throw std::invalid_argument("RunConfig: beta variant does not match algorithm");
    }
  }
};

/// Default initial design size: max(3, d + 1).
inline int default_n_init(int d) { return std::max(3, d + 1); }

struct IterationRecord {
  std::int64_t t = 0;  ///< 0 for initial-design points.
  Eigen::VectorXd x;
  double y = 0.0;
  double best_y = 0.0;
  std::optional<double> regret;
  std::optional<double> cumulative_regret;
  std::optional<double> log_distance;
  double side = 0.0;
  std::optional<std::int64_t> n_cubes;
  double wall_ms = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  int n_init = 0;
  bool complete = true;
  std::string error;

  const IterationRecord& last() const { return records.back(); }
  /// Last record of the initial design, or nullptr if there was none.
  const IterationRecord* initial_design_end() const {
    return n_init > 0 && static_cast<int>(records.size()) >= n_init ? &records[n_init - 1] : nullptr;
  }
};

inline constexpr double kLogDistanceFloor = -12.0;

/// Side of the volume-doubling baseline at iteration t: doubles in volume
/// every 3d iterations.
inline double vol2_side(std::int64_t t, double initial_side, int d) {
  const std::int64_t doublings = t / (3 * static_cast<std::int64_t>(d));
  return initial_side * std::pow(2.0, static_cast<double>(doublings) / d);
}

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline RunTrace run_loop(const Objective& obj, const RunConfig& cfg) {
  cfg.validate();
  const int d = cfg.expansion.dim;
  if (obj.dim != d) throw std::invalid_argument("run: objective dimension does not match the configuration");
  if (!obj.eval) throw std::invalid_argument("run: objective has no eval function");

  Rng init_rng(cfg.seed, "init");
  Rng noise_rng(cfg.seed, "noise");
  Rng cube_rng(derive_seed(derive_seed(cfg.seed, "cubes"), cfg.hd ? cfg.hd->seed : 0));
  const std::uint64_t maximizer_seed = derive_seed(cfg.seed, "maximizer");

  RunTrace trace;
  trace.n_init = cfg.n_init;
  Dataset data(d);
  SearchBox box = cfg.expansion.initial_box();
  const SearchBox initial = box;
  double best_y = -std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;

  auto observe = [&](const Eigen::VectorXd& x) {
    const double f = obj.eval(x);
    if (!std::isfinite(f)) throw std::runtime_error("objective returned a non-finite value");
    const double y = obj.noise_std > 0.0 ? f + obj.noise_std * noise_rng.normal() : f;
    data.add(x, y);
    if (y > best_y) {
      best_y = y;
      best_index = data.size() - 1;
    }
    return y;
  };

  try {
    const Bounds x0 = initial.bounds();
    for (int i = 0; i < cfg.n_init; ++i) {
      IterationRecord rec;
      rec.x = init_rng.uniform_in(x0.lower, x0.upper);
      rec.y = observe(rec.x);
      rec.best_y = best_y;
      rec.side = box.side();
      trace.records.push_back(std::move(rec));
    }

    for (std::int64_t t = 1; t <= cfg.budget_T; ++t) {
      const Stopwatch clock;
      const GpModel model = fit_mle(data, FitConfig{cfg.kernel, box.side()});
      const GpPosterior post(model, data);

      double beta_t = 0.0;
      if (cfg.algorithm == Algorithm::Vol2) {
        box.half_side = 0.5 * vol2_side(t, initial.side(), d);
        beta_t = beta_for_side(t, cfg.beta, box.side());
      } else {
        Eigen::VectorXd target = data.point(best_index);
        if (cfg.incumbent == IncumbentRule::BestPosteriorMean) {
          double best_mean = -std::numeric_limits<double>::infinity();
          for (const auto& p : data.points()) {
            const double m = post.predict(p).mean;
            if (m > best_mean) {
              best_mean = m;
              target = p;
            }
          }
        }
        box = translate(expand(box, t, cfg.expansion), target, cfg.expansion);
        beta_t = cfg.algorithm == Algorithm::HuBO ? beta_for_side(t, cfg.beta, box.side()) : beta(t, cfg.beta);
      }

      MaximizerConfig mc = cfg.maximizer;
      mc.seed = derive_seed(maximizer_seed, static_cast<std::uint64_t>(t));
      IterationRecord rec;
      rec.t = t;
      rec.side = box.side();
      if (cfg.algorithm == Algorithm::HdHuBO) {
        const HypercubeSet set = sample_cubes(box, t, *cfg.hd, cube_rng);
        rec.x = maximize_over_cubes(post, beta_t, set, mc).x;
        rec.n_cubes = static_cast<std::int64_t>(set.size());
      } else {
        rec.x = maximize_over_box(post, beta_t, box, mc).x;
      }
      rec.y = observe(rec.x);
      rec.best_y = best_y;
      if (cfg.record_wall_time) rec.wall_ms = clock.ms();
      trace.records.push_back(std::move(rec));
    }
  } catch (const std::exception& e) {
    trace.complete = false;
    trace.error = e.what();
  }
  return trace;
}

}  // namespace detail

inline RunTrace run_hubo(const Objective& obj, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::HuBO) throw std::invalid_argument("run_hubo: algorithm must be HuBO");
  return detail::run_loop(obj, cfg);
}

inline RunTrace run_hdhubo(const Objective& obj, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::HdHuBO) throw std::invalid_argument("run_hdhubo: algorithm must be HdHuBO");
  return detail::run_loop(obj, cfg);
}

inline RunTrace run_vol2(const Objective& obj, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::Vol2) throw std::invalid_argument("run_vol2: algorithm must be Vol2");
  return detail::run_loop(obj, cfg);
}

inline RunTrace run(const Objective& obj, const RunConfig& cfg) { return detail::run_loop(obj, cfg); }

/// Fills instantaneous and cumulative regret and the log10 distance of the
/// best noiseless value to the optimum. Cumulative regret counts t >= 1 only.
inline RunTrace compute_regret(RunTrace trace, const Objective& obj) {
  if (!obj.optimum_value) throw std::invalid_argument("compute_regret: objective optimum unknown");
  const double opt = *obj.optimum_value;
  double cumulative = 0.0;
  double f_best = -std::numeric_limits<double>::infinity();
  for (auto& rec : trace.records) {
    const double f = obj.eval(rec.x);
    const double r = opt - f;
    rec.regret = r;
    if (rec.t >= 1) cumulative += r;
    rec.cumulative_regret = cumulative;
    f_best = std::max(f_best, f);
    const double gap = opt - f_best;
    rec.log_distance = gap <= 1e-12 ? kLogDistanceFloor : std::log10(gap);
  }
  return trace;
}

/// (t, R_t / t) for every iteration t >= 1.
inline std::vector<std::pair<std::int64_t, double>> sublinearity_diagnostic(const RunTrace& trace) {
  std::vector<std::pair<std::int64_t, double>> out;
  for (const auto& rec : trace.records) {
    if (rec.t < 1) continue;
    if (!rec.cumulative_regret) throw std::invalid_argument("sublinearity_diagnostic: regret not filled");
    out.emplace_back(rec.t, *rec.cumulative_regret / static_cast<double>(rec.t));
  }
  return out;
}

/// Uniform random search over `region`, recorded as t = 1..T.
inline RunTrace random_search(const Objective& obj, const Bounds& region, std::int64_t T, std::uint64_t seed) {
  if (T < 1) throw std::invalid_argument("random_search: T must be >= 1");
  if (region.dim() != obj.dim) throw std::invalid_argument("random_search: dimension mismatch");
  Rng rng(seed, "random-search");
  Rng noise(seed, "noise");
  RunTrace trace;
  double best = -std::numeric_limits<double>::infinity();
  const double side = (region.upper - region.lower).maxCoeff();
  try {
    for (std::int64_t t = 1; t <= T; ++t) {
      IterationRecord rec;
      rec.t = t;
      rec.x = rng.uniform_in(region.lower, region.upper);
      const double f = obj.eval(rec.x);
      if (!std::isfinite(f)) throw std::runtime_error("objective returned a non-finite value");
      rec.y = obj.noise_std > 0.0 ? f + obj.noise_std * noise.normal() : f;
      best = std::max(best, rec.y);
      rec.best_y = best;
      rec.side = side;
      trace.records.push_back(std::move(rec));
    }
  } catch (const std::exception& e) {
    trace.complete = false;
    trace.error = e.what();
  }
  return trace;
}

inline RunTrace random_search(const Objective& obj, const SearchBox& box, std::int64_t T, std::uint64_t seed) {
  return random_search(obj, box.bounds(), T, seed);
}

}  // namespace hubo
