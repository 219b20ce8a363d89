#pragma once

// Gaussian-process regression with a constant prior mean: kernels,
// posterior prediction, log marginal likelihood and a derivative-free
// maximum-likelihood fit of (lengthscale, signal variance, noise variance).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace hubo {

enum class KernelFamily { SquaredExponential, Matern };

struct KernelSpec {
  KernelFamily family = KernelFamily::SquaredExponential;
  double nu = 2.5;  ///< Matern smoothness; only 5/2 is supported.
  double lengthscale = 1.0;
  double signal_variance = 1.0;

  void validate() const {
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
      throw std::invalid_argument("KernelSpec: lengthscale must be positive");
    }
    if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
      throw std::invalid_argument("KernelSpec: signal_variance must be positive");
    }
    if (family == KernelFamily::Matern && nu != 2.5) {
      throw std::invalid_argument("KernelSpec: only Matern nu = 5/2 is supported");
    }
  }
};

namespace detail {

/// Unit-variance correlation as a function of the squared distance.
inline double correlation(KernelFamily family, double lengthscale, double sqdist) {
  if (family == KernelFamily::SquaredExponential) {
    return std::exp(-0.5 * sqdist / (lengthscale * lengthscale));
  }
  const double s = std::sqrt(5.0 * sqdist) / lengthscale;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

}  // namespace detail

inline double kernel_eval(const KernelSpec& k, const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
  if (x.size() != x2.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  return k.signal_variance * detail::correlation(k.family, k.lengthscale, (x - x2).squaredNorm());
}

/// Observations D_{1:t}.
class Dataset {
 public:
  explicit Dataset(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("Dataset: dim must be positive");
  }

  void add(Eigen::VectorXd x, double y) {
    if (x.size() != dim_) throw std::invalid_argument("Dataset::add: dimension mismatch");
    if (!x.allFinite() || !std::isfinite(y)) {
      throw std::invalid_argument("Dataset::add: non-finite observation");
    }
    points_.push_back(std::move(x));
    targets_.push_back(y);
  }

  int dim() const { return dim_; }
  std::size_t size() const { return targets_.size(); }
  bool empty() const { return targets_.empty(); }
  const std::vector<Eigen::VectorXd>& points() const { return points_; }
  const std::vector<double>& targets() const { return targets_; }
  const Eigen::VectorXd& point(std::size_t i) const { return points_[i]; }
  double target(std::size_t i) const { return targets_[i]; }

 private:
  int dim_;
  std::vector<Eigen::VectorXd> points_;
  std::vector<double> targets_;
};

struct GpModel {
  KernelSpec kernel;
  double noise_variance = 1e-6;
  double prior_mean = 0.0;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr double kJitterBase = 1e-10;
inline constexpr int kJitterEscalations = 6;

/// Cholesky of gram + diag(noise) with jitter escalation.
///
/// The first attempt floors the diagonal addition at kJitterBase * signal;
/// each failure adds a ten times larger jitter on top of the noise.
inline Eigen::LLT<Eigen::MatrixXd> factor_with_jitter(const Eigen::MatrixXd& gram, double noise,
                                                      double signal) {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = kJitterBase * signal;
  for (int attempt = 0; attempt <= kJitterEscalations; ++attempt, jitter *= 10.0) {
    const double add = attempt == 0 ? std::max(noise, jitter) : noise + jitter;
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += add;
    llt.compute(a);
    if (llt.info() == Eigen::Success) return llt;
  }
  throw FactorizationError("Gram matrix not positive definite after maximum jitter");
}

inline double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixL().nestedExpression().diagonal().array().log().sum();
}

inline Eigen::MatrixXd pairwise_sqdist(const Eigen::MatrixXd& cols) {
  const Eigen::Index n = cols.cols();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double s = (cols.col(i) - cols.col(j)).squaredNorm();
      d(i, j) = s;
      d(j, i) = s;
    }
  }
  return d;
}

inline Eigen::MatrixXd correlation_matrix(KernelFamily family, double lengthscale,
                                          const Eigen::MatrixXd& sqdist) {
  const Eigen::Index n = sqdist.rows();
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    r(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = correlation(family, lengthscale, sqdist(i, j));
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

inline Eigen::MatrixXd as_columns(const Dataset& data) {
  Eigen::MatrixXd x(data.dim(), static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = data.point(i);
  return x;
}

inline Eigen::VectorXd residuals(const Dataset& data, double prior_mean) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) r[static_cast<Eigen::Index>(i)] = data.target(i) - prior_mean;
  return r;
}

inline double gaussian_lml(double quad, double logdet, std::size_t n) {
  return -0.5 * quad - 0.5 * logdet - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

}  // namespace detail

/// A model conditioned on a dataset. Holds the factorization so that many
/// predictions share one O(t^3) solve.
class GpPosterior {
 public:
  GpPosterior(GpModel model, const Dataset& data) : model_(std::move(model)), dim_(data.dim()) {
    model_.kernel.validate();
    if (!(model_.noise_variance >= 0.0)) {
      throw std::invalid_argument("GpModel: noise_variance must be nonnegative");
    }
    x_ = detail::as_columns(data);
    residual_ = detail::residuals(data, model_.prior_mean);
    if (data.empty()) return;
    const Eigen::MatrixXd gram = model_.kernel.signal_variance *
        detail::correlation_matrix(model_.kernel.family, model_.kernel.lengthscale,
                                   detail::pairwise_sqdist(x_));
    const auto llt = detail::factor_with_jitter(gram, model_.noise_variance, model_.kernel.signal_variance);
    l_ = llt.matrixL();
    weights_ = llt.solve(residual_);
    log_det_ = detail::log_det(llt);
  }

  Prediction predict(const Eigen::VectorXd& x) const {
    if (x.size() != dim_) throw std::invalid_argument("posterior: dimension mismatch");
    const double prior_var = model_.kernel.signal_variance;
    if (x_.cols() == 0) return {model_.prior_mean, prior_var};
    Eigen::VectorXd k(x_.cols());
    for (Eigen::Index i = 0; i < x_.cols(); ++i) {
      k[i] = prior_var * detail::correlation(model_.kernel.family, model_.kernel.lengthscale,
                                             (x_.col(i) - x).squaredNorm());
    }
    const double mean = model_.prior_mean + k.dot(weights_);
    l_.triangularView<Eigen::Lower>().solveInPlace(k);
    const double var = prior_var - k.squaredNorm();
    return {mean, var > 0.0 ? var : 0.0};
  }

  double log_marginal_likelihood() const {
    if (x_.cols() == 0) throw std::invalid_argument("log_marginal_likelihood: empty dataset");
    return detail::gaussian_lml(residual_.dot(weights_), log_det_, static_cast<std::size_t>(x_.cols()));
  }

  const GpModel& model() const { return model_; }
  int dim() const { return dim_; }
  std::size_t size() const { return static_cast<std::size_t>(x_.cols()); }

 private:
  GpModel model_;
  int dim_;
  Eigen::MatrixXd x_;
  Eigen::VectorXd residual_;
  Eigen::MatrixXd l_;
  Eigen::VectorXd weights_;
  double log_det_ = 0.0;
};

inline Prediction posterior(const GpModel& model, const Dataset& data, const Eigen::VectorXd& x) {
  return GpPosterior(model, data).predict(x);
}

inline double log_marginal_likelihood(const GpModel& model, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("log_marginal_likelihood: empty dataset");
  return GpPosterior(model, data).log_marginal_likelihood();
}

struct FitConfig {
  KernelFamily family = KernelFamily::SquaredExponential;
  /// Side length L of the current search space; the lengthscale grid spans [1e-2 L, 10 L].
  double scale = 1.0;
  int grid_points = 8;
  int sweeps = 20;
  /// Signal/noise variance used when the targets carry no variance.
  double variance_floor = 1e-10;
};

namespace detail {

/// Log-space box searched by fit_mle.
struct MleGrid {
  double lo[3];
  double hi[3];
  int points;

  double at(int axis, int i) const {
    return points == 1 ? lo[axis] : lo[axis] + (hi[axis] - lo[axis]) * i / (points - 1);
  }
  double spacing(int axis) const {
    return points == 1 ? (hi[axis] - lo[axis]) : (hi[axis] - lo[axis]) / (points - 1);
  }
};

}  // namespace detail

/// Maximum-likelihood hyperparameters on a log grid followed by
/// coordinate-wise pattern refinement. Deterministic: ties keep the
/// lexicographically first (lengthscale, signal, noise) grid point.
inline GpModel fit_mle(const Dataset& data, const FitConfig& cfg) {
  const std::size_t n = data.size();
  if (n < 2) throw std::invalid_argument("fit_mle: need at least two observations");
  if (cfg.grid_points < 1 || cfg.sweeps < 0) throw std::invalid_argument("fit_mle: bad FitConfig");

  double mean = 0.0;
  for (double y : data.targets()) mean += y;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double y : data.targets()) var += (y - mean) * (y - mean);
  var /= static_cast<double>(n);

  const double scale = cfg.scale > 0.0 && std::isfinite(cfg.scale) ? cfg.scale : 1.0;
  GpModel model;
  model.kernel.family = cfg.family;
  model.prior_mean = mean;
  if (!(var > cfg.variance_floor)) {
    model.kernel.lengthscale = scale;
    model.kernel.signal_variance = cfg.variance_floor;
    model.noise_variance = cfg.variance_floor;
    return model;
  }

  const double log_var = std::log(var);
  const detail::MleGrid grid{{std::log(1e-2 * scale), log_var + std::log(1e-3), log_var + std::log(1e-6)},
                             {std::log(10.0 * scale), log_var + std::log(1e3), log_var},
                             cfg.grid_points};

  const Eigen::MatrixXd sqdist = detail::pairwise_sqdist(detail::as_columns(data));
  const Eigen::VectorXd resid = detail::residuals(data, mean);
  const double t = static_cast<double>(n);

  // With K = s * (R + (noise/s) I), one factorization per (lengthscale,
  // noise/signal ratio) serves every signal level.
  double best = -std::numeric_limits<double>::infinity();
  double best_p[3] = {grid.at(0, 0), grid.at(1, 0), grid.at(2, 0)};
  for (int li = 0; li < grid.points; ++li) {
    const double ell = std::exp(grid.at(0, li));
    const Eigen::MatrixXd corr = detail::correlation_matrix(cfg.family, ell, sqdist);
    std::map<int, std::pair<double, double>> by_ratio;  // si - ni -> (quad, logdet)
    for (int si = 0; si < grid.points; ++si) {
      const double log_sf2 = grid.at(1, si);
      for (int ni = 0; ni < grid.points; ++ni) {
        const double log_sn2 = grid.at(2, ni);
        auto it = by_ratio.find(ni - si);
        if (it == by_ratio.end()) {
          std::pair<double, double> entry{std::numeric_limits<double>::quiet_NaN(), 0.0};
          try {
            const auto llt = detail::factor_with_jitter(corr, std::exp(log_sn2 - log_sf2), 1.0);
            entry = {resid.dot(llt.solve(resid)), detail::log_det(llt)};
          } catch (const FactorizationError&) {
          }
          it = by_ratio.emplace(ni - si, entry).first;
        }
        const auto [quad, logdet] = it->second;
        if (std::isnan(quad)) continue;
        const double lml = detail::gaussian_lml(quad / std::exp(log_sf2), t * log_sf2 + logdet, n);
        if (lml > best) {
          best = lml;
          best_p[0] = grid.at(0, li);
          best_p[1] = log_sf2;
          best_p[2] = log_sn2;
        }
      }
    }
  }
  if (!std::isfinite(best)) throw FactorizationError("fit_mle: no grid point could be factorized");

  auto evaluate = [&](const double* p) {
    try {
      const Eigen::MatrixXd gram = std::exp(p[1]) * detail::correlation_matrix(cfg.family, std::exp(p[0]), sqdist);
      const auto llt = detail::factor_with_jitter(gram, std::exp(p[2]), std::exp(p[1]));
      return detail::gaussian_lml(resid.dot(llt.solve(resid)), detail::log_det(llt), n);
    } catch (const FactorizationError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  // Re-score the incumbent on the direct path so refinement compares like with like.
  if (const double direct = evaluate(best_p); std::isfinite(direct)) best = direct;
  double step[3] = {grid.spacing(0), grid.spacing(1), grid.spacing(2)};
  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    bool improved = false;
    for (int axis = 0; axis < 3; ++axis) {
      for (double dir : {1.0, -1.0}) {
        double cand[3] = {best_p[0], best_p[1], best_p[2]};
        cand[axis] = std::clamp(cand[axis] + dir * step[axis], grid.lo[axis], grid.hi[axis]);
        if (cand[axis] == best_p[axis]) continue;
        const double v = evaluate(cand);
        if (v > best) {
          best = v;
          best_p[axis] = cand[axis];
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      for (double& s : step) s *= 0.5;
    }
  }

  model.kernel.lengthscale = std::exp(best_p[0]);
  model.kernel.signal_variance = std::exp(best_p[1]);
  model.noise_variance = std::exp(best_p[2]);
  return model;
}

}  // namespace hubo
