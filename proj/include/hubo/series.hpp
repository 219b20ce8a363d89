#pragma once

// Hyperharmonic partial sums and the closed-form bounds used by the
// expansion geometry and the diagnostics.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hubo::series {

struct SeriesParams {
  double alpha = -1.0;
  std::int64_t n = 1;
};

namespace detail {

inline void require_bound_regime(double alpha, const char* who) {
  if (!(alpha >= -1.0 && alpha < 0.0)) {
    throw std::invalid_argument(std::string(who) + ": alpha must lie in [-1, 0), got " +
                                std::to_string(alpha));
  }
}

inline double term(std::int64_t j, double alpha) {
  if (alpha == -1.0) return 1.0 / static_cast<double>(j);
  if (alpha == 0.0) return 1.0;
  return std::pow(static_cast<double>(j), alpha);
}

}  // namespace detail

/// Running sum of j^alpha, j = 1, 2, ...
///
/// Neumaier-compensated so that a sum grown one term at a time matches a
/// fresh left-to-right evaluation to the last few ulps.
class HyperharmonicSum {
 public:
  explicit HyperharmonicSum(double alpha) : alpha_(alpha) {}

  void advance() {
    ++n_;
    const double x = detail::term(n_, alpha_);
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void advance_to(std::int64_t n) {
    while (n_ < n) advance();
  }

  double value() const { return sum_ + comp_; }
  std::int64_t terms() const { return n_; }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  std::int64_t n_ = 0;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sum_{j=1}^{n} j^alpha by direct summation. n <= 0 gives the empty sum.
inline double partial_sum(SeriesParams p) {
  HyperharmonicSum s(p.alpha);
  s.advance_to(p.n);
  return s.value();
}

inline double partial_sum_lower_bound(SeriesParams p) {
  detail::require_bound_regime(p.alpha, "partial_sum_lower_bound");
  const double n = static_cast<double>(p.n);
  if (p.alpha == -1.0) return std::log1p(n);
  const double e = p.alpha + 1.0;
  return std::expm1(e * std::log1p(n)) / e;
}

inline double partial_sum_upper_bound(SeriesParams p) {
  detail::require_bound_regime(p.alpha, "partial_sum_upper_bound");
  const double n = static_cast<double>(p.n);
  if (p.alpha == -1.0) return 1.0 + std::log(n);
  const double e = p.alpha + 1.0;
  return 1.0 + std::expm1(e * std::log(n)) / e;
}

/// Bound on every partial sum of k^-p for p > 1.
inline double p_series_bound(double p_exponent) {
  if (!(p_exponent > 1.0)) {
    throw std::invalid_argument("p_series_bound: exponent must exceed 1");
  }
  return 1.0 / (p_exponent - 1.0) + 1.0;
}

/// Gamma(d/2 + 1)^(1/d).
inline double gamma_root(int d) {
  if (d <= 0) throw std::invalid_argument("gamma_root: d must be positive");
  return std::exp(std::lgamma(0.5 * d + 1.0) / d);
}

/// M_t of the nearest-hypercube distance bound.
inline double distance_scale(double alpha, double lambda, int d, double t) {
  detail::require_bound_regime(alpha, "distance_scale");
  if (d <= 0) throw std::invalid_argument("distance_scale: d must be positive");
  if (!(t >= 1.0)) throw std::invalid_argument("distance_scale: t must be >= 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("distance_scale: lambda must be >= 0");
  const double decay = std::pow(t, -lambda / d);
  if (alpha == -1.0) return (2.0 + std::log(t)) * decay;
  return 2.0 / (alpha + 1.0) * decay;
}

}  // namespace hubo::series
