#pragma once

// Synthetic test functions with known optima, negated into the
// maximization convention, and the initial-space sizing used by the
// experiments.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hubo/driver.hpp"
#include "hubo/rng.hpp"
#include "hubo/search_space.hpp"

namespace hubo {

struct BenchmarkFunction {
  std::string name;
  int dim = 0;
  Bounds domain;  ///< canonical domain
  std::function<double(const Eigen::VectorXd&)> eval;
  double optimum_value = 0.0;
  Eigen::VectorXd optimum_point;

  Objective objective(double noise_std = 0.0) const {
    return {eval, dim, noise_std, optimum_value, optimum_point};
  }
};

namespace bench {

inline double beale(const Eigen::VectorXd& v) {
  const double x = v[0], y = v[1];
  const double a = 1.5 - x + x * y;
  const double b = 2.25 - x + x * y * y;
  const double c = 2.625 - x + x * y * y * y;
  return -(a * a + b * b + c * c);
}

// Standard published coefficients.
inline constexpr std::array<double, 4> kHartmannAlpha = {1.0, 1.2, 3.0, 3.2};

inline constexpr double kHartmann3A[4][3] = {
    {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}};
inline constexpr double kHartmann3P[4][3] = {
    {0.3689, 0.1170, 0.2673}, {0.4699, 0.4387, 0.7470}, {0.1091, 0.8732, 0.5547}, {0.0381, 0.5743, 0.8828}};

inline constexpr double kHartmann6A[4][6] = {{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
                                             {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
                                             {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
                                             {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}};
inline constexpr double kHartmann6P[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                             {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                             {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                                             {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};

// Optima located by multi-start local optimisation (tests/oracles/hartmann_optima.py).
inline constexpr double kHartmann3Argmax[3] = {0.11458887741214975, 0.5556488951392669, 0.8525469845276534};
inline constexpr double kHartmann6Argmax[6] = {0.20168951070303964, 0.15001068790627403, 0.4768739753143767,
                                               0.2753324287374869,  0.3116516161342437,  0.6573005326794082};

template <int D>
double hartmann(const Eigen::VectorXd& x, const double (&a)[4][D], const double (&p)[4][D]) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < D; ++j) inner += a[i][j] * (x[j] - p[i][j]) * (x[j] - p[i][j]);
    s += kHartmannAlpha[i] * std::exp(-inner);
  }
  return s;
}

inline double hartmann3(const Eigen::VectorXd& x) { return hartmann<3>(x, kHartmann3A, kHartmann3P); }
inline double hartmann6(const Eigen::VectorXd& x) { return hartmann<6>(x, kHartmann6A, kHartmann6P); }

inline double ackley(const Eigen::VectorXd& x) {
  const double d = static_cast<double>(x.size());
  double sq = 0.0, cs = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sq += x[i] * x[i];
    cs += std::cos(2.0 * std::numbers::pi * x[i]);
  }
  return 20.0 * std::exp(-0.2 * std::sqrt(sq / d)) + std::exp(cs / d) - 20.0 - std::numbers::e;
}

inline double levy(const Eigen::VectorXd& x) {
  const Eigen::Index d = x.size();
  auto w = [&](Eigen::Index i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double pi = std::numbers::pi;
  const double s0 = std::sin(pi * w(0));
  double f = s0 * s0;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double s = std::sin(pi * wi + 1.0);
    f += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
  }
  const double wd = w(d - 1);
  const double sd = std::sin(2.0 * pi * wd);
  f += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
  return -f;
}

inline Bounds cube(int d, double lo, double hi) {
  return {Eigen::VectorXd::Constant(d, lo), Eigen::VectorXd::Constant(d, hi)};
}

}  // namespace bench

inline std::vector<std::string> benchmark_names() { return {"beale", "hartmann3", "hartmann6", "ackley", "levy"}; }

inline BenchmarkFunction make_benchmark(const std::string& name, std::optional<int> dim = std::nullopt) {
  auto check_fixed = [&](int fixed) {
    if (dim && *dim != fixed) {
      throw std::invalid_argument(name + " is defined only for d = " + std::to_string(fixed));
    }
  };
  auto need_dim = [&]() {
    if (!dim) throw std::invalid_argument(name + " needs an explicit dimension");
    if (*dim < 1) throw std::invalid_argument(name + ": dimension must be positive");
    return *dim;
  };

  if (name == "beale") {
    check_fixed(2);
    return {name, 2, bench::cube(2, -4.5, 4.5), bench::beale, 0.0, Eigen::Vector2d(3.0, 0.5)};
  }
  if (name == "hartmann3") {
    check_fixed(3);
    const Eigen::VectorXd xs = Eigen::Map<const Eigen::VectorXd>(bench::kHartmann3Argmax, 3);
    return {name, 3, bench::cube(3, 0.0, 1.0), bench::hartmann3, bench::hartmann3(xs), xs};
  }
  if (name == "hartmann6") {
    check_fixed(6);
    const Eigen::VectorXd xs = Eigen::Map<const Eigen::VectorXd>(bench::kHartmann6Argmax, 6);
    return {name, 6, bench::cube(6, 0.0, 1.0), bench::hartmann6, bench::hartmann6(xs), xs};
  }
  if (name == "ackley") {
    const int d = need_dim();
    return {name, d, bench::cube(d, -32.768, 32.768), bench::ackley, 0.0, Eigen::VectorXd::Zero(d)};
  }
  if (name == "levy") {
    const int d = need_dim();
    return {name, d, bench::cube(d, -10.0, 10.0), bench::levy, 0.0, Eigen::VectorXd::Ones(d)};
  }
  throw std::invalid_argument("unknown benchmark '" + name + "'");
}

/// X_0 and C_initial for one experiment run.
struct InitialSpace {
  double a = 0.0;      ///< X_0 = origin + [a, b]^d
  double b = 1.0;
  double c_min = 0.0;  ///< C_initial = origin + [c_min, c_max]^d
  double c_max = 1.0;
  Eigen::VectorXd origin;

  ExpansionConfig expansion(double alpha) const {
    return {a, b, alpha, c_min, c_max, static_cast<int>(origin.size()), origin};
  }
};

/// X_0 with side `fraction` of the canonical side, centred uniformly at
/// random so that it stays inside the domain; C_initial is concentric with
/// X_0 and `c_factor` times its side.
inline InitialSpace initial_space(const BenchmarkFunction& f, double fraction, std::uint64_t seed,
                                  double c_factor = 10.0) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("initial_space: fraction in (0, 1]");
  if (!(c_factor >= 1.0)) throw std::invalid_argument("initial_space: c_factor must be >= 1");
  const Eigen::VectorXd width = f.domain.upper - f.domain.lower;
  const double side = fraction * width.minCoeff();
  Rng rng(seed, "initial-space");
  Eigen::VectorXd center(f.dim);
  for (int i = 0; i < f.dim; ++i) {
    const double lo = f.domain.lower[i] + 0.5 * side;
    const double hi = f.domain.upper[i] - 0.5 * side;
    center[i] = hi > lo ? rng.uniform(lo, hi) : 0.5 * (f.domain.lower[i] + f.domain.upper[i]);
  }
  return {-0.5 * side, 0.5 * side, -0.5 * c_factor * side, 0.5 * c_factor * side, center};
}

}  // namespace hubo
