#pragma once

// Numerical checks of the series bounds, the search-space geometry and the
// nearest-hypercube distance bound, collected into a pass/fail report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hubo/hypercubes.hpp"
#include "hubo/rng.hpp"
#include "hubo/search_space.hpp"
#include "hubo/series.hpp"

namespace hubo {

struct DiagnosticCheck {
  std::string name;
  bool passed = false;
  double margin = 0.0;  ///< smallest slack observed; negative on violation
  std::string detail;
};

namespace diag {

struct SweepResult {
  std::int64_t violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::int64_t checked = 0;

  void record(double margin, bool strict = true) {
    ++checked;
    min_margin = std::min(min_margin, margin);
    if (strict ? !(margin > 0.0) : !(margin >= 0.0)) ++violations;
  }
};

/// lower(n) < S_n < upper(n) for 2 <= n <= n_max, margins relative to S_n.
inline SweepResult partial_sum_sandwich(const std::vector<double>& alphas, std::int64_t n_max) {
  SweepResult out;
  for (double alpha : alphas) {
    series::HyperharmonicSum s(alpha);
    s.advance();
    for (std::int64_t n = 2; n <= n_max; ++n) {
      s.advance();
      const double v = s.value();
      out.record((v - series::partial_sum_lower_bound({alpha, n})) / v);
      out.record((series::partial_sum_upper_bound({alpha, n}) - v) / v);
    }
  }
  return out;
}

/// sum_{k<=n} k^-p < 1/(p-1) + 1 for every n <= n_max.
inline SweepResult p_series(const std::vector<double>& ps, std::int64_t n_max) {
  SweepResult out;
  for (double p : ps) {
    const double bound = series::p_series_bound(p);
    series::HyperharmonicSum s(-p);
    for (std::int64_t n = 1; n <= n_max; ++n) {
      s.advance();
      out.record(bound - s.value());
    }
  }
  return out;
}

/// Gamma(d/2 + 1)^(1/d) < sqrt(d + 2) for 1 <= d <= d_max.
inline SweepResult gamma_root_bound(int d_max) {
  SweepResult out;
  for (int d = 1; d <= d_max; ++d) out.record(std::sqrt(d + 2.0) - series::gamma_root(d));
  return out;
}

/// Largest relative error between iterated expand/translate and the closed-form side.
inline double side_length_error(double alpha, std::int64_t t_max, std::uint64_t seed = 1) {
  ExpansionConfig cfg{0.0, 1.0, alpha, -2.0, 3.0, 2, {}};
  SearchBox box = cfg.initial_box();
  Rng rng(seed, "side-length");
  double worst = 0.0;
  for (std::int64_t t = 1; t <= t_max; ++t) {
    box = expand(box, t, cfg);
    if (t % 7 == 0) box = translate(box, rng.uniform_in(Eigen::VectorXd::Constant(2, -10.0),
                                                        Eigen::VectorXd::Constant(2, 10.0)), cfg);
    const double exact = side_length_closed_form(t, cfg);
    worst = std::max(worst, std::abs(box.side() - exact) / exact);
  }
  return worst;
}

/// Random expand/translate trajectories: counts boxes X_t (t <= T) not inside C_T.
inline SweepResult envelope_containment(int trajectories, std::int64_t T, std::uint64_t seed = 2) {
  SweepResult out;
  Rng rng(seed, "envelope");
  for (int k = 0; k < trajectories; ++k) {
    const int d = 1 + static_cast<int>(rng.next() % 4);
    const double alpha = -1.0 + 0.99 * rng.uniform();
    const double a = rng.uniform(-1.0, 0.0);
    const double b = a + rng.uniform(0.1, 2.0);
    const double c_min = a - rng.uniform(0.0, 5.0);
    const double c_max = b + rng.uniform(0.0, 5.0);
    ExpansionConfig cfg{a, b, alpha, c_min, c_max, d, {}};
    const Bounds env = envelope(T, cfg).bounds();
    const Bounds wander{Eigen::VectorXd::Constant(d, c_min - 20.0), Eigen::VectorXd::Constant(d, c_max + 20.0)};
    SearchBox box = cfg.initial_box();
    for (std::int64_t t = 1; t <= T; ++t) {
      box = translate(expand(box, t, cfg), rng.uniform_in(wander.lower, wander.upper), cfg);
      const Bounds xb = box.bounds();
      out.record(std::min((xb.lower - env.lower).minCoeff(), (env.upper - xb.upper).minCoeff()), false);
    }
  }
  return out;
}

/// True when the box centred on every corner of C_initial, with side
/// side(T), contains [a_g, b_g]^d.
inline bool corners_contain(double a_g, double b_g, std::int64_t T, const ExpansionConfig& cfg) {
  const Eigen::VectorXd o = cfg.offset();
  const double half = 0.5 * side_length_closed_form(T, cfg);
  const int d = cfg.dim;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    for (int i = 0; i < d; ++i) {
      const double c = o[i] + ((mask >> i) & 1 ? cfg.c_max : cfg.c_min);
      if (!(c - half <= a_g && b_g <= c + half)) return false;
    }
  }
  return true;
}

struct ReachabilityCase {
  ExpansionConfig cfg;
  double a_g = 0.0;
  double b_g = 0.0;
  ReachabilityResult result;
  bool contained = false;
};

/// Random instances, adversarial-corner containment at the computed horizon.
inline std::vector<ReachabilityCase> reachability_instances(double alpha, int count, std::uint64_t seed = 3) {
  std::vector<ReachabilityCase> out;
  Rng rng(seed, "reachability");
  for (int k = 0; k < count; ++k) {
    const int d = 1 + static_cast<int>(rng.next() % 3);
    const double a = rng.uniform(-1.0, 1.0);
    const double b = a + rng.uniform(0.5, 2.0);
    const double c_min = a - rng.uniform(0.0, 1.0);
    const double c_max = b + rng.uniform(0.0, 1.0);
    ReachabilityCase rc;
    rc.cfg = {a, b, alpha, c_min, c_max, d, {}};
    const double c0 = 0.5 * (c_min + c_max);
    rc.a_g = c0 - rng.uniform(0.5, 4.0) * (b - a);
    rc.b_g = c0 + rng.uniform(0.5, 4.0) * (b - a);
    rc.result = reachability_horizon(rc.a_g, rc.b_g, rc.cfg);
    rc.contained = !rc.result.exceeds_limit && corners_contain(rc.a_g, rc.b_g, rc.result.horizon, rc.cfg);
    out.push_back(rc);
  }
  return out;
}

/// Setup for the nearest-hypercube Monte Carlo: X_t is the expanded X_0 =
/// [-w/2, w/2]^d (no translation) and x* a fixed interior point.
struct DistanceStudy {
  int d = 2;
  double alpha = -1.0;
  double lambda = 1.0;
  std::int64_t n0 = 1;
  double width = 1.0;
  double l_h = 0.1;
  int seeds = 200;
  std::uint64_t base_seed = 0;

  Eigen::VectorXd x_star() const {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = (i % 2 == 0 ? 0.3 : -0.2) * width;
    return x;
  }

  std::vector<double> distances(std::int64_t t) const {
    const ExpansionConfig cfg{-0.5 * width, 0.5 * width, alpha, -0.5 * width, 0.5 * width, d, {}};
    const SearchBox box{Eigen::VectorXd::Zero(d), 0.5 * side_length_closed_form(t, cfg)};
    const HdConfig hd{lambda, n0, l_h, base_seed};
    const Eigen::VectorXd xs = x_star();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(seeds));
    for (int s = 0; s < seeds; ++s) {
      Rng rng(derive_seed(base_seed + static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(t)));
      out.push_back(nearest_in_set(sample_cubes(box, t, hd, rng), xs).distance);
    }
    return out;
  }
};

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double violation_rate(const std::vector<double>& dist, double bound) {
  const auto bad = std::count_if(dist.begin(), dist.end(), [&](double x) { return x > bound; });
  return static_cast<double>(bad) / static_cast<double>(dist.size());
}

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace diag

/// Runs every check; failures are report content.
inline std::vector<DiagnosticCheck> run_diagnostics() {
  using namespace diag;
  std::vector<DiagnosticCheck> checks;
  auto sweep = [&](const std::string& name, const SweepResult& r) {
    checks.push_back({name, r.violations == 0, r.min_margin,
                      std::to_string(r.checked) + " comparisons, " + std::to_string(r.violations) + " violations"});
  };

  sweep("partial_sum_sandwich", partial_sum_sandwich({-1.0, -0.9, -0.5, -0.1}, 100000));
  sweep("p_series_bound", p_series({1.5, 2.0, 3.0}, 1000000));
  sweep("gamma_root_bound", gamma_root_bound(200));

  for (double alpha : {-1.0, -0.5}) {
    const double err = side_length_error(alpha, 10000);
    checks.push_back({"side_length_closed_form alpha=" + fmt("%g", alpha), err <= 1e-12, 1e-12 - err,
                      "max relative error " + fmt("%.3e", err)});
  }
  sweep("envelope_containment", envelope_containment(100, 50));

  for (double alpha : {-1.0, -0.9}) {
    const auto cases = reachability_instances(alpha, 20);
    int ok = 0;
    std::int64_t worst = 0;
    for (const auto& c : cases) {
      ok += c.contained;
      worst = std::max(worst, c.result.horizon);
    }
    checks.push_back({"reachability alpha=" + fmt("%g", alpha), ok == 20, static_cast<double>(ok - 20),
                      std::to_string(ok) + "/20 instances contained, largest horizon " + std::to_string(worst)});
  }

  // A target 100 widths beyond the centre of C_initial.
  for (double alpha : {-1.0, -0.5}) {
    const ExpansionConfig cfg{0.0, 1.0, alpha, 0.0, 1.0, 2, {}};
    const double a_g = 0.5 - 100.0, b_g = 0.5 + 100.0;
    const auto r = reachability_horizon(a_g, b_g, cfg);
    DiagnosticCheck c{"reachability far target alpha=" + fmt("%g", alpha), false, 0.0, ""};
    if (r.exceeds_limit) {
      // Consistent only if even the upper bound on the sum cannot reach it.
      const double h = 0.5 * (1.0 + series::partial_sum_upper_bound({alpha, 1000000000}));
      c.passed = h < 100.0;
      c.margin = 100.0 - h;
      c.detail = "horizon exceeds 1e9 (upper bound on reach at 1e9: " + fmt("%.3f", h) + " widths)";
    } else {
      c.passed = corners_contain(a_g, b_g, r.horizon, cfg) && !corners_contain(a_g, b_g, r.horizon - 1, cfg);
      c.margin = c.passed ? 1.0 : -1.0;
      c.detail = "horizon " + std::to_string(r.horizon) + ", contained from every corner";
    }
    checks.push_back(c);
  }

  {
    DistanceStudy st{2, -1.0, 1.0, 1, 1.0, 0.1, 200, 0};
    const double delta = 0.2;
    double worst = -1.0;
    std::string detail;
    for (std::int64_t t : {50, 100, 400}) {
      const double bound = nearest_distance_bound(st.width, st.d, st.alpha, st.lambda, delta, static_cast<double>(t));
      const double rate = violation_rate(st.distances(t), bound);
      worst = std::max(worst, rate);
      detail += "t=" + std::to_string(t) + " rate " + fmt("%.3f", rate) + " bound " + fmt("%.4f", bound) + "; ";
    }
    checks.push_back({"nearest_distance_bound d=2 alpha=-1 lambda=1", worst <= delta, delta - worst, detail});
  }

  {
    // lambda = 0 <= d(alpha + 1) = 1: the distance should not shrink.
    DistanceStudy st{2, -0.5, 0.0, 1, 1.0, 0.1, 200, 0};
    std::vector<double> med;
    std::string detail = "median distance";
    for (std::int64_t t : {50, 100, 400, 1600}) {
      med.push_back(median(st.distances(t)));
      detail += " t=" + std::to_string(t) + ":" + fmt("%.4f", med.back());
    }
    bool non_decreasing = true;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < med.size(); ++i) {
      non_decreasing = non_decreasing && med[i] >= med[i - 1];
      margin = std::min(margin, med[i] - med[i - 1]);
    }
    checks.push_back({"distance series non-decreasing outside regime (lambda=0, alpha=-0.5)", non_decreasing,
                      margin, detail});
  }
  return checks;
}

inline void write_report(std::ostream& out, const std::vector<DiagnosticCheck>& checks) {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  margin=" << diag::fmt("%.6g", c.margin) << "  "
        << c.detail << "\n";
  }
}

/// Writes diagnostics.txt under `dir`; returns the checks.
inline std::vector<DiagnosticCheck> diagnostics(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto checks = run_diagnostics();
  std::ofstream out(dir / "diagnostics.txt", std::ios::binary);
  write_report(out, checks);
  return checks;
}

}  // namespace hubo
