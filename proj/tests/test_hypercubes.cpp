#include <gtest/gtest.h>

#include <cmath>

#include "hubo/hypercubes.hpp"

using namespace hubo;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const SearchBox kUnit2{vec({0.5, 0.5}), 0.5};

}  // namespace

TEST(NumCubes, Examples) {
  EXPECT_EQ(num_cubes(7, {1.0, 1, 0.1, 0}), 7);
  EXPECT_EQ(num_cubes(10, {0.5, 2, 0.1, 0}), 8);
  for (double lambda : {0.0, 0.3, 1.0, 2.5}) EXPECT_EQ(num_cubes(1, {lambda, 3, 0.1, 0}), 3);
  EXPECT_THROW(num_cubes(0, {}), std::invalid_argument);
}

TEST(NumCubes, NearIntegerPowersAreExact) {
  for (std::int64_t k = 1; k <= 300; ++k) {
    EXPECT_EQ(num_cubes(k * k, {0.5, 1, 0.1, 0}), k);
    EXPECT_EQ(num_cubes(k, {2.0, 2, 0.1, 0}), 2 * k * k);
  }
}

TEST(NumCubes, Nondecreasing) {
  for (double lambda : {0.2, 0.5, 1.0, 1.7}) {
    std::int64_t prev = 0;
    for (std::int64_t t = 1; t <= 5000; ++t) {
      const auto n = num_cubes(t, {lambda, 2, 0.1, 0});
      ASSERT_GE(n, prev);
      prev = n;
    }
  }
}

TEST(HdConfig, ValidationAndRegime) {
  EXPECT_THROW((HdConfig{-1.0, 1, 0.1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((HdConfig{1.0, 0, 0.1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((HdConfig{1.0, 1, 0.0, 0}.validate()), std::invalid_argument);
  EXPECT_TRUE((HdConfig{1.0, 1, 0.1, 0}.in_theory_regime(2, -1.0)));
  EXPECT_FALSE((HdConfig{0.0, 1, 0.1, 0}.in_theory_regime(2, -0.5)));
  EXPECT_FALSE((HdConfig{1.0, 1, 0.1, 0}.in_theory_regime(2, -0.5)));
}

TEST(SampleCubes, DeterministicAndInsideParent) {
  const HdConfig cfg{1.0, 2, 0.1, 0};
  Rng a(5), b(5);
  const auto s1 = sample_cubes(kUnit2, 13, cfg, a);
  const auto s2 = sample_cubes(kUnit2, 13, cfg, b);
  ASSERT_EQ(s1.size(), 26u);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    EXPECT_EQ(s1.centers[i], s2.centers[i]);
    EXPECT_TRUE(contains(kUnit2, s1.centers[i]));
  }
}

TEST(SampleCubes, Uniform) {
  const HdConfig cfg{0.0, 100000, 0.1, 0};
  Rng rng(6);
  const auto s = sample_cubes(kUnit2, 1, cfg, rng);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  for (const auto& c : s.centers) mean += c;
  mean /= static_cast<double>(s.size());
  EXPECT_NEAR(mean[0], 0.5, 0.01);
  EXPECT_NEAR(mean[1], 0.5, 0.01);
}

TEST(Membership, Examples) {
  const HypercubeSet set{{vec({0.5, 0.5}), vec({0.95, 0.2})}, 0.2, kUnit2};
  EXPECT_TRUE(membership(set, vec({0.5, 0.5})));
  EXPECT_TRUE(membership(set, vec({0.95, 0.2})));
  EXPECT_TRUE(membership(set, vec({0.6, 0.4})));
  EXPECT_TRUE(membership(set, set.cube(0).upper));
  EXPECT_FALSE(membership(set, vec({1.02, 0.2})));
  EXPECT_FALSE(membership(set, vec({0.7, 0.7})));
  EXPECT_THROW(membership(set, vec({0.5})), std::invalid_argument);
}

TEST(Nearest, Examples) {
  const HypercubeSet set{{vec({0.5, 0.5})}, 0.2, kUnit2};
  const auto in = nearest_in_set(set, vec({0.55, 0.45}));
  EXPECT_EQ(in.distance, 0.0);
  const auto out = nearest_in_set(set, vec({0.9, 0.5}));
  EXPECT_NEAR(out.distance, 0.3, 1e-15);
  EXPECT_NEAR(out.point[0], 0.6, 1e-15);
  EXPECT_THROW(nearest_in_set(HypercubeSet{{}, 0.2, kUnit2}, vec({0.0, 0.0})), std::invalid_argument);
}

TEST(Nearest, TiesGoToLowestIndex) {
  const HypercubeSet set{{vec({0.25, 0.5}), vec({0.75, 0.5})}, 0.125, kUnit2};
  EXPECT_EQ(nearest_in_set(set, vec({0.5, 0.5})).cube, 0u);
}

TEST(Nearest, ZeroDistanceIffMember) {
  Rng rng(9);
  const auto set = sample_cubes(kUnit2, 15, {1.0, 1, 0.08, 0}, rng);
  for (int i = 0; i < 2000; ++i) {
    const Eigen::VectorXd x = rng.uniform_in(Eigen::VectorXd::Constant(2, -0.2), Eigen::VectorXd::Constant(2, 1.2));
    EXPECT_EQ(nearest_in_set(set, x).distance == 0.0, membership(set, x));
  }
}

TEST(Nearest, MatchesGridOracle) {
  Rng rng(10);
  const SearchBox parent{vec({0.0, 0.0}), 1.0};
  const auto set = sample_cubes(parent, 20, {1.0, 1, 0.15, 0}, rng);
  const int n = 1000;
  const double h = 2.0 / (n - 1);
  for (int q = 0; q < 3; ++q) {
    const Eigen::VectorXd xs = rng.uniform_in(Eigen::VectorXd::Constant(2, -1.5), Eigen::VectorXd::Constant(2, 1.5));
    double best = INFINITY;
    Eigen::VectorXd p(2);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        p << -1.0 + i * h, -1.0 + j * h;
        if (membership(set, p)) best = std::min(best, (p - xs).norm());
      }
    }
    const double got = nearest_in_set(set, xs).distance;
    EXPECT_LE(got, best + 1e-12);
    EXPECT_GE(got, best - h * std::sqrt(2.0));
  }
}

TEST(DistanceBound, UsesSqrtPiConstant) {
  const double b = nearest_distance_bound(1.0, 2, -1.0, 1.0, 0.2, 1.0);
  EXPECT_NEAR(b, 2.0 / std::sqrt(M_PI) * 1.0 * std::sqrt(std::log(5.0)) * 2.0, 1e-14);
  EXPECT_THROW(nearest_distance_bound(1.0, 2, -1.0, 1.0, 1.0, 1.0), std::invalid_argument);
}
