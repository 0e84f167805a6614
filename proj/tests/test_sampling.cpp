#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "winvex/sampling.hpp"

using namespace winvex;

TEST(DeltaGrid, ClosedThreePoints) {
  CheckConfig c;
  c.delta_points = 3;
  auto g = delta_grid(c, DeltaInterval::closed);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 0.5);
  EXPECT_EQ(g[2], 1.0);
}

TEST(DeltaGrid, OpenWithMargin) {
  CheckConfig c;
  c.delta_points = 3;
  c.delta_margin = 0.1;
  auto g = delta_grid(c, DeltaInterval::open);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_NEAR(g[0], 0.1, 1e-15);
  EXPECT_EQ(g[1], 0.5);
  EXPECT_NEAR(g[2], 0.9, 1e-15);
}

TEST(DeltaGrid, SymmetricAndSorted) {
  CheckConfig c;
  for (auto iv : {DeltaInterval::closed, DeltaInterval::open}) {
    auto g = delta_grid(c, iv);
    ASSERT_EQ(g.size(), 33u);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) EXPECT_LT(g[i], g[i + 1]);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i] + g[g.size() - 1 - i], 1.0, 1e-15);
  }
}

TEST(Domain, HalfLineMembership) {
  auto d = Domain::half_line({0.0}, {{0.0, 100.0}});
  const double in[] = {2.0}, out[] = {-2.0};
  EXPECT_TRUE(contains(d, in, 1e-9));
  EXPECT_FALSE(contains(d, out, 1e-9));
  EXPECT_DOUBLE_EQ(d.distance(out), 2.0);
}

TEST(Domain, BoxToleratesTinyOvershoot) {
  auto d = Domain::box({{0.0, 1.0}});
  const double edge[] = {1.0 + 1e-12}, far[] = {1.1};
  EXPECT_TRUE(contains(d, edge, 1e-9));
  EXPECT_FALSE(contains(d, far, 1e-9));
}

TEST(Domain, FullSpaceContainsEverythingFinite) {
  auto d = Domain::full_space({{-1.0, 1.0}});
  const double p[] = {1e300};
  EXPECT_TRUE(contains(d, p, 0.0));
  const double q[] = {std::numeric_limits<double>::quiet_NaN()};
  EXPECT_FALSE(contains(d, q, 1e-9));
}

TEST(Domain, ChebyshevDistance) {
  auto d = Domain::box({{0.0, 1.0}, {0.0, 1.0}});
  const double p[] = {-0.5, 3.0};
  EXPECT_DOUBLE_EQ(d.distance(p), 2.0);
}

TEST(Domain, RejectsInvalidBoxes) {
  EXPECT_THROW(Domain::box({{1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(Domain::full_space({{0.0, std::numeric_limits<double>::infinity()}}),
               std::invalid_argument);
  EXPECT_THROW(Domain::half_line({0.0}, {{-1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Domain::box({}), std::invalid_argument);
}

TEST(Domain, CenterAndCorners) {
  auto d = Domain::full_space({{-10.0, 10.0}, {0.0, 4.0}});
  EXPECT_EQ(d.center(), (Point{0.0, 2.0}));
  EXPECT_EQ(d.corner(0), (Point{-10.0, 0.0}));
  EXPECT_EQ(d.corner(3), (Point{10.0, 4.0}));
}

TEST(CheckConfig, Validation) {
  CheckConfig c;
  EXPECT_NO_THROW(c.validate());
  c.pair_samples = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.delta_margin = 0.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.tol_weak = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Sampling, CountAndBoxMembership) {
  auto d = Domain::full_space({{-3.0, 5.0}, {1.0, 2.0}});
  CheckConfig c;
  c.pair_samples = 500;
  auto pairs = sample_pairs(d, c);
  ASSERT_EQ(pairs.size(), 500u);
  for (const auto& p : pairs) {
    EXPECT_TRUE(d.in_sampling_box(p.z1, 0.0));
    EXPECT_TRUE(d.in_sampling_box(p.z2, 0.0));
  }
}

TEST(Sampling, StructuredStratumFirst) {
  auto d = Domain::full_space({{-10.0, 10.0}});
  CheckConfig c;
  auto pairs = sample_pairs(d, c);
  EXPECT_EQ(pairs[0].z1, (Point{-10.0}));
  EXPECT_EQ(pairs[0].z2, (Point{-10.0}));
  std::set<std::pair<double, double>> seen;
  for (std::size_t i = 0; i < 9; ++i) seen.insert({pairs[i].z1[0], pairs[i].z2[0]});
  EXPECT_TRUE(seen.count({0.0, 0.0}));
  EXPECT_TRUE(seen.count({-10.0, 10.0}));
  EXPECT_TRUE(seen.count({10.0, 0.0}));
}

TEST(Sampling, DeterministicPerSeed) {
  auto d = Domain::full_space({{0.0, 1.0}});
  CheckConfig a, b;
  a.seed = b.seed = 42;
  EXPECT_EQ(sample_pairs(d, a)[100].z1, sample_pairs(d, b)[100].z1);
  b.seed = 43;
  EXPECT_NE(sample_pairs(d, a)[100].z1, sample_pairs(d, b)[100].z1);
}

TEST(Sampling, PrefixStableWhenCountGrows) {
  auto d = Domain::full_space({{0.0, 1.0}, {0.0, 1.0}});
  CheckConfig small, large;
  small.pair_samples = 100;
  large.pair_samples = 1000;
  auto s = sample_pairs(d, small), l = sample_pairs(d, large);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].z1, l[i].z1);
    EXPECT_EQ(s[i].z2, l[i].z2);
  }
}

TEST(CounterUniform, RangeAndRoughUniformity) {
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = counter_uniform(1, 0, static_cast<std::uint64_t>(i));
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}
