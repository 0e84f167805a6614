#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "winvex/catalog.hpp"
#include "winvex/optimize.hpp"

using namespace winvex;

namespace {

OptProblem problem(const std::string& h, std::vector<std::string> gs, Interval box,
                   const std::string& fixture = "preinvex-minus7") {
  const auto& f = find_fixture(fixture);
  OptProblem p{expr::parse(h, 1), {}, f.eta_def(), f.w_def(), Domain::box({box})};
  for (const auto& g : gs) p.constraints.push_back(expr::parse(g, 1));
  return p;
}

}  // namespace

TEST(BruteForce, LinearWithLowerConstraint) {
  auto p = problem("z1 + 5", {"1 - z1"}, {-10, 10});
  auto r = brute_force_min(p);
  EXPECT_NEAR(r.best_value, 6.0, 1e-12);
  EXPECT_NEAR(r.best_point[0], 1.0, 1e-12);
  EXPECT_EQ(r.cluster.size(), 1u);
  const auto o = oracle::grid_min([](double z) { return z + 5; }, [](double z) { return 1 - z; }, -10,
                                  10, 4001);
  EXPECT_DOUBLE_EQ(r.best_value, o.second);
}

TEST(BruteForce, InfeasibleProblem) {
  auto p = problem("z1", {"z1^2 + 1"}, {-10, 10});
  auto r = brute_force_min(p);
  EXPECT_EQ(r.status, SolveStatus::infeasible);
  EXPECT_GE(r.residual, 1.0);
}

TEST(BruteForce, FlatObjectiveClustersEverything) {
  auto p = problem("3", {}, {0, 1});
  auto r = brute_force_min(p, 101);
  EXPECT_EQ(r.cluster.size(), 101u);
  EXPECT_NEAR(r.spread, 1.0, 1e-12);
}

TEST(BruteForce, RejectsHighDimension) {
  const auto eta = expr::parse("z1-y1; z2-y2; z3-y3; z4-y4", 8, expr::Layout::two_point);
  OptProblem p{expr::parse("z1", 4), {}, eta, expr::identity_map(4),
               Domain::box({{0, 1}, {0, 1}, {0, 1}, {0, 1}})};
  EXPECT_THROW(brute_force_min(p), std::invalid_argument);
}

TEST(Residual, MaxOfPositiveParts) {
  auto p = problem("z1", {"1 - z1", "z1 - 3"}, {-10, 10});
  EXPECT_DOUBLE_EQ(residual(p, {0.0}), 1.0);
  EXPECT_DOUBLE_EQ(residual(p, {2.0}), 0.0);
  EXPECT_DOUBLE_EQ(residual(p, {5.0}), 2.0);
  auto q = problem("z1", {"ln(z1)"}, {-10, 10});
  EXPECT_TRUE(std::isinf(residual(q, {-1.0})));
}

TEST(LocalDescent, ConvergesToConstrainedMinimum) {
  auto p = problem("z1", {"6 - z1"}, {-10, 10});
  auto r = local_descent(p, {5.0}, SolverConfig{});
  EXPECT_NEAR(r.best_value, 6.0, 1e-6);
  EXPECT_LE(r.residual, 1e-9);
}

TEST(LocalDescent, StartAtMinimumStays) {
  for (auto [h, start] : {std::pair{"(z1 - 2)^2", 2.0}, std::pair{"z1", -10.0}}) {
    auto p = problem(h, {}, {-10, 10});
    auto r = local_descent(p, {start}, SolverConfig{});
    EXPECT_EQ(r.best_point[0], start) << h;
    EXPECT_EQ(r.endpoints.at(0).accepted_moves, 0u) << h;
    EXPECT_TRUE(r.trace.empty()) << h;
  }
}

TEST(LocalDescent, ActiveConstraintMovesStayWithinFeasibilityTolerance) {
  SolverConfig cfg;
  auto p = problem("z1 + 5", {"1 - z1"}, {-10, 10});
  auto r = local_descent(p, {1.0}, cfg);
  EXPECT_LE(r.residual, cfg.eps_feas);
  EXPECT_GE(r.best_point[0], 1.0 - cfg.eps_feas);
  EXPECT_NEAR(r.best_value, 6.0, cfg.eps_feas);
}

TEST(LocalDescent, TraceIsStrictlyDecreasing) {
  SolverConfig cfg;
  for (const char* h : {"z1 + 5", "(z1 - 2)^2", "abs(z1 - 3) + z1^2 / 10"}) {
    auto p = problem(h, {}, {-10, 10});
    for (int i = 0; i < 4; ++i) {
      auto r = local_descent(p, multistart_start(p, cfg, i), cfg, static_cast<std::uint64_t>(i));
      for (std::size_t k = 1; k < r.trace.size(); ++k)
        EXPECT_LE(r.trace[k], r.trace[k - 1] - cfg.eps_decrease) << h;
    }
  }
}

TEST(LocalDescent, StaysInsideSearchBox) {
  auto p = problem("z1", {}, {-10, 10});
  auto r = local_descent(p, {9.0}, SolverConfig{});
  EXPECT_GE(r.best_point[0], -10.0);
  EXPECT_NEAR(r.best_value, -10.0, 1e-6);
}

TEST(Multistart, OneStartEqualsLocalDescent) {
  auto p = problem("(z1 - 2)^2", {}, {-10, 10});
  SolverConfig cfg;
  auto m = multistart_solve(p, cfg, 1);
  auto l = local_descent(p, multistart_start(p, cfg, 0), cfg, 0);
  EXPECT_EQ(m.best_point, l.best_point);
  EXPECT_EQ(m.best_value, l.best_value);
}

TEST(Multistart, ConstantObjectiveHasLargeSpread) {
  auto p = problem("1", {}, {-10, 10});
  auto r = multistart_solve(p, SolverConfig{}, 16);
  EXPECT_GT(r.spread, 1.0);
}

TEST(Multistart, Deterministic) {
  auto p = problem("z1^2 - z1", {"z1 - 4"}, {-10, 10});
  SolverConfig cfg;
  cfg.seed = 5;
  auto a = solve(p, cfg), b = solve(p, cfg);
  EXPECT_EQ(a.best_point, b.best_point);
  EXPECT_EQ(a.trace_lengths, b.trace_lengths);
}

TEST(Solve, MatchesOracleOnAcceptanceProblem) {
  auto p = problem("z1 + 5", {"1 - z1"}, {-10, 10});
  auto r = solve(p, SolverConfig{});
  ASSERT_TRUE(r.oracle_value);
  EXPECT_NEAR(r.best_value, 6.0, 1e-6);
  EXPECT_EQ(r.status, SolveStatus::optimal_vs_oracle);
}

TEST(Solve, InfeasibleStatus) {
  auto p = problem("z1", {"z1^2 + 1"}, {-10, 10});
  auto r = solve(p, SolverConfig{});
  EXPECT_EQ(r.status, SolveStatus::infeasible);
  EXPECT_FALSE(r.oracle_value);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.starts = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.oracle_points = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Optimality, SupportedOnAcceptanceProblem) {
  auto p = problem("z1 + 5", {"1 - z1"}, {-10, 10});
  auto a = analyze_optimality(p, {}, {});
  EXPECT_EQ(a.report.status, TheoremStatus::supported);
  ASSERT_EQ(a.report.parts.size(), 4u);
  EXPECT_LE(a.oracle.spread, 1e-3);
  EXPECT_NEAR(a.multistart.best_value, 6.0, 1e-6);
}

TEST(Optimality, PinnedProblemsAreSupported) {
  for (const auto& f : list_fixtures()) {
    if (!f.problem) continue;
    auto r = verify_optimality_theorems(make_problem(f));
    EXPECT_NE(r.status, TheoremStatus::counterexample_to_implication) << f.id;
  }
}

TEST(Optimality, FlatObjectiveIsNotUnique) {
  auto p = problem("1", {}, {-10, 10});
  auto a = analyze_optimality(p, {}, {});
  EXPECT_NE(a.report.status, TheoremStatus::counterexample_to_implication);
  bool saw_unique = false;
  for (const auto& part : a.report.parts)
    if (part.theorem == "unique-optimum") {
      saw_unique = true;
      EXPECT_FALSE(part.hypothesis("w-strict-preinvex"));
    }
  EXPECT_TRUE(saw_unique);
}
