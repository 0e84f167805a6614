#include <gtest/gtest.h>

#include <set>

#include "winvex/catalog.hpp"

using namespace winvex;

TEST(Catalog, FixtureIdsAreUnique) {
  std::set<std::string> ids;
  for (const auto& f : list_fixtures()) EXPECT_TRUE(ids.insert(f.id).second) << f.id;
  EXPECT_EQ(ids.size(), 6u);
  for (const char* id : {"set-halfline", "preinvex-minus7", "shifted-plus6", "quintic", "piecewise-11"})
    EXPECT_TRUE(ids.count(id)) << id;
}

TEST(Catalog, UnknownIdThrows) { EXPECT_THROW(find_fixture("nope"), std::invalid_argument); }

TEST(Catalog, ExpressionsParse) {
  for (const auto& f : list_fixtures()) {
    EXPECT_NO_THROW(f.eta_def()) << f.id;
    EXPECT_NO_THROW(f.w_def()) << f.id;
    EXPECT_NO_THROW(f.h_def()) << f.id;
    if (f.problem) {
      EXPECT_NO_THROW(make_problem(f).validate()) << f.id;
    }
  }
}

TEST(Catalog, EveryFixtureReproducesItsExpectations) {
  for (const auto& f : list_fixtures()) {
    auto r = run_fixture(f);
    EXPECT_TRUE(r.matches) << f.id;
    EXPECT_FALSE(r.lattice_internal_error) << f.id;
    for (const auto& e : r.expectations)
      EXPECT_TRUE(e.matches) << f.id << " " << to_string(e.expectation.cls);
  }
}

TEST(Catalog, Plus6CarriesDiscrepancyNote) {
  auto r = run_fixture("shifted-plus6");
  ASSERT_TRUE(r.discrepancy_note);
  EXPECT_NE(r.discrepancy_note->find("6"), std::string::npos);
  EXPECT_FALSE(r.claims.empty());
}

TEST(Catalog, PseudoExpectationsFollowEtaMode) {
  FixtureOverrides o;
  o.eta_mode = EtaMode::as_written;
  auto r = run_fixture("preinvex-minus7", o);
  ASSERT_TRUE(r.pseudo);
  EXPECT_TRUE(r.pseudo->verdict.refuted());
  EXPECT_TRUE(r.matches);

  auto lifted = run_fixture("preinvex-minus7");
  ASSERT_TRUE(lifted.pseudo);
  EXPECT_FALSE(lifted.pseudo->verdict.refuted());
}

TEST(Catalog, OverridesApply) {
  FixtureOverrides o;
  o.seed = 3;
  o.pair_samples = 50;
  o.box = std::vector<Interval>{{-1.0, 1.0}};
  auto r = run_fixture("preinvex-minus7", o);
  EXPECT_EQ(r.config.seed, 3u);
  EXPECT_EQ(r.config.pair_samples, 50);
  ASSERT_EQ(r.sampling_box.size(), 1u);
  EXPECT_EQ(r.sampling_box[0].lo, -1.0);
}

TEST(Catalog, SetFixtureHasNoTheorems) {
  auto r = run_fixture("set-halfline");
  EXPECT_TRUE(r.theorems.empty());
  EXPECT_FALSE(r.optimality);
  EXPECT_EQ(r.verdicts.size(), 2u);
}

TEST(Catalog, TheoremsRunOnFunctionFixtures) {
  auto r = run_fixture("preinvex-minus7");
  EXPECT_GE(r.theorems.size(), 6u);
  EXPECT_EQ(r.theorem_counterexamples, 0u);
  ASSERT_TRUE(r.optimality);
  EXPECT_EQ(r.optimality->report.status, TheoremStatus::supported);
}
