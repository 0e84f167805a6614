#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "winvex/catalog.hpp"
#include "winvex/invexity.hpp"

using namespace winvex;

namespace {

struct Maps {
  FunctionDef h, eta, w;
  Domain domain;
};

Maps maps_of(const std::string& id) {
  const auto& f = find_fixture(id);
  return {f.h_def() ? *f.h_def() : expr::parse("0", 1), f.eta_def(), f.w_def(), f.domain};
}

Maps with_h(Maps m, const std::string& h) {
  m.h = expr::parse(h, 1);
  return m;
}

bool refuted(const Maps& m, Family f, Mode mode, CheckConfig cfg = {}) {
  return check_class({f, mode}, m.h, m.eta, m.w, m.domain, cfg).refuted();
}

oracle::Kind kind_of(Family f) {
  switch (f) {
    case Family::set_invex: return oracle::Kind::set;
    case Family::preinvex: return oracle::Kind::preinvex;
    case Family::strict_preinvex: return oracle::Kind::strict_preinvex;
    case Family::prequasi: return oracle::Kind::prequasi;
    case Family::strict_prequasi: return oracle::Kind::strict_prequasi;
    default: return oracle::Kind::semistrict_prequasi;
  }
}

}  // namespace

TEST(ClassId, NamesRoundTrip) {
  for (Mode m : {Mode::w, Mode::classical})
    for (Family f : function_families()) {
      ClassId c{f, m};
      auto back = parse_class_id(to_string(c));
      ASSERT_TRUE(back.has_value()) << to_string(c);
      EXPECT_TRUE(*back == c);
    }
  EXPECT_TRUE(parse_class_id("w-pre-pseudo").has_value());
  EXPECT_FALSE(parse_class_id("classical-pre-pseudo").has_value());
  EXPECT_FALSE(parse_class_id("w-convex").has_value());
}

TEST(SetInvex, HalfLineExample) {
  auto m = maps_of("set-halfline");
  CheckConfig cfg;
  auto v = check_set_invex(m.domain, m.eta, m.w, cfg, Mode::w);
  EXPECT_FALSE(v.refuted());
  EXPECT_GE(v.samples_checked, 10000u);

  auto c = check_set_invex(m.domain, m.eta, m.w, cfg, Mode::classical);
  ASSERT_TRUE(c.refuted());
  ASSERT_TRUE(c.counterexample);
  EXPECT_LT(c.counterexample->shrunk.generated_point[0], 0.0);
}

TEST(SetInvex, ProbeAtUnitDelta) {
  auto m = maps_of("set-halfline");
  auto w = recompute_witness({Family::set_invex, Mode::classical}, nullptr, m.eta, m.w, m.domain,
                             {}, {1.0}, {0.0}, 1.0);
  ASSERT_TRUE(w);
  EXPECT_DOUBLE_EQ(w->generated_point[0], -2.0);
  EXPECT_DOUBLE_EQ(w->violation, 2.0);
  EXPECT_FALSE(recompute_witness({Family::set_invex, Mode::w}, nullptr, m.eta, m.w, m.domain, {},
                                 {1.0}, {0.0}, 1.0));
}

TEST(Probe, GeneratedPointsOfWorkedExamples) {
  auto a = maps_of("preinvex-minus7");
  detail::PathEvaluator ev{&a.h, a.eta, a.w, true};
  auto s = ev.prepare({2.0}, {3.0});
  auto g = detail::PathEvaluator::generated(s, 0.5);
  EXPECT_DOUBLE_EQ(g[0], -4.0);
  EXPECT_DOUBLE_EQ(a.h.scalar(g), -4.0);
  EXPECT_DOUBLE_EQ(detail::chord(s.h1, s.h2, 0.5), 2.5);

  auto q = maps_of("quintic");
  auto wq = recompute_witness({Family::preinvex, Mode::w}, &q.h, q.eta, q.w, q.domain, {},
                              {-2000.0}, {-1000.0}, 0.5);
  ASSERT_TRUE(wq);
  EXPECT_DOUBLE_EQ(wq->generated_point[0], -1506.0);
  const double expect = std::pow(-1506.0, 5) - 0.5 * (std::pow(-2000.0, 5) + std::pow(-1000.0, 5));
  EXPECT_NEAR(wq->violation, expect, 1e-12 * std::fabs(expect));

  auto p = maps_of("piecewise-11");
  detail::PathEvaluator evp{&p.h, p.eta, p.w, true};
  auto sp = evp.prepare({3.0}, {5.0});
  auto gp = detail::PathEvaluator::generated(sp, 0.5);
  EXPECT_DOUBLE_EQ(gp[0], 154.0);
  EXPECT_DOUBLE_EQ(p.h.scalar(gp), -11.0);
}

TEST(Classes, MarginOfMinus7IsDeltaMinusSeven) {
  auto m = maps_of("preinvex-minus7");
  detail::PathEvaluator ev{&m.h, m.eta, m.w, true};
  CheckConfig cfg;
  cfg.pair_samples = 300;
  for (const auto& pr : sample_pairs(m.domain, cfg)) {
    auto s = ev.prepare(pr.z1, pr.z2);
    for (double d : delta_grid(cfg, DeltaInterval::closed)) {
      const double lhs = m.h.scalar(detail::PathEvaluator::generated(s, d));
      EXPECT_NEAR(lhs - (d * s.h1 + (1 - d) * s.h2), d - 7.0, 1e-9);
    }
  }
}

TEST(Classes, Plus6IsOffByExactlySix) {
  auto m = maps_of("shifted-plus6");
  auto v = check_class({Family::preinvex, Mode::w}, m.h, m.eta, m.w, m.domain, {});
  ASSERT_TRUE(v.refuted());
  EXPECT_NEAR(v.counterexample->shrunk.violation, 6.0, 1e-9);
  EXPECT_NEAR(v.counterexample->original.violation, 6.0, 1e-9);
}

TEST(Classes, ConstantFunction) {
  auto m = with_h(maps_of("preinvex-minus7"), "4");
  EXPECT_FALSE(refuted(m, Family::preinvex, Mode::w));
  EXPECT_FALSE(refuted(m, Family::prequasi, Mode::w));
  EXPECT_TRUE(refuted(m, Family::strict_preinvex, Mode::w));
  EXPECT_TRUE(refuted(m, Family::strict_prequasi, Mode::w));
  auto semi = check_class({Family::semistrict_prequasi, Mode::w}, m.h, m.eta, m.w, m.domain, {});
  EXPECT_FALSE(semi.refuted());
  EXPECT_TRUE(semi.vacuous);
  auto ps = check_pre_pseudo(m.h, m.eta, m.w, m.domain, {});
  EXPECT_FALSE(ps.verdict.refuted());
  EXPECT_TRUE(ps.verdict.vacuous);
  EXPECT_EQ(ps.report.qualifying_pairs, 0u);
}

TEST(Classes, NonFiniteSamplesAreSkipped) {
  auto m = with_h(maps_of("preinvex-minus7"), "ln(z1)");
  auto v = check_class({Family::prequasi, Mode::w}, m.h, m.eta, m.w, m.domain, {});
  EXPECT_GT(v.samples_skipped, 0u);
  EXPECT_TRUE(v.low_confidence);
}

TEST(Classes, RejectsMismatchedMaps) {
  auto m = maps_of("preinvex-minus7");
  auto bad_eta = expr::parse("z1", 1);
  EXPECT_THROW(check_class({Family::preinvex, Mode::w}, m.h, bad_eta, m.w, m.domain, {}),
               std::invalid_argument);
  auto two = expr::parse("z1 + z2", 2);
  EXPECT_THROW(check_class({Family::preinvex, Mode::w}, two, m.eta, m.w, m.domain, {}),
               std::invalid_argument);
}

TEST(Shrink, NeverWeakensTheViolation) {
  for (const char* id : {"shifted-plus6", "quintic"}) {
    auto m = maps_of(id);
    auto v = check_class({Family::preinvex, Mode::w}, m.h, m.eta, m.w, m.domain, {});
    ASSERT_TRUE(v.refuted()) << id;
    EXPECT_GE(v.counterexample->shrunk.violation, v.counterexample->original.violation - 1e-9);
    auto again = recompute_witness({Family::preinvex, Mode::w}, &m.h, m.eta, m.w, m.domain, {},
                                   v.counterexample->shrunk.z1, v.counterexample->shrunk.z2,
                                   v.counterexample->shrunk.delta);
    ASSERT_TRUE(again);
    EXPECT_DOUBLE_EQ(again->violation, v.counterexample->shrunk.violation);
  }
}

TEST(Pseudo, RequiredBDependsOnBase) {
  auto m = maps_of("preinvex-minus7");
  CheckConfig lifted;
  lifted.eta_mode = EtaMode::w_lifted;
  const double b = required_b(m.h, m.eta, m.w, {0.0}, {0.5}, lifted);
  const double ob = oracle::required_b(oracle::minus7(), 0.0, 0.5, true);
  EXPECT_NEAR(b, ob, 1e-9 * std::max(1.0, std::fabs(ob)));
  EXPECT_GT(b, 0.0);
  const double a = required_b(m.h, m.eta, m.w, {0.0}, {0.5}, CheckConfig{});
  EXPECT_NEAR(a, oracle::required_b(oracle::minus7(), 0.0, 0.5, false), 1e-9);
  EXPECT_LT(a, 0.0);
  EXPECT_THROW(required_b(m.h, m.eta, m.w, {0.5}, {0.0}, lifted), std::invalid_argument);
}

TEST(Pseudo, ModesDisagreeOnMinus7) {
  auto m = maps_of("preinvex-minus7");
  CheckConfig lifted;
  lifted.eta_mode = EtaMode::w_lifted;
  EXPECT_FALSE(check_pre_pseudo(m.h, m.eta, m.w, m.domain, lifted).verdict.refuted());
  EXPECT_TRUE(check_pre_pseudo(m.h, m.eta, m.w, m.domain, CheckConfig{}).verdict.refuted());
  EXPECT_FALSE(oracle::pseudo_refutes(oracle::minus7(), true, 61));
  EXPECT_TRUE(oracle::pseudo_refutes(oracle::minus7(), false, 61));
}

// Every refutation must be reproducible by the independent grid oracle
// (on its own grid); consistent verdicts are compared the same way.
struct OracleCase {
  const char* id;
  oracle::Instance (*make)();
};

class OracleAgreement : public ::testing::TestWithParam<OracleCase> {};

TEST_P(OracleAgreement, FunctionClassesMatchGridOracle) {
  const auto& c = GetParam();
  auto m = maps_of(c.id);
  const auto inst = c.make();
  for (Mode mode : {Mode::w, Mode::classical}) {
    const auto in = mode == Mode::w ? inst : oracle::classical(inst);
    for (Family f : function_families()) {
      const bool lib = refuted(m, f, mode);
      const bool orc = oracle::refutes(in, kind_of(f));
      EXPECT_EQ(lib, orc) << c.id << " " << to_string(ClassId{f, mode});
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Fixtures, OracleAgreement,
    ::testing::Values(OracleCase{"preinvex-minus7", [] { return oracle::minus7(); }},
                      OracleCase{"shifted-plus6", [] { return oracle::plus6(); }},
                      OracleCase{"quintic", oracle::quintic},
                      OracleCase{"piecewise-11", oracle::piecewise11}),
    [](const auto& info) {
      std::string s = info.param.id;
      for (char& ch : s)
        if (ch == '-') ch = '_';
      return s;
    });

TEST(OracleAgreement, SetChecks) {
  auto m = maps_of("set-halfline");
  EXPECT_FALSE(oracle::refutes(oracle::set_halfline(), oracle::Kind::set));
  EXPECT_TRUE(oracle::refutes(oracle::classical(oracle::set_halfline()), oracle::Kind::set));
  EXPECT_FALSE(check_set_invex(m.domain, m.eta, m.w, {}, Mode::w).refuted());
  EXPECT_TRUE(check_set_invex(m.domain, m.eta, m.w, {}, Mode::classical).refuted());
}

TEST(Property, KShiftLeavesVerdictsUnchanged) {
  for (double k : {-5.0, 0.0, 7.0}) {
    for (const char* id : {"preinvex-minus7", "shifted-plus6"}) {
      auto base = maps_of(id);
      auto shifted = with_h(base, "z1 + " + std::to_string(k));
      if (k < 0) shifted = with_h(base, "z1 - " + std::to_string(-k));
      for (Family f : function_families())
        EXPECT_EQ(refuted(base, f, Mode::w), refuted(shifted, f, Mode::w))
            << id << " k=" << k << " " << family_name(f);
    }
  }
}

TEST(Property, IdentityWMatchesClassicalMode) {
  gen::ExprGen g(99, 1);
  auto d = Domain::full_space({{-3.0, 3.0}});
  CheckConfig cfg;
  cfg.pair_samples = 300;
  const auto id = expr::identity_map(1);
  for (int i = 0; i < 20; ++i) {
    FunctionDef h("h", 1, expr::Layout::single, {g.tame(3)});
    gen::ExprGen ge(1000 + static_cast<std::uint64_t>(i), 1, true);
    FunctionDef eta("eta", 2, expr::Layout::two_point, {ge.tame(2)});
    for (Family f : function_families()) {
      auto a = check_class({f, Mode::w}, h, eta, id, d, cfg);
      auto b = check_class({f, Mode::classical}, h, eta, id, d, cfg);
      EXPECT_EQ(a.outcome, b.outcome);
      EXPECT_EQ(a.samples_checked, b.samples_checked);
    }
  }
}

TEST(Property, DeterministicVerdicts) {
  auto m = maps_of("quintic");
  CheckConfig cfg;
  cfg.seed = 11;
  auto a = check_class({Family::preinvex, Mode::w}, m.h, m.eta, m.w, m.domain, cfg);
  auto b = check_class({Family::preinvex, Mode::w}, m.h, m.eta, m.w, m.domain, cfg);
  ASSERT_TRUE(a.counterexample && b.counterexample);
  EXPECT_EQ(a.counterexample->shrunk.z1, b.counterexample->shrunk.z1);
  EXPECT_EQ(a.counterexample->shrunk.violation, b.counterexample->shrunk.violation);
}

TEST(Classify, LatticeHoldsOnFixtures) {
  for (const char* id : {"preinvex-minus7", "shifted-plus6", "quintic", "piecewise-11"}) {
    auto m = maps_of(id);
    auto rep = classify(m.h, m.eta, m.w, m.domain, {});
    EXPECT_FALSE(rep.internal_error) << id;
    for (const auto& e : rep.lattice) EXPECT_EQ(e.violations, 0u) << id;
    EXPECT_EQ(rep.verdicts.size(), 12u);
    ASSERT_NE(rep.find({Family::preinvex, Mode::w}), nullptr);
  }
}

TEST(Classify, AgreesWithSingleChecks) {
  auto m = maps_of("piecewise-11");
  auto rep = classify(m.h, m.eta, m.w, m.domain, {});
  for (Mode mode : {Mode::w, Mode::classical})
    for (Family f : function_families())
      EXPECT_EQ(rep.find({f, mode})->outcome, (refuted(m, f, mode) ? Outcome::refuted
                                                                    : Outcome::consistent_on_samples));
}
