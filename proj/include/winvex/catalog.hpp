#pragma once

// Built-in worked examples with independently derived expected verdicts.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "winvex/optimize.hpp"

namespace winvex {

struct Expectation {
  ClassId cls;
  Outcome outcome;
  std::optional<EtaMode> eta_mode;  // pseudo expectations only hold in one mode
};

struct ProblemText {
  std::string objective;
  std::vector<std::string> constraints;
  std::vector<Interval> box;
};

struct Fixture {
  std::string id;
  int dimension = 1;
  std::optional<std::string> h;
  std::string eta;
  std::string w;
  Domain domain;
  CheckConfig config;
  std::vector<std::string> claims;
  std::vector<Expectation> expected;
  std::optional<std::string> discrepancy_note;
  std::optional<ProblemText> problem;

  FunctionDef eta_def() const { return expr::parse(eta, 2 * dimension, expr::Layout::two_point, "eta"); }
  FunctionDef w_def() const { return expr::parse(w, dimension, expr::Layout::single, "w"); }
  std::optional<FunctionDef> h_def() const {
    if (!h) return std::nullopt;
    return expr::parse(*h, dimension, expr::Layout::single, "h");
  }
};

namespace detail {

inline Fixture fixture(std::string id, std::optional<std::string> h, std::string eta, std::string w,
                       Domain domain) {
  Fixture f{std::move(id), 1, std::move(h), std::move(eta), std::move(w), std::move(domain),
            CheckConfig{}, {}, {}, std::nullopt, std::nullopt};
  return f;
}

inline Expectation expect(Family f, Mode m, Outcome o) { return {{f, m}, o, std::nullopt}; }

}  // namespace detail

inline const std::vector<Fixture>& list_fixtures() {
  using detail::expect;
  constexpr auto C = Outcome::consistent_on_samples;
  constexpr auto R = Outcome::refuted;
  constexpr auto W = Mode::w;
  constexpr auto K = Mode::classical;

  static const std::vector<Fixture> fixtures = [&] {
    std::vector<Fixture> v;

    Fixture set = detail::fixture("set-halfline", std::nullopt, "z1 * (y1 - 2)", "y1 + 2",
                          Domain::half_line({0.0}, {{0.0, 100.0}}));
    set.claims = {"X = [0, inf) is w-invex for eta and w", "X is not invex for eta"};
    set.expected = {expect(Family::set_invex, W, C), expect(Family::set_invex, K, R)};
    v.push_back(set);

    Fixture set_id = set;
    set_id.id = "set-halfline-classical";
    set_id.w = "y1";
    set_id.claims = {"classical control: w is the identity"};
    set_id.expected = {expect(Family::set_invex, W, R), expect(Family::set_invex, K, R)};
    v.push_back(set_id);

    Fixture m7 = detail::fixture("preinvex-minus7", "z1", "z1 - y1 - 6", "y1 - 7",
                         Domain::full_space({{-10.0, 10.0}}));
    m7.config.eta_mode = EtaMode::w_lifted;
    m7.claims = {"h is w-preinvex for eta and w"};
    for (Mode m : {W, K}) {
      m7.expected.push_back(expect(Family::set_invex, m, C));
      for (Family f : function_families()) m7.expected.push_back(expect(f, m, C));
    }
    m7.expected.push_back({{Family::pre_pseudo, W}, C, EtaMode::w_lifted});
    m7.expected.push_back({{Family::pre_pseudo, W}, R, EtaMode::as_written});
    m7.problem = ProblemText{"z1", {"1 - z1"}, {{-10.0, 10.0}}};
    v.push_back(m7);

    Fixture p6 = detail::fixture("shifted-plus6", "z1", "z1 - y1 + 6", "y1 + 6",
                         Domain::full_space({{-10.0, 10.0}}));
    p6.claims = {"h is w-preinvex, not w-strictly preinvex, not preinvex",
                 "h is w-preinvex, not preinvex"};
    p6.expected = {expect(Family::preinvex, W, R),        expect(Family::strict_preinvex, W, R),
                   expect(Family::prequasi, W, R),        expect(Family::strict_prequasi, W, R),
                   expect(Family::semistrict_prequasi, W, R), expect(Family::preinvex, K, R),
                   expect(Family::strict_preinvex, K, R)};
    p6.discrepancy_note =
        "claimed w-preinvex, but h(w(z2) + delta*eta(z1, w(z2))) - (delta*h(z1) + (1-delta)*h(z2)) "
        "= 6 for every z1, z2, delta; refuted at delta = 0";
    v.push_back(p6);

    Fixture q = detail::fixture("quintic", "z1^5", "z1 - y1 - 6", "y1 - 6",
                        Domain::full_space({{-4000.0, 4000.0}}));
    q.claims = {"h is w-prequasi invex, not w-preinvex"};
    q.expected = {expect(Family::prequasi, W, C),        expect(Family::strict_prequasi, W, C),
                  expect(Family::semistrict_prequasi, W, C), expect(Family::preinvex, W, R),
                  expect(Family::strict_preinvex, W, R), expect(Family::preinvex, K, R),
                  expect(Family::prequasi, K, C)};
    q.problem = ProblemText{"z1^5", {"-z1"}, {{0.0, 2.0}}};
    v.push_back(q);

    Fixture pw = detail::fixture("piecewise-11", "piecewise(z1 < 11, 11, -11)", "z1^2 + y1^2 + 11",
                                 "y1 + 11", Domain::half_line({0.0}, {{0.0, 30.0}}));
    pw.claims = {"h is w-prequasi invex"};
    pw.expected = {expect(Family::set_invex, W, C),       expect(Family::preinvex, W, C),
                   expect(Family::prequasi, W, C),        expect(Family::semistrict_prequasi, W, C),
                   expect(Family::strict_preinvex, W, R), expect(Family::strict_prequasi, W, R),
                   expect(Family::set_invex, K, C),       expect(Family::preinvex, K, R),
                   expect(Family::prequasi, K, C)};
    pw.problem = ProblemText{"piecewise(z1 < 11, 11, -11)", {}, {{0.0, 30.0}}};
    v.push_back(pw);
    return v;
  }();
  return fixtures;
}

inline const Fixture& find_fixture(std::string_view id) {
  for (const auto& f : list_fixtures())
    if (f.id == id) return f;
  throw std::invalid_argument("unknown fixture: " + std::string(id));
}

struct FixtureOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> pair_samples;
  std::optional<int> delta_points;
  std::optional<EtaMode> eta_mode;
  std::optional<std::vector<Interval>> box;
};

struct ExpectationResult {
  Expectation expectation;
  std::optional<Outcome> observed;  // empty when not applicable in this run
  bool matches = true;
};

struct FixtureReport {
  std::string id;
  CheckConfig config;
  std::vector<Interval> sampling_box;
  std::vector<std::string> claims;
  std::optional<std::string> discrepancy_note;
  std::vector<Verdict> verdicts;
  std::optional<PseudoResult> pseudo;
  bool lattice_internal_error = false;
  std::vector<ExpectationResult> expectations;
  std::vector<TheoremReport> theorems;
  std::optional<OptimalityAnalysis> optimality;
  std::size_t theorem_counterexamples = 0;
  bool matches = true;  // expectations reproduced and lattice consistent
};

inline CheckConfig apply(const CheckConfig& base, const FixtureOverrides& o) {
  CheckConfig c = base;
  if (o.seed) c.seed = *o.seed;
  if (o.pair_samples) c.pair_samples = *o.pair_samples;
  if (o.delta_points) c.delta_points = *o.delta_points;
  if (o.eta_mode) c.eta_mode = *o.eta_mode;
  return c;
}

inline OptProblem make_problem(const Fixture& f) {
  if (!f.problem) throw std::invalid_argument("fixture has no pinned problem");
  OptProblem p{expr::parse(f.problem->objective, f.dimension, expr::Layout::single, "h"),
               {},
               f.eta_def(),
               f.w_def(),
               Domain::box(f.problem->box)};
  int i = 1;
  for (const auto& g : f.problem->constraints)
    p.constraints.push_back(
        expr::parse(g, f.dimension, expr::Layout::single, "g" + std::to_string(i++)));
  return p;
}

/// Classify (or set-check), theorem checks, and the pinned problem, compared
/// against the fixture's expectations.
inline FixtureReport run_fixture(const Fixture& f, const FixtureOverrides& overrides = {}) {
  FixtureReport r;
  r.id = f.id;
  r.config = apply(f.config, overrides);
  const Domain domain = overrides.box ? f.domain.with_sampling_box(*overrides.box) : f.domain;
  r.sampling_box.assign(domain.sampling_box().begin(), domain.sampling_box().end());
  r.claims = f.claims;
  r.discrepancy_note = f.discrepancy_note;
  const auto eta = f.eta_def();
  const auto w = f.w_def();
  const auto h = f.h_def();

  if (h) {
    auto cr = classify(*h, eta, w, domain, r.config);
    r.verdicts = std::move(cr.verdicts);
    r.pseudo = std::move(cr.pseudo);
    r.lattice_internal_error = cr.internal_error;
  } else {
    r.verdicts.push_back(check_set_invex(domain, eta, w, r.config, Mode::w));
    r.verdicts.push_back(check_set_invex(domain, eta, w, r.config, Mode::classical));
  }

  for (const auto& e : f.expected) {
    ExpectationResult er{e, std::nullopt, true};
    if (e.cls.family == Family::pre_pseudo) {
      if (r.pseudo && (!e.eta_mode || *e.eta_mode == r.config.eta_mode))
        er.observed = r.pseudo->verdict.outcome;
    } else {
      for (const auto& v : r.verdicts)
        if (v.cls == e.cls) er.observed = v.outcome;
    }
    er.matches = !er.observed || *er.observed == e.outcome;
    r.matches &= er.matches;
    r.expectations.push_back(er);
  }
  r.matches &= !r.lattice_internal_error;

  if (h) {
    r.theorems.push_back(epigraph_check(*h, eta, w, domain, r.config));
    r.theorems.push_back(level_set_check(*h, eta, w, domain, h->scalar(domain.center()), r.config));
    if (f.dimension <= 3) r.theorems.push_back(argmin_set_check(*h, eta, w, domain, r.config));
    r.theorems.push_back(pseudo_implication_check(*h, eta, w, domain, r.config));
    r.theorems.push_back(check_scale(*h, 3.0, eta, w, domain, r.config));
    r.theorems.push_back(check_sum(*h, *h, eta, w, domain, r.config));
  }
  if (f.problem) {
    SolverConfig sc;
    sc.seed = r.config.seed;
    r.optimality = analyze_optimality(make_problem(f), r.config, sc);
  }
  for (const auto& t : r.theorems)
    r.theorem_counterexamples += t.status == TheoremStatus::counterexample_to_implication;
  if (r.optimality)
    r.theorem_counterexamples +=
        r.optimality->report.status == TheoremStatus::counterexample_to_implication;
  return r;
}

inline FixtureReport run_fixture(std::string_view id, const FixtureOverrides& overrides = {}) {
  return run_fixture(find_fixture(id), overrides);
}

}  // namespace winvex
