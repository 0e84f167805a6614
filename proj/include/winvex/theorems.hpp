#pragma once

// Numerical checks of the structural theorems on concrete (h, eta, w)
// instances, plus the closure constructors they involve.

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "winvex/invexity.hpp"

namespace winvex {

enum class TheoremStatus { supported, refuted_hypothesis, counterexample_to_implication };

inline const char* to_string(TheoremStatus s) {
  switch (s) {
    case TheoremStatus::supported: return "supported";
    case TheoremStatus::refuted_hypothesis: return "refuted-hypothesis";
    case TheoremStatus::counterexample_to_implication: return "counterexample-to-implication";
  }
  return "?";
}

struct HypothesisResult {
  std::string name;
  bool consistent = false;
};

struct SampleMismatch {
  Point z1;
  Point z2;
  double delta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct TheoremReport {
  std::string theorem;
  std::vector<HypothesisResult> hypotheses;
  std::string conclusion;
  bool conclusion_holds = true;
  std::size_t samples_evaluated = 0;
  std::size_t samples_agreeing = 0;
  std::vector<SampleMismatch> mismatches;  // first kMaxMismatches only
  std::size_t mismatch_count = 0;
  TheoremStatus status = TheoremStatus::supported;
  bool vacuous = false;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  std::vector<TheoremReport> parts;

  static constexpr std::size_t kMaxMismatches = 16;

  void add_mismatch(SampleMismatch m) {
    ++mismatch_count;
    if (mismatches.size() < kMaxMismatches) mismatches.push_back(std::move(m));
  }

  bool hypothesis(std::string_view name) const {
    for (const auto& h : hypotheses)
      if (h.name == name) return h.consistent;
    return false;
  }
};

/// Level in the epigraph above (z, h(z) + offset).
struct EpiPoint {
  Point z;
  double level;
};

namespace detail {

struct TheoremSamples {
  std::vector<PointPair> pairs;
  SampleTable table;
};

inline TheoremSamples theorem_samples(const FunctionDef& h, const FunctionDef& eta,
                                      const FunctionDef& w, const Domain& domain,
                                      const CheckConfig& cfg, DeltaInterval interval) {
  cfg.validate();
  validate_objective(h, domain.dimension());
  validate_maps(eta, w, domain.dimension());
  detail::PathEvaluator ev{&h, eta, w, true};
  TheoremSamples s;
  s.pairs = sample_pairs(domain, cfg);
  s.table = evaluate_table(ev, domain, s.pairs, delta_grid(cfg, interval));
  return s;
}

inline Verdict table_verdict(Family f, const FunctionDef& h, const FunctionDef& eta,
                             const FunctionDef& w, const Domain& domain, const CheckConfig& cfg,
                             const TheoremSamples& s) {
  detail::PathEvaluator ev{&h, eta, w, true};
  return verdict_from_table({f, Mode::w}, s.table, cfg, domain, s.pairs,
                            make_probe(f, ev, domain, cfg));
}

inline bool tolerant_leq(double a, double b, double tol) { return a <= b + tol; }

}  // namespace detail

/// epi(h) is w-invex iff h is w-preinvex. Levels are h(z) + {0, 1}.
inline TheoremReport epigraph_check(const FunctionDef& h, const FunctionDef& eta,
                                    const FunctionDef& w, const Domain& domain,
                                    const CheckConfig& config) {
  auto s = detail::theorem_samples(h, eta, w, domain, config, DeltaInterval::closed);
  Verdict pre = detail::table_verdict(Family::preinvex, h, eta, w, domain, config, s);

  TheoremReport r;
  r.theorem = "epigraph";
  r.hypotheses.push_back({"w-preinvex", !pre.refuted()});
  r.conclusion = "epi(h) w-invex";
  const auto& t = s.table;
  const std::size_t G = t.grid.size();
  for (std::size_t p = 0; p < t.pairs.size(); ++p) {
    const auto& ps = t.pairs[p];
    for (std::size_t k = 0; k < G; ++k) {
      const double lhs = t.lhs[p * G + k];
      if (!std::isfinite(ps.h1) || !std::isfinite(ps.h2) || !std::isfinite(lhs)) continue;
      const double d = t.grid[k];
      ++r.samples_evaluated;
      bool member_at_graph = false;
      for (double a : {0.0, 1.0}) {
        for (double b : {0.0, 1.0}) {
          EpiPoint lifted{detail::PathEvaluator::generated(ps, d), detail::chord(ps.h1 + a, ps.h2 + b, d)};
          const bool member = lhs <= lifted.level + config.tol_weak;
          if (a == 0.0 && b == 0.0) member_at_graph = member;
          if (!member) {
            r.conclusion_holds = false;
            r.add_mismatch({s.pairs[p].z1, s.pairs[p].z2, d, lhs, lifted.level,
                            "lifted point outside epi(h) (offsets " + std::to_string(int(a)) +
                                "," + std::to_string(int(b)) + ")"});
          }
        }
      }
      double rhs = 0.0, value = 0.0;
      const bool preinvex_holds = detail::judge(Family::preinvex, ps, lhs, 0.0, d, config, &rhs,
                                                &value) == detail::Judgement::holds;
      if (preinvex_holds == member_at_graph) ++r.samples_agreeing;
    }
  }
  r.vacuous = r.samples_evaluated == 0;
  if (r.samples_agreeing != r.samples_evaluated) {
    r.status = TheoremStatus::counterexample_to_implication;
  } else if (pre.refuted()) {
    r.status = TheoremStatus::refuted_hypothesis;
    r.notes.push_back("epigraph membership fails exactly where the w-preinvex inequality fails");
  } else {
    r.status = r.conclusion_holds ? TheoremStatus::supported
                                  : TheoremStatus::counterexample_to_implication;
  }
  return r;
}

/// Level set M_alpha = {z : h(z) <= alpha} under w-invex moves, plus the
/// per-pair iff form with alpha = max{h(z1), h(z2)} against w-prequasi.
inline TheoremReport level_set_check(const FunctionDef& h, const FunctionDef& eta,
                                     const FunctionDef& w, const Domain& domain, double alpha,
                                     const CheckConfig& config) {
  auto s = detail::theorem_samples(h, eta, w, domain, config, DeltaInterval::closed);
  Verdict pre = detail::table_verdict(Family::preinvex, h, eta, w, domain, config, s);
  Verdict quasi = detail::table_verdict(Family::prequasi, h, eta, w, domain, config, s);

  TheoremReport r;
  r.theorem = "level-set";
  r.hypotheses.push_back({"w-preinvex", !pre.refuted()});
  r.hypotheses.push_back({"w-prequasi", !quasi.refuted()});
  r.conclusion = "M_alpha w-invex";
  r.metrics["alpha"] = alpha;

  const auto& t = s.table;
  const std::size_t G = t.grid.size();
  std::size_t fixed_pairs = 0, fixed_samples = 0, fixed_fail = 0, iff_mismatch = 0;
  for (std::size_t p = 0; p < t.pairs.size(); ++p) {
    const auto& ps = t.pairs[p];
    if (!std::isfinite(ps.h1) || !std::isfinite(ps.h2)) continue;
    const bool in_level =
        ps.h1 <= alpha + config.tol_weak && ps.h2 <= alpha + config.tol_weak;
    if (in_level) ++fixed_pairs;
    const double pair_alpha = std::max(ps.h1, ps.h2);
    for (std::size_t k = 0; k < G; ++k) {
      const double lhs = t.lhs[p * G + k];
      if (!std::isfinite(lhs)) continue;
      const double d = t.grid[k];
      if (in_level) {
        ++fixed_samples;
        if (!detail::tolerant_leq(lhs, alpha, config.tol_weak)) {
          ++fixed_fail;
          r.add_mismatch({s.pairs[p].z1, s.pairs[p].z2, d, lhs, alpha,
                          "generated point leaves M_alpha"});
        }
      }
      ++r.samples_evaluated;
      const bool member = detail::tolerant_leq(lhs, pair_alpha, config.tol_weak);
      double rhs = 0.0, value = 0.0;
      const bool quasi_holds = detail::judge(Family::prequasi, ps, lhs, 0.0, d, config, &rhs,
                                             &value) == detail::Judgement::holds;
      if (member == quasi_holds) {
        ++r.samples_agreeing;
      } else {
        ++iff_mismatch;
        r.add_mismatch({s.pairs[p].z1, s.pairs[p].z2, d, lhs, pair_alpha,
                        "per-pair level membership disagrees with w-prequasi"});
      }
    }
  }
  r.metrics["fixed_alpha_pairs"] = static_cast<double>(fixed_pairs);
  r.metrics["fixed_alpha_samples"] = static_cast<double>(fixed_samples);
  r.conclusion_holds = fixed_fail == 0;

  if (iff_mismatch > 0) {
    r.status = TheoremStatus::counterexample_to_implication;
  } else if (fixed_pairs == 0) {
    r.status = TheoremStatus::supported;
    r.vacuous = true;
    r.notes.push_back("no sampled pair lies in M_alpha");
  } else if (quasi.refuted()) {
    r.status = TheoremStatus::refuted_hypothesis;
  } else {
    r.status = r.conclusion_holds ? TheoremStatus::supported
                                  : TheoremStatus::counterexample_to_implication;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Box grid helpers shared with the optimizer oracle.

inline int default_points_per_axis(int dimension) {
  switch (dimension) {
    case 1: return 4001;
    case 2: return 201;
    case 3: return 61;
    default: throw std::invalid_argument("grid oracle supports dimension <= 3");
  }
}

namespace detail {

/// Calls f(point) for every point of a regular grid over `box`, in
/// lexicographic index order.
template <typename F>
void for_each_grid_point(std::span<const Interval> box, int per_axis, F&& f) {
  const std::size_t n = box.size();
  std::vector<int> idx(n, 0);
  Point z(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i)
      z[i] = box[i].lo + (box[i].hi - box[i].lo) * idx[i] / (per_axis - 1);
    f(static_cast<const Point&>(z));
    std::size_t i = 0;
    while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == n) return;
  }
}

inline double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Exact diameter for small sets, bounding-box diagonal (an upper bound)
/// otherwise.
inline double diameter(const std::vector<Point>& pts) {
  if (pts.size() < 2) return 0.0;
  if (pts.size() <= 4096) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, distance(pts[i], pts[j]));
    return d;
  }
  Point lo = pts[0], hi = pts[0];
  for (const auto& p : pts)
    for (std::size_t i = 0; i < p.size(); ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  return distance(lo, hi);
}

inline std::vector<Point> strided_subset(const std::vector<Point>& pts, std::size_t limit) {
  if (pts.size() <= limit) return pts;
  std::vector<Point> out;
  for (std::size_t i = 0; i < limit; ++i) out.push_back(pts[i * (pts.size() - 1) / (limit - 1)]);
  return out;
}

}  // namespace detail

struct ArgminOptions {
  int points_per_axis = 0;  // 0: default for the dimension
  double cluster_tol = 1e-6;
  double cluster_radius = 1e-3;
  std::size_t max_cluster_points = 64;
};

/// F = {z : h(z) = nu}, nu estimated by the grid minimum over the sampling
/// box. Checks that moves between near-minimizers stay near-minimal and that
/// F is a single cluster when h is w-strictly preinvex.
inline TheoremReport argmin_set_check(const FunctionDef& h, const FunctionDef& eta,
                                      const FunctionDef& w, const Domain& domain,
                                      const CheckConfig& config, const ArgminOptions& opt = {}) {
  const int n = domain.dimension();
  detail::validate_objective(h, n);
  detail::validate_maps(eta, w, n);
  const int per_axis = opt.points_per_axis > 0 ? opt.points_per_axis : default_points_per_axis(n);

  Verdict pre = check_class({Family::preinvex, Mode::w}, h, eta, w, domain, config);
  Verdict strict = check_class({Family::strict_preinvex, Mode::w}, h, eta, w, domain, config);

  TheoremReport r;
  r.theorem = "argmin-set";
  r.hypotheses.push_back({"w-preinvex", !pre.refuted()});
  r.hypotheses.push_back({"w-strict-preinvex", !strict.refuted()});
  r.conclusion = "argmin set w-invex (singleton when strict)";

  double nu = std::numeric_limits<double>::infinity();
  std::vector<std::pair<Point, double>> grid;
  detail::for_each_grid_point(domain.sampling_box(), per_axis, [&](const Point& z) {
    const double v = h.scalar(z);
    if (!std::isfinite(v)) return;
    nu = std::min(nu, v);
    grid.emplace_back(z, v);
  });
  std::vector<Point> near;
  for (auto& [z, v] : grid)
    if (v <= nu + opt.cluster_tol) near.push_back(z);
  const double diam = detail::diameter(near);
  r.metrics["nu"] = nu;
  r.metrics["near_minimizers"] = static_cast<double>(near.size());
  r.metrics["cluster_diameter"] = diam;
  r.notes.push_back("nu and F are estimated on the sampling box only");
  if (near.empty()) {
    r.vacuous = true;
    r.status = TheoremStatus::supported;
    r.notes.push_back("h is not finite anywhere on the grid");
    return r;
  }
  r.metrics["argmin_first"] = near.front()[0];

  detail::PathEvaluator ev{&h, eta, w, true};
  const auto grid_d = delta_grid(config, DeltaInterval::closed);
  const auto subset = detail::strided_subset(near, opt.max_cluster_points);
  bool stays = true;
  for (const auto& a : subset) {
    for (const auto& b : subset) {
      auto ps = ev.prepare(a, b);
      for (double d : grid_d) {
        const double lhs = h.scalar(detail::PathEvaluator::generated(ps, d));
        if (!std::isfinite(lhs)) continue;
        ++r.samples_evaluated;
        if (lhs <= nu + opt.cluster_tol) {
          ++r.samples_agreeing;
        } else {
          stays = false;
          r.add_mismatch({a, b, d, lhs, nu, "generated point is not near-minimal"});
        }
      }
    }
  }
  const bool singleton_ok = strict.refuted() || diam <= opt.cluster_radius;
  if (!strict.refuted() && !singleton_ok)
    r.notes.push_back("w-strictly preinvex but the near-minimizer cluster is wider than the radius");
  r.conclusion_holds = stays && singleton_ok;
  if (pre.refuted())
    r.status = TheoremStatus::refuted_hypothesis;
  else
    r.status = r.conclusion_holds ? TheoremStatus::supported
                                  : TheoremStatus::counterexample_to_implication;
  return r;
}

// ---------------------------------------------------------------------------
// Closure constructors.

inline FunctionDef scale(const FunctionDef& h, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("scale factor must be positive");
  if (!h.is_scalar()) throw std::invalid_argument("scale needs a scalar function");
  return FunctionDef(h.name() + "*k", h.arity(), h.layout(),
                     {expr::bin(expr::BinaryOp::mul, expr::num(k), h.outputs()[0])});
}

inline FunctionDef weighted_sum(std::span<const FunctionDef> hs, std::span<const double> ks) {
  if (hs.empty() || hs.size() != ks.size())
    throw std::invalid_argument("weighted_sum needs one positive weight per function");
  expr::NodePtr acc;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(ks[i] > 0.0) || !std::isfinite(ks[i]))
      throw std::invalid_argument("weights must be positive");
    if (!hs[i].is_scalar() || hs[i].arity() != hs[0].arity() || hs[i].layout() != hs[0].layout())
      throw std::invalid_argument("weighted_sum needs scalar functions of equal arity");
    auto term = ks[i] == 1.0 ? hs[i].outputs()[0]
                             : expr::bin(expr::BinaryOp::mul, expr::num(ks[i]), hs[i].outputs()[0]);
    acc = acc ? expr::bin(expr::BinaryOp::add, acc, term) : term;
  }
  return FunctionDef("weighted_sum", hs[0].arity(), hs[0].layout(), {acc});
}

inline FunctionDef sum(const FunctionDef& h1, const FunctionDef& h2) {
  const FunctionDef parts[] = {h1, h2};
  const double ones[] = {1.0, 1.0};
  return weighted_sum(parts, ones);
}

/// phi(h(z)); phi must be a scalar function of one input.
inline FunctionDef compose(const FunctionDef& phi, const FunctionDef& h) {
  if (phi.arity() != 1 || !phi.is_scalar()) throw std::invalid_argument("phi must map R to R");
  if (!h.is_scalar()) throw std::invalid_argument("compose needs a scalar h");
  return FunctionDef("phi(h)", h.arity(), h.layout(),
                     {expr::substitute(phi.outputs()[0], h.outputs()[0])});
}

enum class ClosureKind { scale, sum, weighted_sum, compose_convex, compose_increasing };

inline const char* to_string(ClosureKind k) {
  switch (k) {
    case ClosureKind::scale: return "scale";
    case ClosureKind::sum: return "sum";
    case ClosureKind::weighted_sum: return "weighted-sum";
    case ClosureKind::compose_convex: return "compose-convex";
    case ClosureKind::compose_increasing: return "compose-increasing";
  }
  return "?";
}

namespace detail {

struct PhiShape {
  bool increasing = true;
  bool convex = true;
};

/// Checks phi on a 257-point grid spanning [lo, hi].
inline PhiShape check_phi(const FunctionDef& phi, double lo, double hi, double tol) {
  PhiShape s;
  if (!(lo < hi)) {
    lo -= 1.0;
    hi += 1.0;
  }
  constexpr int N = 257;
  std::vector<double> v(N);
  for (int i = 0; i < N; ++i) {
    const double t = lo + (hi - lo) * i / (N - 1);
    v[static_cast<std::size_t>(i)] = phi.scalar(std::span<const double>(&t, 1));
  }
  for (int i = 0; i + 1 < N; ++i) {
    const double a = v[static_cast<std::size_t>(i)], b = v[static_cast<std::size_t>(i + 1)];
    if (!std::isfinite(a) || !std::isfinite(b)) continue;
    if (b < a - tol * std::max(1.0, std::fabs(a))) s.increasing = false;
  }
  for (int i = 1; i + 1 < N; ++i) {
    const double a = v[static_cast<std::size_t>(i - 1)], b = v[static_cast<std::size_t>(i)],
                 c = v[static_cast<std::size_t>(i + 1)];
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b), std::fabs(c)});
    if (a - 2.0 * b + c < -tol * scale) s.convex = false;
  }
  return s;
}

}  // namespace detail

/// Runs the class check on `construct` and on each of `parts` over the same
/// samples; per sample, parts holding must imply the construct holding.
inline TheoremReport closure_check(ClosureKind kind, const FunctionDef& construct,
                                   std::span<const FunctionDef> parts, const FunctionDef& eta,
                                   const FunctionDef& w, const Domain& domain,
                                   const CheckConfig& config, const FunctionDef* phi = nullptr) {
  const Family family = kind == ClosureKind::compose_increasing ? Family::prequasi
                                                                : Family::preinvex;
  TheoremReport r;
  r.theorem = std::string("closure-") + to_string(kind);
  r.conclusion = std::string("construct is w-") + family_name(family);

  std::vector<detail::TheoremSamples> part_samples;
  bool parts_ok = true;
  for (const auto& part : parts) {
    part_samples.push_back(
        detail::theorem_samples(part, eta, w, domain, config, DeltaInterval::closed));
    Verdict v = detail::table_verdict(family, part, eta, w, domain, config, part_samples.back());
    r.hypotheses.push_back({std::string("part w-") + family_name(family), !v.refuted()});
    parts_ok &= !v.refuted();
  }
  auto cs = detail::theorem_samples(construct, eta, w, domain, config, DeltaInterval::closed);
  Verdict cv = detail::table_verdict(family, construct, eta, w, domain, config, cs);
  r.conclusion_holds = !cv.refuted();

  if (kind == ClosureKind::compose_convex || kind == ClosureKind::compose_increasing) {
    if (!phi) throw std::invalid_argument("composition check needs phi");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : part_samples) {
      for (const auto& ps : s.table.pairs)
        for (double x : {ps.h1, ps.h2})
          if (std::isfinite(x)) lo = std::min(lo, x), hi = std::max(hi, x);
      for (double x : s.table.lhs)
        if (std::isfinite(x)) lo = std::min(lo, x), hi = std::max(hi, x);
    }
    if (!std::isfinite(lo)) lo = -1.0, hi = 1.0;
    auto shape = detail::check_phi(*phi, lo, hi, config.tol_weak);
    r.hypotheses.push_back({"phi-increasing", shape.increasing});
    parts_ok &= shape.increasing;
    if (kind == ClosureKind::compose_convex) {
      r.hypotheses.push_back({"phi-convex", shape.convex});
      parts_ok &= shape.convex;
    }
    r.metrics["phi_grid_lo"] = lo;
    r.metrics["phi_grid_hi"] = hi;
  }

  const auto& ct = cs.table;
  const std::size_t G = ct.grid.size();
  for (std::size_t p = 0; p < ct.pairs.size(); ++p) {
    for (std::size_t k = 0; k < G; ++k) {
      double rhs = 0.0, value = 0.0;
      bool all_hold = true, any_judged = true;
      for (const auto& s : part_samples) {
        auto j = detail::judge(family, s.table.pairs[p], s.table.lhs[p * G + k], 0.0, ct.grid[k],
                               config, &rhs, &value);
        any_judged &= j == detail::Judgement::holds || j == detail::Judgement::fails;
        all_hold &= j == detail::Judgement::holds;
      }
      auto jc = detail::judge(family, ct.pairs[p], ct.lhs[p * G + k], 0.0, ct.grid[k], config,
                              &rhs, &value);
      if (!any_judged || (jc != detail::Judgement::holds && jc != detail::Judgement::fails))
        continue;
      ++r.samples_evaluated;
      if (all_hold && jc == detail::Judgement::fails) {
        r.add_mismatch({cs.pairs[p].z1, cs.pairs[p].z2, ct.grid[k], ct.lhs[p * G + k], rhs,
                        "parts hold but construct fails"});
      } else {
        ++r.samples_agreeing;
      }
    }
  }

  if (!parts_ok)
    r.status = TheoremStatus::refuted_hypothesis;
  else if (!r.conclusion_holds || r.mismatch_count > 0)
    r.status = TheoremStatus::counterexample_to_implication;
  else
    r.status = TheoremStatus::supported;
  return r;
}

inline TheoremReport check_scale(const FunctionDef& h, double k, const FunctionDef& eta,
                                 const FunctionDef& w, const Domain& domain,
                                 const CheckConfig& config) {
  const FunctionDef parts[] = {h};
  auto r = closure_check(ClosureKind::scale, scale(h, k), parts, eta, w, domain, config);
  r.metrics["k"] = k;
  return r;
}

inline TheoremReport check_sum(const FunctionDef& h1, const FunctionDef& h2,
                               const FunctionDef& eta, const FunctionDef& w, const Domain& domain,
                               const CheckConfig& config) {
  const FunctionDef parts[] = {h1, h2};
  return closure_check(ClosureKind::sum, sum(h1, h2), parts, eta, w, domain, config);
}

inline TheoremReport check_weighted_sum(std::span<const FunctionDef> hs,
                                        std::span<const double> ks, const FunctionDef& eta,
                                        const FunctionDef& w, const Domain& domain,
                                        const CheckConfig& config) {
  return closure_check(ClosureKind::weighted_sum, weighted_sum(hs, ks), hs, eta, w, domain,
                       config);
}

/// kind must be compose_convex (phi increasing and convex, h w-preinvex) or
/// compose_increasing (phi increasing, h w-prequasi).
inline TheoremReport check_compose(const FunctionDef& phi, const FunctionDef& h, ClosureKind kind,
                                   const FunctionDef& eta, const FunctionDef& w,
                                   const Domain& domain, const CheckConfig& config) {
  if (kind != ClosureKind::compose_convex && kind != ClosureKind::compose_increasing)
    throw std::invalid_argument("check_compose needs a composition kind");
  const FunctionDef parts[] = {h};
  return closure_check(kind, compose(phi, h), parts, eta, w, domain, config, &phi);
}

/// w-preinvex implies w-pre-pseudo-invex with b(z1, z2) = h(z2) - h(z1),
/// checked in w-lifted mode.
inline TheoremReport pseudo_implication_check(const FunctionDef& h, const FunctionDef& eta,
                                              const FunctionDef& w, const Domain& domain,
                                              const CheckConfig& config) {
  TheoremReport r;
  r.theorem = "preinvex-implies-pseudo";
  r.conclusion = "w-pre-pseudo (w-lifted) with b = h(z2) - h(z1)";
  Verdict pre = check_class({Family::preinvex, Mode::w}, h, eta, w, domain, config);
  r.hypotheses.push_back({"w-preinvex", !pre.refuted()});
  if (pre.refuted()) {
    r.status = TheoremStatus::refuted_hypothesis;
    r.notes.push_back("implication not tested: hypothesis refuted");
    return r;
  }

  CheckConfig lifted = config;
  lifted.eta_mode = EtaMode::w_lifted;
  detail::PathEvaluator ev{&h, eta, w, true};
  const auto pairs = sample_pairs(domain, lifted);
  const auto grid = delta_grid(lifted, DeltaInterval::open);
  std::size_t qualifying = 0;
  for (const auto& pp : pairs) {
    auto ps = ev.prepare(pp.z1, pp.z2);
    if (!std::isfinite(ps.h1) || !std::isfinite(ps.h2) || !(ps.h1 < ps.h2 - config.tol_strict))
      continue;
    ++qualifying;
    const double b = ps.h2 - ps.h1;
    for (double d : grid) {
      const double lhs = h.scalar(detail::PathEvaluator::generated(ps, d));
      if (!std::isfinite(lhs)) continue;
      const double bound = ps.h2 + d * (d - 1.0) * b;
      ++r.samples_evaluated;
      if (lhs <= bound + config.tol_weak)
        ++r.samples_agreeing;
      else
        r.add_mismatch({pp.z1, pp.z2, d, lhs, bound, "pseudo bound fails with b = h(z2) - h(z1)"});
    }
  }
  auto pseudo = check_pre_pseudo(h, eta, w, domain, lifted);
  r.metrics["qualifying_pairs"] = static_cast<double>(qualifying);
  r.metrics["required_b_infimum"] = pseudo.report.infimum;
  r.hypotheses.push_back({"w-pre-pseudo (w-lifted) sampled", !pseudo.verdict.refuted()});
  r.conclusion_holds = r.mismatch_count == 0 && !pseudo.verdict.refuted();
  r.vacuous = qualifying == 0;
  r.status = r.conclusion_holds ? TheoremStatus::supported
                                : TheoremStatus::counterexample_to_implication;
  return r;
}

}  // namespace winvex
