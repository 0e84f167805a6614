#pragma once

// Sampling checkers for the invex-set and generalized preinvexity classes.
// Every checker is refutation-complete only: a Refuted verdict carries a
// concrete witness, ConsistentOnSamples never claims membership.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "winvex/expr.hpp"
#include "winvex/sampling.hpp"

namespace winvex {

using expr::FunctionDef;

enum class Family {
  set_invex,
  preinvex,
  strict_preinvex,
  prequasi,
  strict_prequasi,
  semistrict_prequasi,
  pre_pseudo
};

/// classical evaluates at z2 + delta*eta(z1, z2); w at
/// w(z2) + delta*eta(z1, w(z2)).
enum class Mode { classical, w };

struct ClassId {
  Family family;
  Mode mode;
  bool operator==(const ClassId&) const = default;
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::set_invex: return "set-invex";
    case Family::preinvex: return "preinvex";
    case Family::strict_preinvex: return "strict-preinvex";
    case Family::prequasi: return "prequasi";
    case Family::strict_prequasi: return "strict-prequasi";
    case Family::semistrict_prequasi: return "semistrict-prequasi";
    case Family::pre_pseudo: return "pre-pseudo";
  }
  return "?";
}

inline std::string to_string(ClassId c) {
  return std::string(c.mode == Mode::w ? "w-" : "classical-") + family_name(c.family);
}

inline std::optional<ClassId> parse_class_id(std::string_view s) {
  Mode mode;
  if (s.starts_with("w-")) {
    mode = Mode::w;
    s.remove_prefix(2);
  } else if (s.starts_with("classical-")) {
    mode = Mode::classical;
    s.remove_prefix(10);
  } else {
    return std::nullopt;
  }
  for (Family f : {Family::set_invex, Family::preinvex, Family::strict_preinvex, Family::prequasi,
                   Family::strict_prequasi, Family::semistrict_prequasi, Family::pre_pseudo}) {
    if (s == family_name(f)) {
      if (f == Family::pre_pseudo && mode != Mode::w) return std::nullopt;
      return ClassId{f, mode};
    }
  }
  return std::nullopt;
}

inline bool is_strict(Family f) {
  return f == Family::strict_preinvex || f == Family::strict_prequasi ||
         f == Family::semistrict_prequasi;
}

struct Witness {
  Point z1;
  Point z2;
  double delta = 0.0;
  Point generated_point;
  double lhs = 0.0;
  double rhs = 0.0;
  double violation = 0.0;
};

/// `original` is the first refuting sample in index order; `shrunk` moves it
/// toward the sampling-box centre without weakening the violation.
struct Counterexample {
  Witness original;
  Witness shrunk;
};

enum class Outcome { refuted, consistent_on_samples };

inline const char* to_string(Outcome o) {
  return o == Outcome::refuted ? "refuted" : "consistent";
}

struct Verdict {
  ClassId cls{Family::preinvex, Mode::w};
  Outcome outcome = Outcome::consistent_on_samples;
  std::optional<Counterexample> counterexample;
  std::size_t samples_checked = 0;
  std::size_t samples_skipped = 0;
  bool low_confidence = false;  // more than half of the samples skipped
  bool vacuous = false;         // no applicable sample at all
  EtaMode eta_mode = EtaMode::as_written;
  CheckConfig config;
  std::vector<Interval> sampling_box;

  bool refuted() const noexcept { return outcome == Outcome::refuted; }
};

namespace detail {

inline bool finite(double x) { return std::isfinite(x); }

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

inline void validate_maps(const FunctionDef& eta, const FunctionDef& w, int n) {
  if (eta.layout() != expr::Layout::two_point || eta.block_size() != n)
    throw std::invalid_argument("eta must be a two-point map of arity " + std::to_string(2 * n));
  if (eta.output_count() != static_cast<std::size_t>(n))
    throw std::invalid_argument("eta must have " + std::to_string(n) + " outputs");
  if (w.arity() != n || w.layout() != expr::Layout::single)
    throw std::invalid_argument("w must be a point map of arity " + std::to_string(n));
  if (w.output_count() != static_cast<std::size_t>(n))
    throw std::invalid_argument("w must have " + std::to_string(n) + " outputs");
}

inline void validate_objective(const FunctionDef& h, int n) {
  if (h.arity() != n || h.layout() != expr::Layout::single)
    throw std::invalid_argument("h must be a function of arity " + std::to_string(n));
  if (!h.is_scalar()) throw std::invalid_argument("h must be scalar");
}

/// Evaluates generated points base + delta * eta(z1, w(z2)).
struct PathEvaluator {
  const FunctionDef* h;  // may be null (set checks)
  const FunctionDef& eta;
  const FunctionDef& w;
  bool lifted_base;  // base = w(z2) when true, z2 otherwise

  struct PairState {
    Point base;
    Point dir;
    double h1 = std::numeric_limits<double>::quiet_NaN();
    double h2 = std::numeric_limits<double>::quiet_NaN();
    bool distinct = false;
  };

  PairState prepare(const Point& z1, const Point& z2) const {
    const std::size_t n = z1.size();
    PairState s;
    Point wz2 = w(z2);
    Point eta_in(2 * n);
    std::copy(z1.begin(), z1.end(), eta_in.begin());
    std::copy(wz2.begin(), wz2.end(), eta_in.begin() + static_cast<std::ptrdiff_t>(n));
    s.dir = eta(eta_in);
    s.base = lifted_base ? std::move(wz2) : z2;
    if (h) {
      s.h1 = h->scalar(z1);
      s.h2 = h->scalar(z2);
    }
    s.distinct = z1 != z2;
    return s;
  }

  static Point generated(const PairState& s, double delta) {
    Point g(s.base.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = s.base[i] + delta * s.dir[i];
    return g;
  }
};

inline double chord(double h1, double h2, double delta) {
  double c = delta * h1 + (1.0 - delta) * h2;
  // Chord stays within [min h, max h].
  return std::clamp(c, std::min(h1, h2), std::max(h1, h2));
}

enum class Judgement { holds, fails, not_applicable, skipped };

/// Applies the defining inequality of `family` to one evaluated sample.
/// `value` receives lhs - rhs (or the distance to the domain for set checks).
inline Judgement judge(Family family, const PathEvaluator::PairState& s, double lhs,
                       double set_distance, double delta, const CheckConfig& cfg, double* rhs_out,
                       double* value) {
  if (family == Family::set_invex) {
    if (std::isnan(set_distance)) return Judgement::skipped;
    *rhs_out = 0.0;
    *value = set_distance;
    return set_distance <= cfg.tol_membership ? Judgement::holds : Judgement::fails;
  }
  if (is_strict(family) && family != Family::semistrict_prequasi && !s.distinct)
    return Judgement::not_applicable;
  if (!finite(s.h1) || !finite(s.h2) || !finite(lhs)) return Judgement::skipped;
  if (family == Family::semistrict_prequasi && s.h1 == s.h2) return Judgement::not_applicable;

  const bool chord_rhs = family == Family::preinvex || family == Family::strict_preinvex;
  const double rhs = chord_rhs ? chord(s.h1, s.h2, delta) : std::max(s.h1, s.h2);
  *rhs_out = rhs;
  *value = lhs - rhs;
  const bool ok = is_strict(family) ? lhs < rhs - cfg.tol_strict : lhs <= rhs + cfg.tol_weak;
  return ok ? Judgement::holds : Judgement::fails;
}

/// lhs and set distance for every (pair, delta), index p * grid.size() + k.
struct SampleTable {
  std::vector<double> grid;
  std::vector<PathEvaluator::PairState> pairs;
  std::vector<double> lhs;
  std::vector<double> distance;
};

inline SampleTable evaluate_table(const PathEvaluator& ev, const Domain& domain,
                                  const std::vector<PointPair>& pairs, std::vector<double> grid) {
  SampleTable t;
  t.grid = std::move(grid);
  const std::size_t G = t.grid.size();
  t.pairs.reserve(pairs.size());
  t.lhs.resize(pairs.size() * G);
  t.distance.resize(pairs.size() * G);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    t.pairs.push_back(ev.prepare(pairs[p].z1, pairs[p].z2));
    const auto& s = t.pairs.back();
    for (std::size_t k = 0; k < G; ++k) {
      Point g = PathEvaluator::generated(s, t.grid[k]);
      t.distance[p * G + k] = domain.distance(g);
      t.lhs[p * G + k] =
          ev.h ? ev.h->scalar(g) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return t;
}

/// Returns a witness when (z1, z2, delta) refutes the class, else nullopt.
using WitnessProbe = std::function<std::optional<Witness>(const Point&, const Point&, double)>;

inline WitnessProbe make_probe(Family family, const PathEvaluator& ev, const Domain& domain,
                               const CheckConfig& cfg) {
  return [family, ev, &domain, cfg](const Point& z1, const Point& z2,
                                    double delta) -> std::optional<Witness> {
    auto s = ev.prepare(z1, z2);
    Point g = PathEvaluator::generated(s, delta);
    double lhs = ev.h ? ev.h->scalar(g) : std::numeric_limits<double>::quiet_NaN();
    double dist = domain.distance(g);
    double rhs = 0.0, value = 0.0;
    if (judge(family, s, lhs, dist, delta, cfg, &rhs, &value) != Judgement::fails)
      return std::nullopt;
    Witness w{z1, z2, delta, std::move(g), family == Family::set_invex ? dist : lhs, rhs, value};
    return w;
  };
}

/// Moves a refuting witness toward the sampling-box centre (and toward the
/// smallest grid delta) while it keeps refuting with no smaller violation.
inline Witness shrink(const Witness& original, const WitnessProbe& probe,
                      const std::vector<double>& grid, const Point& center) {
  Witness cur = original;
  const double floor =
      original.violation - 1e-9 * std::max(1.0, std::fabs(original.violation));
  auto accept = [&](const Point& z1, const Point& z2, double delta) -> bool {
    auto w = probe(z1, z2, delta);
    if (!w || !(w->violation >= floor)) return false;
    cur = std::move(*w);
    return true;
  };
  static constexpr double kSteps[] = {1.0, 0.5, 0.25, 0.125, 0.0625};
  for (int pass = 0; pass < 16; ++pass) {
    bool changed = false;
    for (double d : grid) {
      if (d >= cur.delta) break;
      if (accept(cur.z1, cur.z2, d)) {
        changed = true;
        break;
      }
    }
    for (int side = 0; side < 2; ++side) {
      for (std::size_t j = 0; j < center.size(); ++j) {
        for (double t : kSteps) {
          Point z1 = cur.z1, z2 = cur.z2;
          double& x = side == 0 ? z1[j] : z2[j];
          const double moved = x + t * (center[j] - x);
          if (moved == x) continue;
          x = moved;
          if (accept(z1, z2, cur.delta)) {
            changed = true;
            break;
          }
        }
      }
    }
    if (!changed) break;
  }
  return cur;
}

inline Verdict verdict_from_table(ClassId cls, const SampleTable& t, const CheckConfig& cfg,
                                  const Domain& domain, const std::vector<PointPair>& pairs,
                                  const WitnessProbe& probe) {
  Verdict v;
  v.cls = cls;
  v.config = cfg;
  v.eta_mode = cfg.eta_mode;
  v.sampling_box.assign(domain.sampling_box().begin(), domain.sampling_box().end());
  const std::size_t G = t.grid.size();
  std::optional<std::pair<std::size_t, std::size_t>> first;
  for (std::size_t p = 0; p < t.pairs.size(); ++p) {
    for (std::size_t k = 0; k < G; ++k) {
      double rhs = 0.0, value = 0.0;
      switch (judge(cls.family, t.pairs[p], t.lhs[p * G + k], t.distance[p * G + k], t.grid[k],
                    cfg, &rhs, &value)) {
        case Judgement::holds: ++v.samples_checked; break;
        case Judgement::fails:
          ++v.samples_checked;
          if (!first) first = {p, k};
          break;
        case Judgement::skipped: ++v.samples_skipped; break;
        case Judgement::not_applicable: break;
      }
    }
  }
  v.vacuous = v.samples_checked == 0;
  const std::size_t total = v.samples_checked + v.samples_skipped;
  v.low_confidence = total > 0 && 2 * v.samples_skipped > total;
  if (first) {
    auto [p, k] = *first;
    auto w = probe(pairs[p].z1, pairs[p].z2, t.grid[k]);
    if (w) {
      v.outcome = Outcome::refuted;
      Witness shrunk = shrink(*w, probe, t.grid, domain.center());
      v.counterexample = Counterexample{std::move(*w), std::move(shrunk)};
    }
  }
  return v;
}

inline DeltaInterval grid_for(Family f) {
  return is_strict(f) ? DeltaInterval::open : DeltaInterval::closed;
}

}  // namespace detail

/// Membership of every generated point in X over the closed delta grid.
/// Classical mode ignores `w` and uses the identity.
inline Verdict check_set_invex(const Domain& domain, const FunctionDef& eta, const FunctionDef& w,
                               const CheckConfig& config, Mode mode = Mode::w) {
  config.validate();
  const int n = domain.dimension();
  const FunctionDef id = expr::identity_map(n);
  const FunctionDef& w_eff = mode == Mode::w ? w : id;
  detail::validate_maps(eta, w_eff, n);
  detail::PathEvaluator ev{nullptr, eta, w_eff, true};
  auto pairs = sample_pairs(domain, config);
  auto table = detail::evaluate_table(ev, domain, pairs, delta_grid(config, DeltaInterval::closed));
  auto probe = detail::make_probe(Family::set_invex, ev, domain, config);
  return detail::verdict_from_table({Family::set_invex, mode}, table, config, domain, pairs, probe);
}

inline Verdict check_class(ClassId cls, const FunctionDef& h, const FunctionDef& eta,
                           const FunctionDef& w, const Domain& domain, const CheckConfig& config) {
  if (cls.family == Family::pre_pseudo)
    throw std::invalid_argument("use check_pre_pseudo for the pseudo class");
  if (cls.family == Family::set_invex) return check_set_invex(domain, eta, w, config, cls.mode);
  config.validate();
  const int n = domain.dimension();
  detail::validate_objective(h, n);
  const FunctionDef id = expr::identity_map(n);
  const FunctionDef& w_eff = cls.mode == Mode::w ? w : id;
  detail::validate_maps(eta, w_eff, n);
  detail::PathEvaluator ev{&h, eta, w_eff, true};
  auto pairs = sample_pairs(domain, config);
  auto table = detail::evaluate_table(ev, domain, pairs, delta_grid(config, detail::grid_for(cls.family)));
  auto probe = detail::make_probe(cls.family, ev, domain, config);
  return detail::verdict_from_table(cls, table, config, domain, pairs, probe);
}

// ---------------------------------------------------------------------------
// Pre-pseudo invexity: h(z1) < h(z2) must imply
//   h(base + delta*eta(z1, w(z2))) <= h(z2) + delta*(delta-1)*b(z1, z2)
// for some b > 0, with base = z2 (as-written) or w(z2) (w-lifted).

struct PairBound {
  std::size_t pair_index;
  double required_b;
};

struct PseudoWitnessReport {
  EtaMode eta_mode = EtaMode::as_written;
  std::vector<PairBound> bounds;  // qualifying pairs only
  double infimum = std::numeric_limits<double>::infinity();
  std::size_t qualifying_pairs = 0;
  std::size_t pairs_with_no_positive_b = 0;
};

struct PseudoResult {
  Verdict verdict;
  PseudoWitnessReport report;
};

namespace detail {

struct PseudoPairEval {
  bool qualifies = false;
  double required_b = std::numeric_limits<double>::quiet_NaN();
  double argmin_delta = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
};

inline PseudoPairEval pseudo_pair(const PathEvaluator& ev, const Point& z1, const Point& z2,
                                  const std::vector<double>& open_grid, const CheckConfig& cfg) {
  PseudoPairEval r;
  auto s = ev.prepare(z1, z2);
  if (!finite(s.h1) || !finite(s.h2) || !(s.h1 < s.h2 - cfg.tol_strict)) return r;
  r.qualifies = true;
  double best = std::numeric_limits<double>::infinity();
  for (double d : open_grid) {
    double lhs = ev.h->scalar(PathEvaluator::generated(s, d));
    if (!finite(lhs)) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    double b = (s.h2 - lhs) / (d * (1.0 - d));
    if (b < best) {
      best = b;
      r.argmin_delta = d;
    }
  }
  if (r.checked > 0) r.required_b = best;
  return r;
}

inline WitnessProbe make_pseudo_probe(const PathEvaluator& ev, const CheckConfig& cfg) {
  return [ev, cfg](const Point& z1, const Point& z2, double d) -> std::optional<Witness> {
    auto s = ev.prepare(z1, z2);
    if (!finite(s.h1) || !finite(s.h2) || !(s.h1 < s.h2 - cfg.tol_strict)) return std::nullopt;
    if (!(d > 0.0 && d < 1.0)) return std::nullopt;
    Point g = PathEvaluator::generated(s, d);
    double lhs = ev.h->scalar(g);
    if (!finite(lhs)) return std::nullopt;
    if (!((s.h2 - lhs) / (d * (1.0 - d)) <= cfg.tol_strict)) return std::nullopt;
    return Witness{z1, z2, d, std::move(g), lhs, s.h2, lhs - s.h2};
  };
}

}  // namespace detail

/// Supremum of admissible b for one pair: the minimum over the open delta
/// grid of (h(z2) - h(generated)) / (delta * (1 - delta)).
inline double required_b(const FunctionDef& h, const FunctionDef& eta, const FunctionDef& w,
                         const Point& z1, const Point& z2, const CheckConfig& config) {
  config.validate();
  const int n = static_cast<int>(z1.size());
  detail::validate_objective(h, n);
  detail::validate_maps(eta, w, n);
  if (z2.size() != z1.size()) throw std::invalid_argument("point dimension mismatch");
  detail::PathEvaluator ev{&h, eta, w, config.eta_mode == EtaMode::w_lifted};
  auto r = detail::pseudo_pair(ev, z1, z2, delta_grid(config, DeltaInterval::open), config);
  if (!r.qualifies) throw std::invalid_argument("required_b needs h(z1) < h(z2) - tol_strict");
  return r.required_b;
}

inline PseudoResult check_pre_pseudo(const FunctionDef& h, const FunctionDef& eta,
                                     const FunctionDef& w, const Domain& domain,
                                     const CheckConfig& config) {
  config.validate();
  const int n = domain.dimension();
  detail::validate_objective(h, n);
  detail::validate_maps(eta, w, n);
  detail::PathEvaluator ev{&h, eta, w, config.eta_mode == EtaMode::w_lifted};
  const auto pairs = sample_pairs(domain, config);
  const auto grid = delta_grid(config, DeltaInterval::open);

  PseudoResult out;
  Verdict& v = out.verdict;
  v.cls = {Family::pre_pseudo, Mode::w};
  v.config = config;
  v.eta_mode = config.eta_mode;
  v.sampling_box.assign(domain.sampling_box().begin(), domain.sampling_box().end());
  out.report.eta_mode = config.eta_mode;

  std::optional<std::size_t> first;
  double first_delta = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto r = detail::pseudo_pair(ev, pairs[p].z1, pairs[p].z2, grid, config);
    if (!r.qualifies) continue;
    v.samples_checked += r.checked;
    v.samples_skipped += r.skipped;
    if (r.checked == 0) continue;
    ++out.report.qualifying_pairs;
    out.report.bounds.push_back({p, r.required_b});
    out.report.infimum = std::min(out.report.infimum, r.required_b);
    if (r.required_b <= config.tol_strict) {
      ++out.report.pairs_with_no_positive_b;
      if (!first) {
        first = p;
        first_delta = r.argmin_delta;
      }
    }
  }
  v.vacuous = v.samples_checked == 0;
  const std::size_t total = v.samples_checked + v.samples_skipped;
  v.low_confidence = total > 0 && 2 * v.samples_skipped > total;
  if (first) {
    auto probe = detail::make_pseudo_probe(ev, config);
    auto w0 = probe(pairs[*first].z1, pairs[*first].z2, first_delta);
    if (w0) {
      v.outcome = Outcome::refuted;
      Witness s = detail::shrink(*w0, probe, grid, domain.center());
      v.counterexample = Counterexample{std::move(*w0), std::move(s)};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// classify: every checker on one shared sample set plus pointwise lattice
// consistency.

struct LatticeEdge {
  ClassId from;
  ClassId to;
  std::size_t shared_samples = 0;
  std::size_t violations = 0;  // samples where `from` holds but `to` fails
};

struct ClassReport {
  std::vector<Verdict> verdicts;
  PseudoResult pseudo;
  std::vector<LatticeEdge> lattice;
  bool internal_error = false;

  const Verdict* find(ClassId c) const {
    if (c.family == Family::pre_pseudo) return &pseudo.verdict;
    for (const auto& v : verdicts)
      if (v.cls == c) return &v;
    return nullptr;
  }
};

inline const std::vector<Family>& function_families() {
  static const std::vector<Family> f = {Family::preinvex, Family::strict_preinvex,
                                        Family::prequasi, Family::strict_prequasi,
                                        Family::semistrict_prequasi};
  return f;
}

namespace detail {

inline LatticeEdge lattice_edge(Mode mode, Family from, Family to, const SampleTable& t,
                                const CheckConfig& cfg) {
  LatticeEdge e{{from, mode}, {to, mode}};
  const std::size_t G = t.grid.size();
  for (std::size_t p = 0; p < t.pairs.size(); ++p) {
    for (std::size_t k = 0; k < G; ++k) {
      double rhs = 0.0, value = 0.0;
      auto a = judge(from, t.pairs[p], t.lhs[p * G + k], t.distance[p * G + k], t.grid[k], cfg,
                     &rhs, &value);
      auto b = judge(to, t.pairs[p], t.lhs[p * G + k], t.distance[p * G + k], t.grid[k], cfg,
                     &rhs, &value);
      const bool ja = a == Judgement::holds || a == Judgement::fails;
      const bool jb = b == Judgement::holds || b == Judgement::fails;
      if (!ja || !jb) continue;
      ++e.shared_samples;
      if (a == Judgement::holds && b == Judgement::fails) ++e.violations;
    }
  }
  return e;
}

}  // namespace detail

/// Runs set-invex, all five function classes (classical and w modes) and the
/// pseudo class (in config.eta_mode) on one shared sample set.
inline ClassReport classify(const FunctionDef& h, const FunctionDef& eta, const FunctionDef& w,
                            const Domain& domain, const CheckConfig& config) {
  config.validate();
  const int n = domain.dimension();
  detail::validate_objective(h, n);
  detail::validate_maps(eta, w, n);
  const FunctionDef id = expr::identity_map(n);
  const auto pairs = sample_pairs(domain, config);
  const auto closed = delta_grid(config, DeltaInterval::closed);
  const auto open = delta_grid(config, DeltaInterval::open);

  ClassReport rep;
  for (Mode mode : {Mode::w, Mode::classical}) {
    const FunctionDef& w_eff = mode == Mode::w ? w : id;
    detail::PathEvaluator ev{&h, eta, w_eff, true};
    auto tc = detail::evaluate_table(ev, domain, pairs, closed);
    auto to = detail::evaluate_table(ev, domain, pairs, open);

    auto set_probe = detail::make_probe(Family::set_invex, ev, domain, config);
    rep.verdicts.push_back(detail::verdict_from_table({Family::set_invex, mode}, tc, config,
                                                      domain, pairs, set_probe));
    for (Family f : function_families()) {
      auto probe = detail::make_probe(f, ev, domain, config);
      const auto& t = is_strict(f) ? to : tc;
      rep.verdicts.push_back(detail::verdict_from_table({f, mode}, t, config, domain, pairs, probe));
    }

    rep.lattice.push_back(detail::lattice_edge(mode, Family::preinvex, Family::prequasi, tc, config));
    rep.lattice.push_back(
        detail::lattice_edge(mode, Family::strict_preinvex, Family::preinvex, to, config));
    rep.lattice.push_back(
        detail::lattice_edge(mode, Family::strict_preinvex, Family::strict_prequasi, to, config));
    rep.lattice.push_back(
        detail::lattice_edge(mode, Family::strict_prequasi, Family::prequasi, to, config));
    rep.lattice.push_back(detail::lattice_edge(mode, Family::strict_prequasi,
                                               Family::semistrict_prequasi, to, config));
  }
  rep.pseudo = check_pre_pseudo(h, eta, w, domain, config);

  for (const auto& e : rep.lattice) rep.internal_error |= e.violations > 0;
  // Verdict-level form of preinvex => prequasi on the shared closed grid.
  for (Mode mode : {Mode::w, Mode::classical}) {
    const Verdict* pre = rep.find({Family::preinvex, mode});
    const Verdict* quasi = rep.find({Family::prequasi, mode});
    if (pre && quasi && !pre->refuted() && quasi->refuted()) rep.internal_error = true;
  }
  return rep;
}

/// Recomputes a stored witness from (z1, z2, delta) alone.
inline std::optional<Witness> recompute_witness(ClassId cls, const FunctionDef* h,
                                                const FunctionDef& eta, const FunctionDef& w,
                                                const Domain& domain, const CheckConfig& config,
                                                const Point& z1, const Point& z2, double delta) {
  const int n = domain.dimension();
  const FunctionDef id = expr::identity_map(n);
  const FunctionDef& w_eff = cls.mode == Mode::w ? w : id;
  detail::validate_maps(eta, w_eff, n);
  if (cls.family == Family::pre_pseudo) {
    if (!h) throw std::invalid_argument("pseudo witness needs h");
    detail::PathEvaluator ev{h, eta, w_eff, config.eta_mode == EtaMode::w_lifted};
    return detail::make_pseudo_probe(ev, config)(z1, z2, delta);
  }
  if (cls.family != Family::set_invex && !h) throw std::invalid_argument("class check needs h");
  detail::PathEvaluator ev{cls.family == Family::set_invex ? nullptr : h, eta, w_eff, true};
  return detail::make_probe(cls.family, ev, domain, config)(z1, z2, delta);
}

}  // namespace winvex
