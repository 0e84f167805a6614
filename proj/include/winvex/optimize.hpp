#pragma once

// Constrained minimization of h over {z in box : g_i(z) <= 0} with a
// derivative-free descent whose moves follow w-invexity paths, and a grid
// oracle used to validate the optimality results.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "winvex/theorems.hpp"

namespace winvex {

struct OptProblem {
  FunctionDef objective;
  std::vector<FunctionDef> constraints;
  FunctionDef eta;
  FunctionDef w;
  Domain search_box;

  int dimension() const { return search_box.dimension(); }

  void validate() const {
    const int n = dimension();
    detail::validate_objective(objective, n);
    for (const auto& g : constraints)
      if (g.arity() != n || !g.is_scalar() || g.layout() != expr::Layout::single)
        throw std::invalid_argument("constraint " + g.name() + " must be scalar of arity " +
                                    std::to_string(n));
    detail::validate_maps(eta, w, n);
  }
};

struct SolverConfig {
  double eps_feas = 1e-9;
  double eps_decrease = 1e-12;
  double local_global_tol = 1e-6;
  int max_iters = 10000;
  int stall_limit = 500;
  int starts = 16;
  std::uint64_t seed = 0;
  double cluster_tol = 1e-6;
  double cluster_radius = 1e-3;
  int oracle_points = 0;  // per axis; 0 picks the dimension default

  void validate() const {
    if (!(eps_feas >= 0) || !(eps_decrease >= 0) || !(local_global_tol >= 0) ||
        !(cluster_tol >= 0) || !(cluster_radius >= 0))
      throw std::invalid_argument("solver tolerances must be non-negative");
    if (max_iters < 1 || stall_limit < 1) throw std::invalid_argument("iteration limits must be positive");
    if (starts < 1) throw std::invalid_argument("starts must be >= 1");
    if (oracle_points == 1 || oracle_points < 0)
      throw std::invalid_argument("oracle_points must be 0 or >= 2");
  }

  bool operator==(const SolverConfig&) const = default;
};

enum class SolveStatus { optimal_vs_oracle, local_only, infeasible };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal_vs_oracle: return "optimal-vs-oracle";
    case SolveStatus::local_only: return "local-only";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "?";
}

struct Endpoint {
  Point point;
  double value = 0.0;
  double residual = 0.0;
  std::size_t accepted_moves = 0;
};

struct SolveResult {
  Point best_point;
  double best_value = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::infinity();
  std::size_t starts_attempted = 0;
  std::vector<std::size_t> trace_lengths;
  std::vector<double> trace;  // accepted objective values of a single descent
  std::vector<Endpoint> endpoints;
  std::optional<double> oracle_value;
  std::vector<Point> cluster;  // oracle near-minimizers
  double spread = 0.0;
  double tie_spread = 0.0;  // diameter of the grid points tied with the minimum
  SolveStatus status = SolveStatus::local_only;
};

/// max_i max(g_i(z), 0); NaN constraint values count as infinitely violated.
inline double residual(const OptProblem& p, const Point& z) {
  double r = 0.0;
  for (const auto& g : p.constraints) {
    const double v = g.scalar(z);
    if (std::isnan(v)) return std::numeric_limits<double>::infinity();
    r = std::max(r, v);
  }
  return r;
}

namespace detail {
inline double tie_tolerance(double v) { return 1e-12 * std::fabs(v); }
}  // namespace detail

/// Exhaustive grid scan. The cluster holds every feasible grid point within
/// cluster_tol of the minimum.
inline SolveResult brute_force_min(const OptProblem& problem, int points_per_axis = 0,
                                   double cluster_tol = 1e-6, double eps_feas = 1e-9) {
  problem.validate();
  const int n = problem.dimension();
  const int N = points_per_axis > 0 ? points_per_axis : default_points_per_axis(n);
  if (n > 3) throw std::invalid_argument("grid oracle supports dimension <= 3");
  if (N < 2) throw std::invalid_argument("points_per_axis must be >= 2");

  SolveResult r;
  r.starts_attempted = 0;
  std::vector<std::pair<Point, double>> feasible;
  detail::for_each_grid_point(problem.search_box.sampling_box(), N, [&](const Point& z) {
    if (residual(problem, z) > eps_feas) return;
    const double v = problem.objective.scalar(z);
    if (std::isfinite(v)) feasible.emplace_back(z, v);
  });
  if (feasible.empty()) {
    r.status = SolveStatus::infeasible;
    return r;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < feasible.size(); ++i)
    if (feasible[i].second < feasible[best].second) best = i;
  r.best_point = feasible[best].first;
  r.best_value = feasible[best].second;
  r.residual = residual(problem, r.best_point);
  r.oracle_value = r.best_value;
  std::vector<Point> ties;
  const double tie_tol = detail::tie_tolerance(r.best_value);
  for (auto& [z, v] : feasible) {
    if (v <= r.best_value + cluster_tol) r.cluster.push_back(z);
    if (v <= r.best_value + tie_tol) ties.push_back(z);
  }
  r.spread = detail::diameter(r.cluster);
  r.tie_spread = detail::diameter(ties);
  r.status = SolveStatus::optimal_vs_oracle;
  return r;
}

namespace detail {

inline bool inside(std::span<const Interval> box, const Point& z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(z[i] >= box[i].lo && z[i] <= box[i].hi)) return false;
  return true;
}

}  // namespace detail

/// Pattern search from `start`. Each iteration tries one eta-move
/// w(z) + delta * eta(t, w(z)) toward a random target t, then signed
/// coordinate steps. While infeasible, moves must reduce the residual; once
/// feasible, they must stay feasible and lower h by at least eps_decrease.
inline SolveResult local_descent(const OptProblem& problem, const Point& start,
                                 const SolverConfig& config, std::uint64_t stream = 0) {
  problem.validate();
  config.validate();
  const auto box = problem.search_box.sampling_box();
  const std::size_t n = box.size();
  if (start.size() != n) throw std::invalid_argument("start dimension mismatch");
  if (!detail::inside(box, start)) throw std::invalid_argument("start must lie inside the search box");

  const std::uint64_t target_stream = 2 + 2 * stream;
  const std::uint64_t delta_stream = 3 + 2 * stream;

  Point z = start;
  double res = residual(problem, z);
  double val = problem.objective.scalar(z);
  bool feasible = res <= config.eps_feas;

  std::vector<double> step(n), min_step(n), max_step(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double width = box[i].hi - box[i].lo;
    step[i] = 0.25 * width;
    max_step[i] = 0.5 * width;
    min_step[i] = 1e-12 * width;
  }
  double delta_max = 1.0;

  SolveResult r;
  r.starts_attempted = 1;
  std::size_t accepted = 0;
  int rejections = 0;

  // Better-than test for a candidate with residual cr and value cv.
  auto improves = [&](double cr, double cv) {
    if (!feasible) return cr < res - config.eps_decrease || (cr <= config.eps_feas && res > config.eps_feas);
    return cr <= config.eps_feas && std::isfinite(cv) && cv <= val - config.eps_decrease;
  };

  Point eta_in(2 * n);
  for (int it = 0; it < config.max_iters && rejections < config.stall_limit; ++it) {
    const auto idx = static_cast<std::uint64_t>(it);
    std::optional<Point> next;
    double next_res = 0.0, next_val = 0.0;

    Point target(n);
    for (std::size_t j = 0; j < n; ++j)
      target[j] = box[j].lo + (box[j].hi - box[j].lo) * counter_uniform(config.seed, target_stream, idx * n + j);
    const double d = delta_max * counter_uniform(config.seed, delta_stream, idx);
    Point wz = problem.w(z);
    std::copy(target.begin(), target.end(), eta_in.begin());
    std::copy(wz.begin(), wz.end(), eta_in.begin() + static_cast<std::ptrdiff_t>(n));
    Point dir = problem.eta(eta_in);
    Point cand(n);
    for (std::size_t j = 0; j < n; ++j) cand[j] = wz[j] + d * dir[j];
    if (detail::inside(box, cand)) {
      const double cr = residual(problem, cand);
      const double cv = problem.objective.scalar(cand);
      if (improves(cr, cv)) next = cand, next_res = cr, next_val = cv;
    }

    if (!next) {
      for (std::size_t j = 0; j < n; ++j) {
        for (double sign : {-1.0, 1.0}) {
          Point c = z;
          c[j] += sign * step[j];
          if (!detail::inside(box, c)) continue;
          const double cr = residual(problem, c);
          const double cv = problem.objective.scalar(c);
          if (!improves(cr, cv)) continue;
          const bool better = !next || (feasible ? cv < next_val : cr < next_res);
          if (better) next = c, next_res = cr, next_val = cv;
        }
      }
    }

    if (next) {
      const bool was_feasible = feasible;
      z = std::move(*next);
      res = next_res;
      val = next_val;
      feasible = res <= config.eps_feas;
      if (was_feasible) {
        ++accepted;
        r.trace.push_back(val);
      }
      rejections = 0;
      for (std::size_t j = 0; j < n; ++j) step[j] = std::min(2.0 * step[j], max_step[j]);
      delta_max = std::min(2.0 * delta_max, 1.0);
    } else {
      ++rejections;
      for (std::size_t j = 0; j < n; ++j) step[j] = std::max(0.5 * step[j], min_step[j]);
      delta_max = std::max(0.5 * delta_max, 1e-9);
    }
  }

  r.best_point = z;
  r.best_value = val;
  r.residual = res;
  r.trace_lengths = {accepted};
  r.endpoints.push_back({z, val, res, accepted});
  r.status = feasible ? SolveStatus::local_only : SolveStatus::infeasible;
  return r;
}

/// Start point of multistart run i.
inline Point multistart_start(const OptProblem& problem, const SolverConfig& config, int i) {
  const auto box = problem.search_box.sampling_box();
  const std::size_t n = box.size();
  Point z(n);
  for (std::size_t j = 0; j < n; ++j)
    z[j] = box[j].lo + (box[j].hi - box[j].lo) *
                           counter_uniform(config.seed, 1, static_cast<std::uint64_t>(i) * n + j);
  return z;
}

/// Best feasible endpoint by (value, start index). `spread` is the diameter of
/// the endpoints within local_global_tol of the best value.
inline SolveResult multistart_solve(const OptProblem& problem, const SolverConfig& config,
                                    int starts) {
  if (starts < 1) throw std::invalid_argument("starts must be >= 1");
  SolveResult r;
  std::optional<std::size_t> best;
  for (int i = 0; i < starts; ++i) {
    auto one = local_descent(problem, multistart_start(problem, config, i), config,
                             static_cast<std::uint64_t>(i));
    r.trace_lengths.push_back(one.trace_lengths.front());
    r.endpoints.push_back(one.endpoints.front());
    const auto& e = r.endpoints.back();
    if (e.residual <= config.eps_feas && std::isfinite(e.value) &&
        (!best || e.value < r.endpoints[*best].value)) {
      best = r.endpoints.size() - 1;
      r.trace = std::move(one.trace);
    }
  }
  r.starts_attempted = static_cast<std::size_t>(starts);
  if (!best) {
    r.status = SolveStatus::infeasible;
    for (const auto& e : r.endpoints) r.residual = std::min(r.residual, e.residual);
    return r;
  }
  r.best_point = r.endpoints[*best].point;
  r.best_value = r.endpoints[*best].value;
  r.residual = r.endpoints[*best].residual;
  std::vector<Point> near;
  for (const auto& e : r.endpoints)
    if (e.residual <= config.eps_feas && e.value <= r.best_value + config.local_global_tol)
      near.push_back(e.point);
  r.spread = detail::diameter(near);
  r.status = SolveStatus::local_only;
  return r;
}

/// Multistart, then a grid oracle when the dimension allows it.
inline SolveResult solve(const OptProblem& problem, const SolverConfig& config) {
  auto r = multistart_solve(problem, config, config.starts);
  if (problem.dimension() <= 3) {
    auto oracle = brute_force_min(problem, config.oracle_points, config.cluster_tol, config.eps_feas);
    if (oracle.status != SolveStatus::infeasible) {
      r.oracle_value = oracle.best_value;
      if (r.status != SolveStatus::infeasible &&
          std::fabs(r.best_value - oracle.best_value) <= config.local_global_tol)
        r.status = SolveStatus::optimal_vs_oracle;
    }
  }
  return r;
}

struct OptimalityAnalysis {
  SolveResult oracle;
  SolveResult multistart;
  TheoremReport report;
};

namespace detail {

inline TheoremStatus combine_parts(const std::vector<TheoremReport>& parts) {
  bool any_supported = false;
  for (const auto& p : parts) {
    if (p.status == TheoremStatus::counterexample_to_implication)
      return TheoremStatus::counterexample_to_implication;
    any_supported |= p.status == TheoremStatus::supported;
  }
  return any_supported ? TheoremStatus::supported : TheoremStatus::refuted_hypothesis;
}

/// Feasible points of the generated path between every pair of `pts`.
template <typename Accept>
void for_each_generated(const OptProblem& p, const std::vector<Point>& pts,
                        const std::vector<double>& grid, Accept&& accept) {
  PathEvaluator ev{&p.objective, p.eta, p.w, true};
  for (const auto& a : pts)
    for (const auto& b : pts) {
      auto s = ev.prepare(a, b);
      for (double d : grid) accept(a, b, d, PathEvaluator::generated(s, d));
    }
}

}  // namespace detail

/// Validates local = global, uniqueness, and solution-set invexity (and
/// singleton) claims against the grid oracle.
inline OptimalityAnalysis analyze_optimality(const OptProblem& problem,
                                             const CheckConfig& check_config,
                                             const SolverConfig& solver_config) {
  problem.validate();
  solver_config.validate();
  const int n = problem.dimension();
  if (n > 3) throw std::invalid_argument("optimality validation needs dimension <= 3");
  const Domain& box = problem.search_box;

  OptimalityAnalysis out;
  out.oracle = brute_force_min(problem, solver_config.oracle_points, solver_config.cluster_tol,
                               solver_config.eps_feas);
  out.multistart = multistart_solve(problem, solver_config, solver_config.starts);
  TheoremReport& rep = out.report;
  rep.theorem = "optimality";
  rep.conclusion = "local = global, unique / w-invex solution set";
  if (out.oracle.status == SolveStatus::infeasible) {
    rep.status = TheoremStatus::refuted_hypothesis;
    rep.vacuous = true;
    rep.notes.push_back("no feasible grid point");
    return out;
  }
  const double gamma = *out.oracle.oracle_value;
  out.multistart.oracle_value = gamma;
  if (out.multistart.status != SolveStatus::infeasible &&
      std::fabs(out.multistart.best_value - gamma) <= solver_config.local_global_tol)
    out.multistart.status = SolveStatus::optimal_vs_oracle;

  const auto& h = problem.objective;
  Verdict pre = check_class({Family::preinvex, Mode::w}, h, problem.eta, problem.w, box, check_config);
  Verdict strict_pre =
      check_class({Family::strict_preinvex, Mode::w}, h, problem.eta, problem.w, box, check_config);
  Verdict quasi = check_class({Family::prequasi, Mode::w}, h, problem.eta, problem.w, box, check_config);
  Verdict strict_quasi =
      check_class({Family::strict_prequasi, Mode::w}, h, problem.eta, problem.w, box, check_config);
  CheckConfig lifted = check_config;
  lifted.eta_mode = EtaMode::w_lifted;
  Verdict pseudo = check_pre_pseudo(h, problem.eta, problem.w, box, lifted).verdict;

  // eta(z1, w(z2)) != 0 whenever z1 != w(z2), on sampled pairs.
  bool eta_nonzero = true;
  {
    detail::PathEvaluator ev{nullptr, problem.eta, problem.w, true};
    for (const auto& pp : sample_pairs(box, check_config)) {
      auto s = ev.prepare(pp.z1, pp.z2);
      if (pp.z1 == s.base) continue;
      if (std::all_of(s.dir.begin(), s.dir.end(), [](double x) { return x == 0.0; }))
        eta_nonzero = false;
    }
  }

  const auto subset = detail::strided_subset(out.oracle.cluster, 64);
  const auto closed = delta_grid(check_config, DeltaInterval::closed);
  const double diam = out.oracle.spread;
  // A cluster wider than the radius only counts against uniqueness when the
  // exact grid minimum is itself attained at separated points.
  const bool unique_ok =
      diam <= solver_config.cluster_radius || out.oracle.tie_spread <= solver_config.cluster_radius;
  const char* flat_note = "near-minimizer cluster is wide but the grid minimum is attained at one point";

  // (a) local = global.
  TheoremReport a;
  a.theorem = "local-equals-global";
  a.hypotheses = {{"w-preinvex", !pre.refuted()},
                  {"w-pre-pseudo (w-lifted)", !pseudo.refuted()},
                  {"eta-nonzero-off-diagonal", eta_nonzero}};
  a.conclusion = "every descent endpoint attains the oracle value";
  for (const auto& e : out.multistart.endpoints) {
    if (e.residual > solver_config.eps_feas) continue;
    ++a.samples_evaluated;
    if (e.value <= gamma + solver_config.local_global_tol)
      ++a.samples_agreeing;
    else
      a.add_mismatch({e.point, e.point, 0.0, e.value, gamma, "descent stuck above the oracle value"});
  }
  a.conclusion_holds = a.mismatch_count == 0;
  a.metrics["oracle_value"] = gamma;
  a.metrics["multistart_best"] = out.multistart.best_value;
  if (pre.refuted() && pseudo.refuted())
    a.status = TheoremStatus::refuted_hypothesis;
  else
    a.status = a.conclusion_holds ? TheoremStatus::supported
                                  : TheoremStatus::counterexample_to_implication;

  // (b) uniqueness for strictly preinvex objectives.
  TheoremReport b;
  b.theorem = "unique-optimum";
  b.hypotheses = {{"w-strict-preinvex", !strict_pre.refuted()}};
  b.conclusion = "oracle near-minimizer cluster is a single point";
  b.metrics["cluster_diameter"] = diam;
  b.metrics["cluster_points"] = static_cast<double>(out.oracle.cluster.size());
  b.metrics["tie_diameter"] = out.oracle.tie_spread;
  b.conclusion_holds = unique_ok;
  if (diam > solver_config.cluster_radius && unique_ok) b.notes.push_back(flat_note);
  if (strict_pre.refuted())
    b.status = TheoremStatus::refuted_hypothesis;
  else
    b.status = b.conclusion_holds ? TheoremStatus::supported
                                  : TheoremStatus::counterexample_to_implication;

  // Feasible set invexity, sampled over feasible grid points.
  bool feasible_set_invex = true;
  {
    std::vector<Point> feas;
    const int N = solver_config.oracle_points > 0 ? solver_config.oracle_points
                                                  : default_points_per_axis(n);
    detail::for_each_grid_point(box.sampling_box(), N, [&](const Point& z) {
      if (residual(problem, z) <= solver_config.eps_feas) feas.push_back(z);
    });
    detail::for_each_generated(problem, detail::strided_subset(feas, 64), closed,
                               [&](const Point&, const Point&, double, const Point& g) {
                                 if (!contains(box, g, check_config.tol_membership) ||
                                     residual(problem, g) > solver_config.eps_feas)
                                   feasible_set_invex = false;
                               });
  }

  // (c) solution set invex; (d) singleton under strict prequasi.
  TheoremReport c;
  c.theorem = "solution-set-invex";
  c.hypotheses = {{"w-prequasi", !quasi.refuted()}, {"feasible set w-invex", feasible_set_invex}};
  c.conclusion = "generated points between minimizers are feasible minimizers";
  detail::for_each_generated(
      problem, subset, closed, [&](const Point& z1, const Point& z2, double d, const Point& g) {
        ++c.samples_evaluated;
        const bool feas = contains(box, g, check_config.tol_membership) &&
                          residual(problem, g) <= solver_config.eps_feas;
        const double v = feas ? h.scalar(g) : std::numeric_limits<double>::quiet_NaN();
        if (feas && v <= gamma + solver_config.cluster_tol)
          ++c.samples_agreeing;
        else
          c.add_mismatch({z1, z2, d, v, gamma, feas ? "not near-minimal" : "infeasible"});
      });
  c.conclusion_holds = c.mismatch_count == 0;
  c.notes.push_back("paths use eta(z1, w(z2)); one proof writes eta(z2, w(z1))");
  if (quasi.refuted() || !feasible_set_invex)
    c.status = TheoremStatus::refuted_hypothesis;
  else
    c.status = c.conclusion_holds ? TheoremStatus::supported
                                  : TheoremStatus::counterexample_to_implication;

  TheoremReport d;
  d.theorem = "solution-set-singleton";
  d.hypotheses = {{"w-strict-prequasi", !strict_quasi.refuted()}};
  d.conclusion = "oracle near-minimizer cluster is a single point";
  d.metrics["cluster_diameter"] = diam;
  d.metrics["tie_diameter"] = out.oracle.tie_spread;
  d.conclusion_holds = unique_ok;
  if (diam > solver_config.cluster_radius && unique_ok) d.notes.push_back(flat_note);
  if (strict_quasi.refuted())
    d.status = TheoremStatus::refuted_hypothesis;
  else
    d.status = d.conclusion_holds ? TheoremStatus::supported
                                  : TheoremStatus::counterexample_to_implication;

  rep.parts = {std::move(a), std::move(b), std::move(c), std::move(d)};
  for (const auto& p : rep.parts)
    for (const auto& hyp : p.hypotheses) rep.hypotheses.push_back({p.theorem + ": " + hyp.name, hyp.consistent});
  rep.status = detail::combine_parts(rep.parts);
  rep.conclusion_holds = rep.status != TheoremStatus::counterexample_to_implication;
  rep.metrics["oracle_value"] = gamma;
  rep.metrics["multistart_best"] = out.multistart.best_value;
  rep.metrics["cluster_diameter"] = diam;
  rep.metrics["multistart_spread"] = out.multistart.spread;
  return out;
}

inline TheoremReport verify_optimality_theorems(const OptProblem& problem,
                                                const CheckConfig& check_config = {},
                                                const SolverConfig& solver_config = {}) {
  return analyze_optimality(problem, check_config, solver_config).report;
}

}  // namespace winvex
