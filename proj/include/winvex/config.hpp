#pragma once

// Sectioned key/value run configuration. Expression values may be wrapped in
// double quotes; the quotes are stripped.
//
//   [functions]  h, eta, w, phi
//   [domain]     kind (full-space | half-line | box), lower, bounds, sampling_box
//   [check]      class, pair_samples, delta_points, delta_margin, tol_*, seed, eta_mode
//   [theorems]   list, alpha, k, weights
//   [problem]    objective, g1..gN, box, starts, max_iters, ...
//   [output]     path
//   [expect]     <class id> = consistent | refuted

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "winvex/catalog.hpp"

namespace winvex {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string unquote(std::string_view s) {
  std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return t.substr(1, t.size() - 2);
  return t;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace detail

inline double parse_double(std::string_view text, std::string_view what) {
  const std::string t = detail::trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  auto [p, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ConfigError(std::string(what) + ": not a number: '" + t + "'");
  return v;
}

inline long long parse_integer(std::string_view text, std::string_view what) {
  const std::string t = detail::trim(text);
  long long v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ConfigError(std::string(what) + ": not an integer: '" + t + "'");
  return v;
}

/// "lo,hi;lo,hi;..." with one interval per coordinate.
inline std::vector<Interval> parse_box(std::string_view text) {
  std::vector<Interval> box;
  for (const auto& part : detail::split(detail::unquote(text), ';')) {
    auto ends = detail::split(part, ',');
    if (ends.size() != 2) throw ConfigError("box: expected 'lo,hi' per coordinate, got '" + part + "'");
    box.push_back({parse_double(ends[0], "box"), parse_double(ends[1], "box")});
  }
  return box;
}

inline std::string format_box(std::span<const Interval> box);

inline std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (const auto& s : detail::split(detail::unquote(text), ',')) out.push_back(parse_double(s, what));
  return out;
}

inline EtaMode parse_eta_mode(std::string_view s) {
  if (s == "as-written") return EtaMode::as_written;
  if (s == "w-lifted") return EtaMode::w_lifted;
  throw ConfigError("eta_mode must be as-written or w-lifted, got '" + std::string(s) + "'");
}

struct ProblemConfig {
  std::string objective;
  std::vector<std::string> constraints;
  std::optional<std::vector<Interval>> box;
  SolverConfig solver;
};

struct RunConfig {
  std::map<std::string, std::string> functions;
  std::string domain_kind = "full-space";
  std::vector<double> lower;
  std::vector<Interval> bounds;
  std::vector<Interval> sampling_box;
  CheckConfig check;
  std::optional<ClassId> check_class;
  std::vector<std::string> theorems;
  std::optional<double> alpha;
  double k = 3.0;
  std::vector<double> weights = {1.0, 2.0};
  std::optional<ProblemConfig> problem;
  std::optional<std::string> output_path;
  std::vector<std::pair<std::string, Outcome>> expectations;
  std::map<std::string, std::map<std::string, std::string>> echo;

  int dimension() const {
    if (!sampling_box.empty()) return static_cast<int>(sampling_box.size());
    if (!bounds.empty()) return static_cast<int>(bounds.size());
    throw ConfigError("domain: sampling_box is required");
  }

  Domain domain() const {
    try {
      if (domain_kind == "box") {
        auto b = bounds.empty() ? sampling_box : bounds;
        if (b.empty()) throw ConfigError("domain: box needs bounds or sampling_box");
        Domain d = Domain::box(b);
        return sampling_box.empty() ? d : d.with_sampling_box(sampling_box);
      }
      if (sampling_box.empty()) throw ConfigError("domain: sampling_box is required");
      if (domain_kind == "half-line") {
        auto lo = lower.empty() ? std::vector<double>(sampling_box.size(), 0.0) : lower;
        if (lo.size() != sampling_box.size()) throw ConfigError("domain: lower has wrong length");
        return Domain::half_line(lo, sampling_box);
      }
      if (domain_kind == "full-space") return Domain::full_space(sampling_box);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("domain: ") + e.what());
    }
    throw ConfigError("domain: unknown kind '" + domain_kind + "'");
  }

  bool has(const std::string& fn) const { return functions.count(fn) > 0; }

  /// Parses a named function. eta is a two-point map, phi has arity 1.
  FunctionDef function(const std::string& name) const {
    auto it = functions.find(name);
    if (it == functions.end()) throw ConfigError("functions: '" + name + "' is not defined");
    const int n = dimension();
    try {
      if (name == "eta") return expr::parse(it->second, 2 * n, expr::Layout::two_point, name);
      if (name == "phi") return expr::parse(it->second, 1, expr::Layout::single, name);
      return expr::parse(it->second, n, expr::Layout::single, name);
    } catch (const expr::ParseError& e) {
      throw ConfigError("functions." + name + ": " + e.what());
    }
  }

  OptProblem make_problem() const {
    if (!problem) throw ConfigError("no [problem] section");
    const int n = dimension();
    auto parse_scalar = [&](const std::string& text, const std::string& name) {
      try {
        return expr::parse(text, n, expr::Layout::single, name);
      } catch (const expr::ParseError& e) {
        throw ConfigError("problem." + name + ": " + e.what());
      }
    };
    const std::string obj = problem->objective.empty() ? functions.count("h") ? functions.at("h") : ""
                                                       : problem->objective;
    if (obj.empty()) throw ConfigError("problem: objective (or functions.h) is required");
    std::vector<Interval> box = problem->box ? *problem->box : sampling_box;
    try {
      OptProblem p{parse_scalar(obj, "objective"), {}, function("eta"), function("w"), Domain::box(box)};
      for (std::size_t i = 0; i < problem->constraints.size(); ++i)
        p.constraints.push_back(parse_scalar(problem->constraints[i], "g" + std::to_string(i + 1)));
      p.validate();
      return p;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("problem: ") + e.what());
    }
  }
};

inline RunConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, node] : body) c.echo[section][key] = detail::unquote(node.data());
  }
  auto get = [&](const std::string& s, const std::string& k) -> std::optional<std::string> {
    auto sit = c.echo.find(s);
    if (sit == c.echo.end()) return std::nullopt;
    auto kit = sit->second.find(k);
    if (kit == sit->second.end()) return std::nullopt;
    return kit->second;
  };
  auto known = [&](const std::string& s, std::initializer_list<std::string_view> keys) {
    auto sit = c.echo.find(s);
    if (sit == c.echo.end()) return;
    for (const auto& [k, v] : sit->second) {
      bool ok = std::find(keys.begin(), keys.end(), k) != keys.end();
      if (s == "problem" && k.size() > 1 && k[0] == 'g' &&
          std::all_of(k.begin() + 1, k.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        ok = true;
      if (!ok) throw ConfigError(s + ": unknown key '" + k + "'");
    }
  };
  for (const auto& [s, body] : c.echo) {
    static const std::vector<std::string> sections = {"functions", "domain", "check", "theorems",
                                                      "problem", "output", "expect"};
    if (std::find(sections.begin(), sections.end(), s) == sections.end())
      throw ConfigError("config: unknown section [" + s + "]");
  }

  known("functions", {"h", "eta", "w", "phi"});
  if (auto it = c.echo.find("functions"); it != c.echo.end()) c.functions = it->second;

  known("domain", {"kind", "lower", "bounds", "sampling_box", "dimension"});
  if (auto v = get("domain", "kind")) c.domain_kind = *v;
  if (auto v = get("domain", "lower")) c.lower = parse_list(*v, "domain.lower");
  if (auto v = get("domain", "bounds")) c.bounds = parse_box(*v);
  if (auto v = get("domain", "sampling_box")) c.sampling_box = parse_box(*v);
  if (auto v = get("domain", "dimension")) {
    if (parse_integer(*v, "domain.dimension") != c.dimension())
      throw ConfigError("domain.dimension disagrees with sampling_box");
  }

  known("check", {"class", "pair_samples", "delta_points", "delta_margin", "tol_weak", "tol_strict",
                  "tol_membership", "seed", "eta_mode"});
  if (auto v = get("check", "class")) {
    c.check_class = parse_class_id(*v);
    if (!c.check_class) throw ConfigError("check.class: unknown class '" + *v + "'");
  }
  if (auto v = get("check", "pair_samples")) c.check.pair_samples = static_cast<int>(parse_integer(*v, "check.pair_samples"));
  if (auto v = get("check", "delta_points")) c.check.delta_points = static_cast<int>(parse_integer(*v, "check.delta_points"));
  if (auto v = get("check", "delta_margin")) c.check.delta_margin = parse_double(*v, "check.delta_margin");
  if (auto v = get("check", "tol_weak")) c.check.tol_weak = parse_double(*v, "check.tol_weak");
  if (auto v = get("check", "tol_strict")) c.check.tol_strict = parse_double(*v, "check.tol_strict");
  if (auto v = get("check", "tol_membership")) c.check.tol_membership = parse_double(*v, "check.tol_membership");
  if (auto v = get("check", "seed")) c.check.seed = static_cast<std::uint64_t>(parse_integer(*v, "check.seed"));
  if (auto v = get("check", "eta_mode")) c.check.eta_mode = parse_eta_mode(*v);

  known("theorems", {"list", "alpha", "k", "weights"});
  if (auto v = get("theorems", "list"))
    for (auto& t : detail::split(*v, ','))
      if (!t.empty()) c.theorems.push_back(t);
  if (auto v = get("theorems", "alpha")) c.alpha = parse_double(*v, "theorems.alpha");
  if (auto v = get("theorems", "k")) c.k = parse_double(*v, "theorems.k");
  if (auto v = get("theorems", "weights")) c.weights = parse_list(*v, "theorems.weights");

  known("problem", {"objective", "box", "starts", "max_iters", "stall_limit", "eps_feas", "eps_decrease",
                    "local_global_tol", "cluster_tol", "cluster_radius", "oracle_points"});
  if (c.echo.count("problem")) {
    ProblemConfig p;
    if (auto v = get("problem", "objective")) p.objective = *v;
    for (int i = 1;; ++i) {
      auto v = get("problem", "g" + std::to_string(i));
      if (!v) break;
      p.constraints.push_back(*v);
    }
    if (auto v = get("problem", "box")) p.box = parse_box(*v);
    auto& s = p.solver;
    if (auto v = get("problem", "starts")) s.starts = static_cast<int>(parse_integer(*v, "problem.starts"));
    if (auto v = get("problem", "max_iters")) s.max_iters = static_cast<int>(parse_integer(*v, "problem.max_iters"));
    if (auto v = get("problem", "stall_limit")) s.stall_limit = static_cast<int>(parse_integer(*v, "problem.stall_limit"));
    if (auto v = get("problem", "eps_feas")) s.eps_feas = parse_double(*v, "problem.eps_feas");
    if (auto v = get("problem", "eps_decrease")) s.eps_decrease = parse_double(*v, "problem.eps_decrease");
    if (auto v = get("problem", "local_global_tol")) s.local_global_tol = parse_double(*v, "problem.local_global_tol");
    if (auto v = get("problem", "cluster_tol")) s.cluster_tol = parse_double(*v, "problem.cluster_tol");
    if (auto v = get("problem", "cluster_radius")) s.cluster_radius = parse_double(*v, "problem.cluster_radius");
    if (auto v = get("problem", "oracle_points")) s.oracle_points = static_cast<int>(parse_integer(*v, "problem.oracle_points"));
    c.problem = std::move(p);
  }

  known("output", {"path"});
  if (auto v = get("output", "path")) c.output_path = *v;

  if (auto it = c.echo.find("expect"); it != c.echo.end()) {
    for (const auto& [k, v] : it->second) {
      if (!parse_class_id(k)) throw ConfigError("expect: unknown class '" + k + "'");
      if (v == "consistent") c.expectations.emplace_back(k, Outcome::consistent_on_samples);
      else if (v == "refuted") c.expectations.emplace_back(k, Outcome::refuted);
      else throw ConfigError("expect." + k + ": expected consistent or refuted");
    }
  }
  try {
    c.check.validate();
    if (c.problem) c.problem->solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("check: ") + e.what());
  }
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

// ---------------------------------------------------------------------------
// Export.

namespace detail {

inline std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace detail

inline std::string format_box(std::span<const Interval> box) {
  std::string s;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (i) s += ';';
    s += detail::fmt_double(box[i].lo) + "," + detail::fmt_double(box[i].hi);
  }
  return s;
}

/// Config text that reproduces the fixture through the CLI.
inline std::string export_fixture_config(const Fixture& f) {
  std::ostringstream o;
  o << "# fixture " << f.id << "\n\n[functions]\n";
  if (f.h) o << "h = \"" << *f.h << "\"\n";
  o << "eta = \"" << f.eta << "\"\n";
  o << "w = \"" << f.w << "\"\n\n[domain]\n";
  o << "kind = " << to_string(f.domain.kind()) << "\n";
  if (f.domain.kind() == DomainKind::half_line) {
    o << "lower = ";
    for (int i = 0; i < f.dimension; ++i)
      o << (i ? "," : "") << detail::fmt_double(f.domain.bounds()[static_cast<std::size_t>(i)].lo);
    o << "\n";
  }
  o << "sampling_box = \"" << format_box(f.domain.sampling_box()) << "\"\n\n[check]\n";
  o << "pair_samples = " << f.config.pair_samples << "\n";
  o << "delta_points = " << f.config.delta_points << "\n";
  o << "seed = " << f.config.seed << "\n";
  o << "eta_mode = " << to_string(f.config.eta_mode) << "\n";
  if (f.problem) {
    o << "\n[problem]\nobjective = \"" << f.problem->objective << "\"\n";
    for (std::size_t i = 0; i < f.problem->constraints.size(); ++i)
      o << "g" << i + 1 << " = \"" << f.problem->constraints[i] << "\"\n";
    o << "box = \"" << format_box(f.problem->box) << "\"\n";
  }
  o << "\n[expect]\n";
  for (const auto& e : f.expected) {
    if (e.eta_mode && *e.eta_mode != f.config.eta_mode) continue;
    o << to_string(e.cls) << " = " << (e.outcome == Outcome::refuted ? "refuted" : "consistent") << "\n";
  }
  return o.str();
}

}  // namespace winvex
