#pragma once

// Command-line front end. run() never calls exit(); it returns the process
// exit code (0 consistent/supported, 1 refuted/mismatch, 2 usage error).

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "winvex/report.hpp"

namespace winvex::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<int> delta_points;
  std::optional<std::string> box;
  std::optional<std::string> eta_mode;
  std::optional<std::string> out_path;
  bool json = false;
};

namespace detail {

using winvex::detail::fmt_double;

inline std::string fmt_point(const Point& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + fmt_double(p[i]);
  return s + "]";
}

inline void print_witness(std::ostream& out, const char* label, const Witness& w) {
  out << "  " << label << ": z1=" << fmt_point(w.z1) << " z2=" << fmt_point(w.z2)
      << " delta=" << fmt_double(w.delta) << " generated=" << fmt_point(w.generated_point)
      << " lhs=" << fmt_double(w.lhs) << " rhs=" << fmt_double(w.rhs)
      << " violation=" << fmt_double(w.violation) << "\n";
}

inline void print_verdict(std::ostream& out, const Verdict& v) {
  out << to_string(v.cls) << ": " << to_string(v.outcome) << " (" << v.samples_checked
      << " samples, " << v.samples_skipped << " skipped";
  if (v.vacuous) out << ", vacuous";
  if (v.low_confidence) out << ", low confidence";
  out << ")\n";
  if (v.counterexample) {
    print_witness(out, "witness", v.counterexample->shrunk);
    print_witness(out, "first found", v.counterexample->original);
  }
}

inline void print_theorem(std::ostream& out, const TheoremReport& r, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  out << pad << r.theorem << ": " << to_string(r.status);
  if (r.vacuous) out << " (vacuous)";
  out << "  [" << r.samples_agreeing << "/" << r.samples_evaluated << " samples agree";
  if (r.mismatch_count) out << ", " << r.mismatch_count << " mismatches";
  out << "]\n";
  for (const auto& h : r.hypotheses)
    out << pad << "  hypothesis " << h.name << ": " << (h.consistent ? "consistent" : "refuted") << "\n";
  for (const auto& n : r.notes) out << pad << "  note: " << n << "\n";
  for (const auto& p : r.parts) print_theorem(out, p, indent + 2);
}

inline void print_solve(std::ostream& out, const char* label, const SolveResult& s) {
  out << label << ": " << to_string(s.status);
  if (s.status != SolveStatus::infeasible)
    out << " best=" << fmt_double(s.best_value) << " at " << fmt_point(s.best_point)
        << " residual=" << fmt_double(s.residual);
  if (s.oracle_value) out << " oracle=" << fmt_double(*s.oracle_value);
  if (s.starts_attempted) out << " starts=" << s.starts_attempted << " spread=" << fmt_double(s.spread);
  out << "\n";
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

}  // namespace detail

/// Loaded config with command-line overrides applied.
inline RunConfig resolve_config(const CommonOptions& o, bool required) {
  RunConfig c;
  if (!o.config_path.empty())
    c = load_config(o.config_path);
  else if (required)
    throw UsageError("--config is required");
  if (o.seed) c.check.seed = *o.seed;
  if (o.samples) c.check.pair_samples = *o.samples;
  if (o.delta_points) c.check.delta_points = *o.delta_points;
  if (o.box) c.sampling_box = parse_box(*o.box);
  if (o.eta_mode) c.check.eta_mode = parse_eta_mode(*o.eta_mode);
  if (o.out_path) c.output_path = *o.out_path;
  if (c.problem) c.problem->solver.seed = c.check.seed;
  try {
    c.check.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline Json echo_json(const RunConfig& c) {
  Json j = Json::object();
  for (const auto& [s, kv] : c.echo) {
    Json section = Json::object();
    for (const auto& [k, v] : kv) section[k] = v;
    j[s] = section;
  }
  j["effective_check"] = to_json(c.check);
  j["effective_sampling_box"] = winvex::detail::box_json(c.sampling_box);
  return j;
}

inline CheckContext context_of(const RunConfig& c, bool with_h) {
  std::optional<std::string> h;
  if (with_h && c.has("h")) h = c.functions.at("h");
  return CheckContext::from(h, c.functions.count("eta") ? c.functions.at("eta") : "",
                            c.functions.count("w") ? c.functions.at("w") : "", c.domain(), c.check);
}

/// Emits text or JSON to `out` and the JSON to the output path if any.
inline void emit(const CommonOptions& o, const std::optional<std::string>& path, const Json& report,
                 const std::string& text, std::ostream& out) {
  const std::string dumped = report.dump(2) + "\n";
  if (o.json)
    out << dumped;
  else
    out << text;
  if (path) detail::write_file(*path, dumped);
}

inline int cmd_check(const CommonOptions& o, const std::string& class_text, std::ostream& out) {
  RunConfig c = resolve_config(o, true);
  std::optional<ClassId> cls = c.check_class;
  if (!class_text.empty()) {
    cls = parse_class_id(class_text);
    if (!cls) throw UsageError("unknown class '" + class_text + "'");
  }
  if (!cls) throw UsageError("no class given (use --class or check.class)");
  const Domain d = c.domain();
  const auto eta = c.function("eta");
  const auto w = c.function("w");
  ReportBuilder b("check", c.check.seed);
  b.echo("run", echo_json(c));
  std::ostringstream text;
  Verdict v;
  if (cls->family == Family::set_invex) {
    v = check_set_invex(d, eta, w, c.check, cls->mode);
    b.add_verdict("run", v, context_of(c, false));
  } else if (cls->family == Family::pre_pseudo) {
    auto r = check_pre_pseudo(c.function("h"), eta, w, d, c.check);
    v = r.verdict;
    b.add_verdict("run", v, context_of(c, true));
    b.add_pseudo_report("run", r.report);
    text << "eta mode: " << to_string(c.check.eta_mode) << ", qualifying pairs "
         << r.report.qualifying_pairs << ", inf required b " << detail::fmt_double(r.report.infimum) << "\n";
  } else {
    v = check_class(*cls, c.function("h"), eta, w, d, c.check);
    b.add_verdict("run", v, context_of(c, true));
  }
  detail::print_verdict(text, v);
  emit(o, c.output_path, b.build(), text.str(), out);
  return v.refuted() ? 1 : 0;
}

inline int cmd_set_check(const CommonOptions& o, const std::string& mode, std::ostream& out) {
  RunConfig c = resolve_config(o, true);
  std::vector<Mode> modes;
  if (mode == "w") modes = {Mode::w};
  else if (mode == "classical") modes = {Mode::classical};
  else if (mode == "both") modes = {Mode::w, Mode::classical};
  else throw UsageError("--mode must be w, classical or both");
  const Domain d = c.domain();
  const auto eta = c.function("eta");
  const auto w = c.function("w");
  ReportBuilder b("set-check", c.check.seed);
  b.echo("run", echo_json(c));
  std::ostringstream text;
  bool refuted = false;
  for (Mode m : modes) {
    auto v = check_set_invex(d, eta, w, c.check, m);
    refuted |= v.refuted();
    b.add_verdict("run", v, context_of(c, false));
    detail::print_verdict(text, v);
  }
  emit(o, c.output_path, b.build(), text.str(), out);
  return refuted ? 1 : 0;
}

inline int cmd_classify(const CommonOptions& o, std::ostream& out) {
  RunConfig c = resolve_config(o, true);
  const Domain d = c.domain();
  auto rep = classify(c.function("h"), c.function("eta"), c.function("w"), d, c.check);
  ReportBuilder b("classify", c.check.seed);
  b.echo("run", echo_json(c));
  add_class_report(b, "run", rep, context_of(c, true));
  std::ostringstream text;
  for (const auto& v : rep.verdicts) detail::print_verdict(text, v);
  text << "(eta mode " << to_string(c.check.eta_mode) << ") ";
  detail::print_verdict(text, rep.pseudo.verdict);
  bool mismatch = false;
  for (const auto& [cls_text, want] : c.expectations) {
    const Verdict* v = rep.find(*parse_class_id(cls_text));
    if (v && v->outcome != want) {
      mismatch = true;
      text << "expectation mismatch: " << cls_text << " expected " << to_string(want) << "\n";
    }
  }
  if (rep.internal_error) text << "internal error: class lattice violated on shared samples\n";
  emit(o, c.output_path, b.build(), text.str(), out);
  return rep.internal_error || mismatch ? 1 : 0;
}

inline const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names = {
      "epigraph", "level-set",      "argmin",         "pseudo-implication", "scale",
      "sum",      "weighted-sum",   "compose-convex", "compose-increasing", "optimality"};
  return names;
}

inline int cmd_theorems(const CommonOptions& o, std::vector<std::string> selected, std::ostream& out) {
  RunConfig c = resolve_config(o, true);
  const Domain d = c.domain();
  const auto h = c.function("h");
  const auto eta = c.function("eta");
  const auto w = c.function("w");
  if (selected.empty()) selected = c.theorems;
  if (selected.empty()) {
    selected = {"epigraph", "level-set", "pseudo-implication", "scale", "sum", "weighted-sum"};
    if (d.dimension() <= 3) selected.insert(selected.begin() + 2, "argmin");
    if (c.has("phi")) selected.push_back("compose-convex");
    if (c.problem && d.dimension() <= 3) selected.push_back("optimality");
  }
  ReportBuilder b("theorems", c.check.seed);
  b.echo("run", echo_json(c));
  std::ostringstream text;
  bool counterexample = false;
  for (const auto& name : selected) {
    TheoremReport r;
    if (name == "epigraph") {
      r = epigraph_check(h, eta, w, d, c.check);
    } else if (name == "level-set") {
      r = level_set_check(h, eta, w, d, c.alpha ? *c.alpha : h.scalar(d.center()), c.check);
    } else if (name == "argmin") {
      r = argmin_set_check(h, eta, w, d, c.check);
    } else if (name == "pseudo-implication") {
      r = pseudo_implication_check(h, eta, w, d, c.check);
    } else if (name == "scale") {
      r = check_scale(h, c.k, eta, w, d, c.check);
    } else if (name == "sum") {
      r = check_sum(h, h, eta, w, d, c.check);
    } else if (name == "weighted-sum") {
      std::vector<FunctionDef> hs(c.weights.size(), h);
      r = check_weighted_sum(hs, c.weights, eta, w, d, c.check);
    } else if (name == "compose-convex" || name == "compose-increasing") {
      r = check_compose(c.function("phi"), h,
                        name == "compose-convex" ? ClosureKind::compose_convex
                                                 : ClosureKind::compose_increasing,
                        eta, w, d, c.check);
    } else if (name == "optimality") {
      auto a = analyze_optimality(c.make_problem(), c.check, c.problem->solver);
      b.add_solve("run", "oracle", a.oracle);
      b.add_solve("run", "multistart", a.multistart);
      r = std::move(a.report);
    } else {
      throw UsageError("unknown theorem '" + name + "'");
    }
    counterexample |= r.status == TheoremStatus::counterexample_to_implication;
    b.add_theorem("run", r);
    detail::print_theorem(text, r);
  }
  emit(o, c.output_path, b.build(), text.str(), out);
  return counterexample ? 1 : 0;
}

inline int cmd_optimize(const CommonOptions& o, std::ostream& out) {
  RunConfig c = resolve_config(o, true);
  if (!c.problem) throw ConfigError("optimize needs a [problem] section");
  const OptProblem p = c.make_problem();
  ReportBuilder b("optimize", c.check.seed);
  b.echo("run", echo_json(c));
  std::ostringstream text;
  int code = 0;
  if (p.dimension() <= 3) {
    auto a = analyze_optimality(p, c.check, c.problem->solver);
    b.add_solve("run", "multistart", a.multistart);
    b.add_solve("run", "oracle", a.oracle);
    b.add_theorem("run", a.report);
    detail::print_solve(text, "multistart", a.multistart);
    detail::print_solve(text, "oracle", a.oracle);
    detail::print_theorem(text, a.report);
    if (a.multistart.status == SolveStatus::infeasible ||
        a.report.status == TheoremStatus::counterexample_to_implication)
      code = 1;
  } else {
    auto s = multistart_solve(p, c.problem->solver, c.problem->solver.starts);
    b.add_solve("run", "multistart", s);
    detail::print_solve(text, "multistart", s);
    if (s.status == SolveStatus::infeasible) code = 1;
  }
  emit(o, c.output_path, b.build(), text.str(), out);
  return code;
}

inline int cmd_catalog(const CommonOptions& o, const std::string& action, const std::string& id,
                       bool all, const std::string& dir, std::ostream& out) {
  if (action == "list") {
    for (const auto& f : list_fixtures()) {
      out << f.id;
      for (const auto& cl : f.claims) out << "  | " << cl;
      if (f.discrepancy_note) out << "  | discrepancy noted";
      out << "\n";
    }
    return 0;
  }
  if (action == "export") {
    if (dir.empty()) throw UsageError("catalog export needs --dir");
    std::filesystem::create_directories(dir);
    for (const auto& f : list_fixtures()) {
      const auto path = (std::filesystem::path(dir) / (f.id + ".cfg")).string();
      detail::write_file(path, export_fixture_config(f));
      out << path << "\n";
    }
    return 0;
  }
  if (action != "run") throw UsageError("catalog action must be list, run or export");
  if (all == !id.empty()) throw UsageError("catalog run needs exactly one of <id> or --all");

  FixtureOverrides ov;
  ov.seed = o.seed;
  ov.pair_samples = o.samples;
  ov.delta_points = o.delta_points;
  if (o.eta_mode) ov.eta_mode = parse_eta_mode(*o.eta_mode);
  if (o.box) ov.box = parse_box(*o.box);

  std::vector<const Fixture*> todo;
  if (all)
    for (const auto& f : list_fixtures()) todo.push_back(&f);
  else
    todo.push_back(&find_fixture(id));

  ReportBuilder b(all ? "catalog run --all" : "catalog run " + id, o.seed.value_or(0));
  std::ostringstream text;
  bool mismatch = false;
  for (const Fixture* f : todo) {
    auto r = run_fixture(*f, ov);
    add_fixture_report(b, *f, r);
    mismatch |= !r.matches;
    text << f->id << ": " << (r.matches ? "matches expectations" : "MISMATCH") << "\n";
    for (const auto& e : r.expectations) {
      text << "  " << to_string(e.expectation.cls) << ": expected " << to_string(e.expectation.outcome);
      if (e.observed) text << ", observed " << to_string(*e.observed);
      else text << ", not run in this eta mode";
      text << (e.matches ? "" : "  <-- mismatch") << "\n";
    }
    if (r.discrepancy_note) text << "  discrepancy: " << *r.discrepancy_note << "\n";
    for (const auto& t : r.theorems) detail::print_theorem(text, t, 2);
    if (r.optimality) detail::print_theorem(text, r.optimality->report, 2);
  }
  emit(o, o.out_path, b.build(), text.str(), out);
  return mismatch ? 1 : 0;
}

inline int cmd_report(const CommonOptions& o, const std::string& in_path, bool do_reverify,
                      std::ostream& out) {
  std::ifstream f(in_path);
  if (!f) throw ConfigError("cannot open report '" + in_path + "'");
  Json rep;
  try {
    rep = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!rep.contains("schema_version") || rep["schema_version"] != kSchemaVersion)
    throw ConfigError("unsupported report schema_version");
  std::ostringstream text;
  text << "command: " << rep.value("command", "") << "  seed: " << rep.value("seed", 0) << "\n";
  for (const auto& v : rep.at("verdicts"))
    text << v.at("context").get<std::string>() << " " << v.at("class").get<std::string>() << ": "
         << v.at("outcome").get<std::string>() << "\n";
  for (const auto& t : rep.at("theorem_reports"))
    text << t.at("context").get<std::string>() << " " << t.at("theorem").get<std::string>() << ": "
         << t.at("status").get<std::string>() << "\n";
  int code = 0;
  if (do_reverify) {
    auto r = reverify(rep);
    text << "reverified " << r.confirmed << "/" << r.checked << " witnesses\n";
    for (const auto& e : r.failures) text << "  " << e << "\n";
    if (!r.failures.empty()) code = 1;
    rep["reverify"] = {{"checked", r.checked}, {"confirmed", r.confirmed}, {"failures", r.failures}};
  }
  emit(o, o.out_path, rep, text.str(), out);
  return code;
}

/// Entry point. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampling checks for w-invex sets and generalized preinvex functions", "winvex"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  CommonOptions o;
  app.add_option("--config", o.config_path, "Run configuration file");
  app.add_option("--seed", o.seed, "Sampling seed");
  app.add_option("--samples", o.samples, "Number of (z1, z2) pairs");
  app.add_option("--delta-points", o.delta_points, "Points on the delta grid");
  app.add_option("--box", o.box, "Sampling box \"lo,hi;lo,hi;...\"");
  app.add_option("--eta-mode", o.eta_mode, "Pseudo check base: as-written or w-lifted")
      ->check(CLI::IsMember({"as-written", "w-lifted"}));
  app.add_option("--out", o.out_path, "Write the JSON report here");
  app.add_flag("--json", o.json, "Print the JSON report instead of text");

  std::string class_text;
  auto* check = app.add_subcommand("check", "Check one class");
  check->add_option("--class", class_text, "Class id, e.g. w-preinvex");

  auto* classify_cmd = app.add_subcommand("classify", "Check every class on shared samples");

  std::string mode = "w";
  auto* set_check = app.add_subcommand("set-check", "Check w-invexity of the domain");
  set_check->add_option("--mode", mode, "w, classical or both");

  std::vector<std::string> theorems;
  auto* thm = app.add_subcommand("theorems", "Run the theorem checks");
  thm->add_option("--theorem", theorems, "Theorem name (repeatable)");

  auto* opt = app.add_subcommand("optimize", "Solve the configured problem");

  std::string action, fixture_id, dir;
  bool all = false;
  auto* cat = app.add_subcommand("catalog", "Built-in worked examples");
  cat->add_option("action", action, "list, run or export")->required();
  cat->add_option("id", fixture_id, "Fixture id");
  cat->add_flag("--all", all, "Run every fixture");
  cat->add_option("--dir", dir, "Export directory");

  std::string in_path;
  bool do_reverify = false;
  auto* rep = app.add_subcommand("report", "Re-render or re-verify a saved report");
  rep->add_option("--in", in_path, "Report file")->required();
  rep->add_flag("--reverify", do_reverify, "Recompute every stored witness");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (check->parsed()) return cmd_check(o, class_text, out);
    if (classify_cmd->parsed()) return cmd_classify(o, out);
    if (set_check->parsed()) return cmd_set_check(o, mode, out);
    if (thm->parsed()) return cmd_theorems(o, theorems, out);
    if (opt->parsed()) return cmd_optimize(o, out);
    if (cat->parsed()) return cmd_catalog(o, action, fixture_id, all, dir, out);
    if (rep->parsed()) return cmd_report(o, in_path, do_reverify, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace winvex::cli
