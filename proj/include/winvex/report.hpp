#pragma once

// JSON report assembly and witness re-verification.

#include "json.hpp"

#include <string>
#include <vector>

#include "winvex/config.hpp"

namespace winvex {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Everything needed to recompute a witness without the original config.
struct CheckContext {
  std::optional<std::string> h;
  std::string eta;
  std::string w;
  int dimension = 1;
  DomainKind kind = DomainKind::full_space;
  std::vector<Interval> bounds;  // may contain infinities
  std::vector<Interval> sampling_box;
  CheckConfig config;

  static CheckContext from(const std::optional<std::string>& h, const std::string& eta,
                           const std::string& w, const Domain& d, const CheckConfig& c) {
    CheckContext x{h, eta, w, d.dimension(), d.kind(), {}, {}, c};
    x.bounds.assign(d.bounds().begin(), d.bounds().end());
    x.sampling_box.assign(d.sampling_box().begin(), d.sampling_box().end());
    return x;
  }

  Domain domain() const {
    switch (kind) {
      case DomainKind::box: return Domain::box(bounds).with_sampling_box(sampling_box);
      case DomainKind::half_line: {
        std::vector<double> lo;
        for (const auto& b : bounds) lo.push_back(b.lo);
        return Domain::half_line(lo, sampling_box);
      }
      case DomainKind::full_space: return Domain::full_space(sampling_box);
    }
    throw std::logic_error("bad domain kind");
  }
};

namespace detail {

inline Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double read_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) return j.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                                          : -std::numeric_limits<double>::infinity();
  return j.get<double>();
}

inline Json vec(const Point& p) {
  Json a = Json::array();
  for (double v : p) a.push_back(number(v));
  return a;
}

inline Point read_vec(const Json& j) {
  Point p;
  for (const auto& v : j) p.push_back(read_number(v));
  return p;
}

inline Json box_json(std::span<const Interval> box) {
  Json a = Json::array();
  for (const auto& b : box) a.push_back(Json::array({number(b.lo), number(b.hi)}));
  return a;
}

inline std::vector<Interval> read_box(const Json& j) {
  std::vector<Interval> out;
  for (const auto& b : j) out.push_back({read_number(b.at(0)), read_number(b.at(1))});
  return out;
}

}  // namespace detail

inline Json to_json(const CheckConfig& c) {
  return Json{{"pair_samples", c.pair_samples},
              {"delta_points", c.delta_points},
              {"delta_margin", c.delta_margin},
              {"tol_weak", c.tol_weak},
              {"tol_strict", c.tol_strict},
              {"tol_membership", c.tol_membership},
              {"seed", c.seed},
              {"eta_mode", to_string(c.eta_mode)}};
}

inline CheckConfig check_config_from_json(const Json& j) {
  CheckConfig c;
  c.pair_samples = j.at("pair_samples").get<int>();
  c.delta_points = j.at("delta_points").get<int>();
  c.delta_margin = j.at("delta_margin").get<double>();
  c.tol_weak = j.at("tol_weak").get<double>();
  c.tol_strict = j.at("tol_strict").get<double>();
  c.tol_membership = j.at("tol_membership").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.eta_mode = parse_eta_mode(j.at("eta_mode").get<std::string>());
  return c;
}

inline Json to_json(const CheckContext& x) {
  return Json{{"h", x.h ? Json(*x.h) : Json(nullptr)},
              {"eta", x.eta},
              {"w", x.w},
              {"dimension", x.dimension},
              {"domain_kind", to_string(x.kind)},
              {"bounds", detail::box_json(x.bounds)},
              {"sampling_box", detail::box_json(x.sampling_box)},
              {"check", to_json(x.config)}};
}

inline CheckContext context_from_json(const Json& j) {
  CheckContext x;
  if (!j.at("h").is_null()) x.h = j.at("h").get<std::string>();
  x.eta = j.at("eta").get<std::string>();
  x.w = j.at("w").get<std::string>();
  x.dimension = j.at("dimension").get<int>();
  const auto kind = j.at("domain_kind").get<std::string>();
  if (kind == "box") x.kind = DomainKind::box;
  else if (kind == "half-line") x.kind = DomainKind::half_line;
  else if (kind == "full-space") x.kind = DomainKind::full_space;
  else throw std::invalid_argument("unknown domain kind in report: " + kind);
  x.bounds = detail::read_box(j.at("bounds"));
  x.sampling_box = detail::read_box(j.at("sampling_box"));
  x.config = check_config_from_json(j.at("check"));
  return x;
}

inline Json to_json(const Witness& w) {
  return Json{{"z1", detail::vec(w.z1)},
              {"z2", detail::vec(w.z2)},
              {"delta", detail::number(w.delta)},
              {"generated_point", detail::vec(w.generated_point)},
              {"lhs", detail::number(w.lhs)},
              {"rhs", detail::number(w.rhs)},
              {"violation", detail::number(w.violation)}};
}

inline Witness witness_from_json(const Json& j) {
  return Witness{detail::read_vec(j.at("z1")),
                 detail::read_vec(j.at("z2")),
                 detail::read_number(j.at("delta")),
                 detail::read_vec(j.at("generated_point")),
                 detail::read_number(j.at("lhs")),
                 detail::read_number(j.at("rhs")),
                 detail::read_number(j.at("violation"))};
}

inline Json to_json(const TheoremReport& r) {
  Json hyps = Json::array();
  for (const auto& h : r.hypotheses) hyps.push_back({{"name", h.name}, {"consistent", h.consistent}});
  Json mism = Json::array();
  for (const auto& m : r.mismatches)
    mism.push_back({{"z1", detail::vec(m.z1)},
                    {"z2", detail::vec(m.z2)},
                    {"delta", detail::number(m.delta)},
                    {"lhs", detail::number(m.lhs)},
                    {"rhs", detail::number(m.rhs)},
                    {"detail", m.detail}});
  Json metrics = Json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = detail::number(v);
  Json parts = Json::array();
  for (const auto& p : r.parts) parts.push_back(to_json(p));
  return Json{{"theorem", r.theorem},
              {"status", to_string(r.status)},
              {"hypotheses", hyps},
              {"conclusion", r.conclusion},
              {"conclusion_holds", r.conclusion_holds},
              {"samples_evaluated", r.samples_evaluated},
              {"samples_agreeing", r.samples_agreeing},
              {"mismatch_count", r.mismatch_count},
              {"mismatches", mism},
              {"vacuous", r.vacuous},
              {"metrics", metrics},
              {"notes", r.notes},
              {"parts", parts}};
}

inline Json to_json(const SolveResult& s) {
  Json ends = Json::array();
  for (const auto& e : s.endpoints)
    ends.push_back({{"point", detail::vec(e.point)},
                    {"value", detail::number(e.value)},
                    {"residual", detail::number(e.residual)},
                    {"accepted_moves", e.accepted_moves}});
  return Json{{"status", to_string(s.status)},
              {"best_point", detail::vec(s.best_point)},
              {"best_value", detail::number(s.best_value)},
              {"residual", detail::number(s.residual)},
              {"starts_attempted", s.starts_attempted},
              {"trace_lengths", s.trace_lengths},
              {"oracle_value", s.oracle_value ? detail::number(*s.oracle_value) : Json(nullptr)},
              {"spread", detail::number(s.spread)},
              {"cluster_size", s.cluster.size()},
              {"endpoints", ends}};
}

inline Json to_json(const PseudoWitnessReport& r) {
  Json bounds = Json::array();
  for (const auto& b : r.bounds)
    bounds.push_back({{"pair", b.pair_index}, {"required_b", detail::number(b.required_b)}});
  return Json{{"eta_mode", to_string(r.eta_mode)},
              {"qualifying_pairs", r.qualifying_pairs},
              {"pairs_with_no_positive_b", r.pairs_with_no_positive_b},
              {"infimum", detail::number(r.infimum)},
              {"bounds", bounds}};
}

/// Accumulates verdicts, counterexamples and theorem results for one run.
class ReportBuilder {
 public:
  explicit ReportBuilder(std::string command, std::uint64_t seed)
      : command_(std::move(command)), seed_(seed) {}

  void echo(const std::string& context, Json config) { echo_[context] = std::move(config); }

  void add_verdict(const std::string& context, const Verdict& v, const CheckContext& ctx) {
    Json j{{"context", context},
           {"class", to_string(v.cls)},
           {"outcome", to_string(v.outcome)},
           {"samples_checked", v.samples_checked},
           {"samples_skipped", v.samples_skipped},
           {"low_confidence", v.low_confidence},
           {"vacuous", v.vacuous},
           {"eta_mode", to_string(v.eta_mode)},
           {"sampling_box", detail::box_json(v.sampling_box)},
           {"counterexample", nullptr}};
    if (v.counterexample) {
      j["counterexample"] = counterexamples_.size();
      counterexamples_.push_back({{"context", context},
                                  {"class", to_string(v.cls)},
                                  {"original", to_json(v.counterexample->original)},
                                  {"shrunk", to_json(v.counterexample->shrunk)},
                                  {"check_context", to_json(ctx)}});
    }
    verdicts_.push_back(std::move(j));
  }

  void add_pseudo_report(const std::string& context, const PseudoWitnessReport& r) {
    Json j = to_json(r);
    j["context"] = context;
    pseudo_.push_back(std::move(j));
  }

  void add_theorem(const std::string& context, const TheoremReport& r) {
    Json j = to_json(r);
    j["context"] = context;
    theorems_.push_back(std::move(j));
  }

  void add_solve(const std::string& context, const std::string& kind, const SolveResult& s) {
    Json j = to_json(s);
    j["context"] = context;
    j["kind"] = kind;
    solves_.push_back(std::move(j));
  }

  void add_fixture(Json j) { fixtures_.push_back(std::move(j)); }
  void add_lattice(Json j) { lattice_.push_back(std::move(j)); }

  Json build() const {
    Json j{{"schema_version", kSchemaVersion},
           {"tool_version", kToolVersion},
           {"command", command_},
           {"seed", seed_},
           {"config_echo", echo_},
           {"verdicts", verdicts_},
           {"counterexamples", counterexamples_},
           {"pseudo_reports", pseudo_},
           {"theorem_reports", theorems_},
           {"solve_results", solves_}};
    if (!lattice_.empty()) j["lattice"] = lattice_;
    if (!fixtures_.empty()) j["fixture_reports"] = fixtures_;
    return j;
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  Json echo_ = Json::object();
  Json verdicts_ = Json::array();
  Json counterexamples_ = Json::array();
  Json pseudo_ = Json::array();
  Json theorems_ = Json::array();
  Json solves_ = Json::array();
  Json fixtures_ = Json::array();
  Json lattice_ = Json::array();
};

inline void add_class_report(ReportBuilder& b, const std::string& context, const ClassReport& rep,
                             const CheckContext& ctx) {
  for (const auto& v : rep.verdicts) b.add_verdict(context, v, ctx);
  b.add_verdict(context, rep.pseudo.verdict, ctx);
  b.add_pseudo_report(context, rep.pseudo.report);
  for (const auto& e : rep.lattice)
    b.add_lattice({{"context", context},
                   {"from", to_string(e.from)},
                   {"to", to_string(e.to)},
                   {"shared_samples", e.shared_samples},
                   {"violations", e.violations}});
}

inline Json fixture_summary(const FixtureReport& r) {
  Json exp = Json::array();
  for (const auto& e : r.expectations)
    exp.push_back({{"class", to_string(e.expectation.cls)},
                   {"expected", to_string(e.expectation.outcome)},
                   {"observed", e.observed ? Json(to_string(*e.observed)) : Json(nullptr)},
                   {"matches", e.matches}});
  return Json{{"id", r.id},
              {"matches", r.matches},
              {"claims", r.claims},
              {"discrepancy_note", r.discrepancy_note ? Json(*r.discrepancy_note) : Json(nullptr)},
              {"sampling_box", detail::box_json(r.sampling_box)},
              {"check", to_json(r.config)},
              {"lattice_internal_error", r.lattice_internal_error},
              {"theorem_counterexamples", r.theorem_counterexamples},
              {"expectations", exp}};
}

/// Adds one catalog run to the report under context = fixture id.
inline void add_fixture_report(ReportBuilder& b, const Fixture& f, const FixtureReport& r) {
  Domain d = f.domain.with_sampling_box(r.sampling_box);
  const auto ctx = CheckContext::from(f.h, f.eta, f.w, d, r.config);
  for (const auto& v : r.verdicts) b.add_verdict(f.id, v, ctx);
  if (r.pseudo) {
    b.add_verdict(f.id, r.pseudo->verdict, ctx);
    b.add_pseudo_report(f.id, r.pseudo->report);
  }
  for (const auto& t : r.theorems) b.add_theorem(f.id, t);
  if (r.optimality) {
    b.add_theorem(f.id, r.optimality->report);
    b.add_solve(f.id, "oracle", r.optimality->oracle);
    b.add_solve(f.id, "multistart", r.optimality->multistart);
  }
  b.add_fixture(fixture_summary(r));
}

struct ReverifyResult {
  std::size_t checked = 0;
  std::size_t confirmed = 0;
  std::vector<std::string> failures;
};

/// Recomputes every stored witness from the report alone.
inline ReverifyResult reverify(const Json& report) {
  ReverifyResult out;
  for (const auto& ce : report.at("counterexamples")) {
    const auto cls_text = ce.at("class").get<std::string>();
    const auto cls = parse_class_id(cls_text);
    const auto ctx = context_from_json(ce.at("check_context"));
    const std::string label = ce.at("context").get<std::string>() + "/" + cls_text;
    if (!cls) {
      out.failures.push_back(label + ": unknown class");
      continue;
    }
    const int n = ctx.dimension;
    const auto eta = expr::parse(ctx.eta, 2 * n, expr::Layout::two_point, "eta");
    const auto w = expr::parse(ctx.w, n, expr::Layout::single, "w");
    std::optional<FunctionDef> h;
    if (ctx.h) h = expr::parse(*ctx.h, n, expr::Layout::single, "h");
    const Domain d = ctx.domain();
    for (const char* which : {"original", "shrunk"}) {
      ++out.checked;
      const Witness stored = witness_from_json(ce.at(which));
      auto again = recompute_witness(*cls, h ? &*h : nullptr, eta, w, d, ctx.config, stored.z1,
                                     stored.z2, stored.delta);
      const double tol = 1e-9 * std::max(1.0, std::fabs(stored.violation));
      if (!again) {
        out.failures.push_back(label + " (" + which + "): witness no longer refutes");
      } else if (!(std::fabs(again->violation - stored.violation) <= tol)) {
        out.failures.push_back(label + " (" + which + "): violation differs");
      } else {
        ++out.confirmed;
      }
    }
  }
  return out;
}

}  // namespace winvex
