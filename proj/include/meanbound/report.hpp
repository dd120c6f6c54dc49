#pragma once

// JSON and CSV serialization. Documents have the shape
//   {tool_version, config, results: [...], failures: [...]}
// and reals are written in shortest round-trip form, so parsing a document
// back yields the same doubles. CSV is a flat projection of `results`.

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanbound/comparison.hpp"
#include "meanbound/harness.hpp"
#include "meanbound/operator_bounds.hpp"
#include "meanbound/scalar_bounds.hpp"
#include "meanbound/version.hpp"

namespace meanbound {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

inline Json to_json(const SuiteConfig& c) {
  return Json{{"seed", c.seed},
              {"trials", c.trials},
              {"scalar_range", {c.scalar_range.lo, c.scalar_range.hi}},
              {"v_range", {c.v_range.lo, c.v_range.hi}},
              {"dims", c.dims},
              {"cond_max", c.cond_max},
              {"depths", c.depths},
              {"families", c.families},
              {"margin", c.margin},
              {"tau_rel", c.tau_rel},
              {"op_tol_factor", c.op_tol_factor},
              {"grid", c.grid},
              {"threads", c.threads}};
}

inline SuiteConfig suite_config_from_json(const Json& j) {
  SuiteConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.trials = j.at("trials").get<int>();
  c.scalar_range = {j.at("scalar_range").at(0).get<double>(), j.at("scalar_range").at(1).get<double>()};
  c.v_range = {j.at("v_range").at(0).get<double>(), j.at("v_range").at(1).get<double>()};
  c.dims = j.at("dims").get<std::vector<int>>();
  c.cond_max = j.at("cond_max").get<double>();
  c.depths = j.at("depths").get<std::vector<int>>();
  c.families = j.at("families").get<std::vector<std::string>>();
  c.margin = j.at("margin").get<double>();
  c.tau_rel = j.at("tau_rel").get<double>();
  c.op_tol_factor = j.at("op_tol_factor").get<double>();
  c.grid = j.at("grid").get<int>();
  c.threads = j.at("threads").get<int>();
  return c;
}

// ---------------------------------------------------------------------------
// Point reports
// ---------------------------------------------------------------------------

inline Json to_json(const BoundReport& r) {
  Json inputs{{"a", r.a}, {"b", r.b}, {"v", r.v}};
  inputs["n"] = r.n ? Json(*r.n) : Json(nullptr);
  return Json{{"family", r.family},
              {"branch", r.branch},
              {"kind", r.kind == BoundKind::upper ? "upper" : "lower"},
              {"inputs", inputs},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"gap", r.gap},
              {"hypothesis_ok", r.hypothesis_ok},
              {"holds", r.holds}};
}

inline BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  r.family = j.at("family").get<std::string>();
  r.branch = j.at("branch").get<std::string>();
  r.kind = j.at("kind").get<std::string>() == "lower" ? BoundKind::lower : BoundKind::upper;
  const Json& in = j.at("inputs");
  r.a = in.at("a").get<double>();
  r.b = in.at("b").get<double>();
  r.v = in.at("v").get<double>();
  if (!in.at("n").is_null()) r.n = in.at("n").get<int>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.gap = j.at("gap").get<double>();
  r.hypothesis_ok = j.at("hypothesis_ok").get<bool>();
  r.holds = j.at("holds").get<bool>();
  return r;
}

inline Json to_json(const OperatorBoundReport& r) {
  return Json{{"family", r.family},
              {"branch", r.branch},
              {"inputs",
               {{"v", r.v}, {"n", r.n}, {"dim", r.dim}, {"fingerprint_a", r.fingerprint_a},
                {"fingerprint_b", r.fingerprint_b}}},
              {"min_eig_gap", r.min_eig_gap},
              {"gap", r.min_eig_gap},
              {"tol", r.tol},
              {"hypothesis_ok", r.hypothesis_ok},
              {"holds", r.holds},
              {"degenerate", r.degenerate},
              {"sharp_regime", r.sharp_regime}};
}

inline OperatorBoundReport operator_report_from_json(const Json& j) {
  OperatorBoundReport r;
  r.family = j.at("family").get<std::string>();
  r.branch = j.at("branch").get<std::string>();
  const Json& in = j.at("inputs");
  r.v = in.at("v").get<double>();
  r.n = in.at("n").get<int>();
  r.dim = in.at("dim").get<std::size_t>();
  r.fingerprint_a = in.at("fingerprint_a").get<std::string>();
  r.fingerprint_b = in.at("fingerprint_b").get<std::string>();
  r.min_eig_gap = j.at("min_eig_gap").get<double>();
  r.tol = j.at("tol").get<double>();
  r.hypothesis_ok = j.at("hypothesis_ok").get<bool>();
  r.holds = j.at("holds").get<bool>();
  r.degenerate = j.at("degenerate").get<bool>();
  r.sharp_regime = j.at("sharp_regime").get<bool>();
  return r;
}

inline Json to_json(const GapBoundEntry& e, const ComparisonReport& c) {
  return Json{{"family", e.family},
              {"branch", e.branch},
              {"name", e.name},
              {"inputs", {{"a", c.a}, {"b", c.b}, {"v", c.v}, {"n", e.n}}},
              {"gap_bound", e.value},
              {"true_gap", c.true_gap},
              {"hypothesis_ok", e.hypothesis_ok}};
}

inline Json to_json(const ComparisonReport& c) {
  Json results = Json::array();
  for (const auto& e : c.entries) results.push_back(to_json(e, c));
  Json dom = Json::array();
  for (const auto& d : c.dominance)
    dom.push_back({{"tighter", d.tighter}, {"looser", d.looser}, {"margin", d.margin}});
  return Json{{"results", results}, {"dominance", dom}};
}

// ---------------------------------------------------------------------------
// Suite reports
// ---------------------------------------------------------------------------

inline Json to_json(const SuiteEntry& e) {
  return Json{{"suite", e.suite},
              {"family", e.family},
              {"branch", e.branch},
              {"trials", e.trials},
              {"passes", e.passes},
              {"failures", e.failures},
              {"skips", e.skips},
              {"worst_gap", e.worst_gap ? Json(*e.worst_gap) : Json(nullptr)}};
}

inline SuiteEntry suite_entry_from_json(const Json& j) {
  SuiteEntry e;
  e.suite = j.at("suite").get<std::string>();
  e.family = j.at("family").get<std::string>();
  e.branch = j.at("branch").get<std::string>();
  e.trials = j.at("trials").get<std::int64_t>();
  e.passes = j.at("passes").get<std::int64_t>();
  e.failures = j.at("failures").get<std::int64_t>();
  e.skips = j.at("skips").get<std::int64_t>();
  if (!j.at("worst_gap").is_null()) e.worst_gap = j.at("worst_gap").get<double>();
  return e;
}

inline Json to_json(const FailureRecord& f) {
  return Json{{"suite", f.suite},
              {"family", f.family},
              {"branch", f.branch},
              {"trial", f.trial},
              {"inputs", {{"a", f.a}, {"b", f.b}, {"v", f.v}, {"n", f.n}, {"dim", f.dim}}},
              {"lhs", f.lhs},
              {"rhs", f.rhs},
              {"gap", f.gap},
              {"tol", f.tol},
              {"hypothesis_ok", f.hypothesis_ok},
              {"holds", f.holds},
              {"cause", f.cause}};
}

inline FailureRecord failure_from_json(const Json& j) {
  FailureRecord f;
  f.suite = j.at("suite").get<std::string>();
  f.family = j.at("family").get<std::string>();
  f.branch = j.at("branch").get<std::string>();
  f.trial = j.at("trial").get<std::int64_t>();
  // Non-finite values serialize as null.
  auto real = [](const Json& x) { return x.is_null() ? std::nan("") : x.get<double>(); };
  const Json& in = j.at("inputs");
  f.a = real(in.at("a"));
  f.b = real(in.at("b"));
  f.v = real(in.at("v"));
  f.n = in.at("n").get<int>();
  f.dim = in.at("dim").get<int>();
  f.lhs = real(j.at("lhs"));
  f.rhs = real(j.at("rhs"));
  f.gap = real(j.at("gap"));
  f.tol = real(j.at("tol"));
  f.hypothesis_ok = j.at("hypothesis_ok").get<bool>();
  f.holds = j.at("holds").get<bool>();
  f.cause = j.at("cause").get<std::string>();
  return f;
}

/// Wraps results in the top-level document.
inline Json make_document(Json config, Json results, Json failures = Json::array()) {
  return Json{{"tool_version", kToolVersion},
              {"config", std::move(config)},
              {"results", std::move(results)},
              {"failures", std::move(failures)}};
}

inline Json to_json(const SuiteReport& r) {
  Json results = Json::array();
  for (const auto& e : r.entries) results.push_back(to_json(e));
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back(to_json(f));
  Json doc = make_document(to_json(r.config), std::move(results), std::move(failures));
  doc["total_failures"] = r.total_failures();
  doc["wall_time_s"] = r.wall_time_s;
  return doc;
}

inline SuiteReport suite_report_from_json(const Json& j) {
  SuiteReport r;
  r.config = suite_config_from_json(j.at("config"));
  for (const auto& e : j.at("results")) r.entries.push_back(suite_entry_from_json(e));
  for (const auto& f : j.at("failures")) r.failures.push_back(failure_from_json(f));
  r.wall_time_s = j.value("wall_time_s", 0.0);
  return r;
}

/// The document without its wall-time field; two runs with the same config
/// serialize identically under this view.
inline std::string deterministic_dump(Json doc) {
  doc.erase("wall_time_s");
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// %.17g, which reads back to the same double.
inline std::string csv_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return csv_real(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return v.dump();
}

inline void flatten(const Json& obj, const std::string& prefix, Json& out) {
  for (const auto& [k, v] : obj.items()) {
    if (v.is_object()) flatten(v, prefix + k + ".", out);
    else out[prefix + k] = v;
  }
}

}  // namespace detail

/// One header line plus one row per element of `results`; nested objects
/// become dotted column names. Rows are assumed to share a schema.
inline void write_csv(std::ostream& os, const Json& results) {
  if (results.empty()) return;
  std::vector<Json> rows;
  for (const auto& r : results) {
    Json flat = Json::object();
    detail::flatten(r, "", flat);
    rows.push_back(std::move(flat));
  }
  bool first = true;
  for (const auto& [k, v] : rows.front().items()) {
    os << (first ? "" : ",") << k;
    first = false;
  }
  os << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [k, v] : rows.front().items()) {
      os << (first ? "" : ",") << (row.contains(k) ? detail::csv_field(row[k]) : "");
      first = false;
    }
    os << '\n';
  }
}

}  // namespace meanbound
