#pragma once

// Command-line front end. run_app() is the whole program minus main(), so
// tests can drive it with argument vectors and capture both streams.
//
// Exit codes: 0 inequality holds (or its hypothesis is not met), 1 violation,
// 2 input or configuration error.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meanbound/comparison.hpp"
#include "meanbound/families.hpp"
#include "meanbound/harness.hpp"
#include "meanbound/matrix_io.hpp"
#include "meanbound/operator_bounds.hpp"
#include "meanbound/report.hpp"
#include "meanbound/version.hpp"

namespace meanbound {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "p/q" with integer p, q exactly and divides in double precision;
/// anything else must be a complete decimal literal.
inline double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long p = 0, q = 0;
    const char* b = text.data();
    const char* e = text.data() + text.size();
    std::string_view num(text.data(), slash);
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    auto r1 = std::from_chars(num.data(), num.data() + num.size(), p);
    auto r2 = std::from_chars(b + slash + 1, e, q);
    if (num.empty() || r1.ec != std::errc() || r1.ptr != num.data() + num.size() ||
        r2.ec != std::errc() || r2.ptr != e || slash + 1 == text.size())
      throw input_error("not a fraction: '" + text + "'");
    if (q == 0) throw input_error("zero denominator in '" + text + "'");
    return static_cast<double>(p) / static_cast<double>(q);
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) throw input_error("not a number: '" + text + "'");
  if (!std::isfinite(x)) throw input_error("number must be finite: '" + text + "'");
  return x;
}

namespace detail {

enum class Format { text, json, csv };

inline Format parse_format(const std::string& s) {
  if (s == "text") return Format::text;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw input_error("unknown format: " + s);
}

inline std::string fmt8(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8g", x);
  return buf;
}

inline ScalarTarget resolve_scalar_target(const std::string& family,
                                          const std::optional<std::string>& branch,
                                          const std::optional<std::string>& form) {
  const auto f = parse_scalar_family(detail::canonical_name(family));
  if (!f) {
    if (parse_operator_family(detail::canonical_name(family)))
      throw input_error("'" + family + "' is an operator family; use check-operator");
    throw input_error("unknown family: " + family);
  }
  ScalarTarget t;
  t.family = *f;
  const auto& fi = info(*f);
  if (fi.has_branch) {
    if (!branch) throw input_error(std::string(fi.name) + " requires --branch i|ii");
    const auto br = parse_branch(*branch);
    if (!br) throw input_error("unknown branch: " + *branch);
    t.branch = *br;
  } else if (branch && *branch != "-") {
    throw input_error(std::string(fi.name) + " takes no --branch");
  }
  if (form) {
    if (!fi.has_form) throw input_error(std::string(fi.name) + " takes no --form");
    const auto fm = parse_form(*form);
    if (!fm) throw input_error("unknown form: " + *form);
    t.form = *fm;
  }
  return t;
}

inline void print_bound_text(std::ostream& out, const BoundReport& r) {
  out << "family: " << r.family << '\n'
      << "branch: " << r.branch << '\n'
      << "inputs: a=" << fmt8(r.a) << " b=" << fmt8(r.b) << " v=" << fmt8(r.v);
  if (r.n) out << " n=" << *r.n;
  out << '\n'
      << "lhs: " << fmt8(r.lhs) << '\n'
      << "rhs: " << fmt8(r.rhs) << '\n'
      << "gap: " << fmt8(r.gap) << '\n'
      << "hypothesis_ok: " << (r.hypothesis_ok ? "true" : "false") << '\n'
      << "holds: " << (r.holds ? "true" : "false") << '\n';
}

inline void emit(std::ostream& out, Format fmt, const Json& doc) {
  if (fmt == Format::json) out << doc.dump(2) << '\n';
  else write_csv(out, doc.at("results"));
}

inline Json point_config(double a, double b, double v, std::optional<int> n) {
  Json c{{"a", a}, {"b", b}, {"v", v}};
  c["n"] = n ? Json(*n) : Json(nullptr);
  return c;
}

inline int exit_for(const BoundReport& r) {
  return (!r.hypothesis_ok || r.holds) ? kExitOk : kExitViolation;
}

}  // namespace detail

/// Runs the tool on `args` (without the program name).
inline int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for reverse Young and Heinz inequalities", "meanbound"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kToolVersion);
  std::string format = "text";
  app.add_option("--format", format, "Output format: text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  // Shared point inputs.
  std::string family, a_text, b_text, v_text;
  std::optional<std::string> branch, form;
  std::optional<int> n;

  auto* bound = app.add_subcommand("bound", "Evaluate one scalar inequality at a point");
  bound->add_option("--family", family, "Scalar family")->required();
  bound->add_option("--branch", branch, "Branch i or ii");
  bound->add_option("--form", form, "lemma or proposition (zhao-wu-reverse)");
  bound->add_option("--a", a_text, "a > 0")->required();
  bound->add_option("--b", b_text, "b > 0")->required();
  bound->add_option("--v", v_text, "weight; fractions like 1/8 accepted")->required();
  bound->add_option("--n", n, "depth");

  std::string cs_a, cs_b, cs_v;
  int cs_n = 2;
  std::vector<std::string> cs_families;
  auto* check_scalar = app.add_subcommand("check-scalar", "Evaluate every scalar family at a point");
  check_scalar->add_option("--a", cs_a, "a > 0")->required();
  check_scalar->add_option("--b", cs_b, "b > 0")->required();
  check_scalar->add_option("--v", cs_v, "weight")->required();
  check_scalar->add_option("--n", cs_n, "depth for families that take one")->capture_default_str();
  check_scalar->add_option("--families", cs_families, "restrict to these families")->delimiter(',');

  std::string op_family, op_branch, a_file, b_file, op_v;
  int op_n = 2;
  auto* check_op = app.add_subcommand("check-operator", "Check an operator inequality on two SPD matrices");
  check_op->add_option("--family", op_family, "theorem-t6, theorem-t66, corollary-c3 or corollary-c33")->required();
  check_op->add_option("--branch", op_branch, "i or ii")->required();
  check_op->add_option("--a-file", a_file, "matrix file for A")->required();
  check_op->add_option("--b-file", b_file, "matrix file for B")->required();
  check_op->add_option("--v", op_v, "weight")->required();
  check_op->add_option("--n", op_n, "depth")->capture_default_str();

  std::string cmp_a, cmp_b, cmp_v;
  int cmp_n = 2;
  auto* compare = app.add_subcommand("compare", "Compare reverse gap-bounds at a point");
  compare->add_option("--a", cmp_a, "a > 0")->required();
  compare->add_option("--b", cmp_b, "b > 0")->required();
  compare->add_option("--v", cmp_v, "weight")->required();
  compare->add_option("--n", cmp_n, "extra depth to include")->capture_default_str();

  SuiteConfig cfg;
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
  std::vector<std::string> families;
  std::vector<int> dims, depths;
  std::optional<double> cond_max;
  std::optional<int> threads, grid;
  auto* suite = app.add_subcommand("suite", "Run the seeded verification suites");
  suite->add_option("--config", config_path, "key = value config file");
  suite->add_option("--seed", seed, "seed (MEANBOUND_SEED overrides)");
  suite->add_option("--trials", trials, "trials per family and branch");
  suite->add_option("--families", families, "all, scalar, operator, comparison or family names")
      ->delimiter(',');
  suite->add_option("--dims", dims, "matrix dimensions")->delimiter(',');
  suite->add_option("--depths", depths, "depths n")->delimiter(',');
  suite->add_option("--cond-max", cond_max, "condition number bound");
  suite->add_option("--threads", threads, "worker threads");
  suite->add_option("--grid", grid, "grid points per axis for comparison claims");
  suite->add_option("--out", out_path, "write the JSON report here");

  auto* repro = app.add_subcommand("repro", "Reproduce the a=1, b=16, v=1/8 comparison");

  std::vector<std::string> argv_store{"meanbound"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    const auto fmt = detail::parse_format(format);

    if (*bound) {
      const ScalarTarget t = detail::resolve_scalar_target(family, branch, form);
      const double a = parse_real(a_text), b = parse_real(b_text), v = parse_real(v_text);
      const BoundReport r = evaluate_scalar(t, ScalarPair(a, b), Weight(v), n);
      if (fmt == detail::Format::text) detail::print_bound_text(out, r);
      else detail::emit(out, fmt, make_document(detail::point_config(a, b, v, n), Json::array({to_json(r)})));
      return detail::exit_for(r);
    }

    if (*check_scalar) {
      const double a = parse_real(cs_a), b = parse_real(cs_b), v = parse_real(cs_v);
      const ScalarPair p(a, b);
      const Weight w(v);
      const Depth depth(cs_n);
      for (const auto& f : cs_families)
        if (!parse_scalar_family(detail::canonical_name(f))) throw input_error("unknown family: " + f);
      Json results = Json::array();
      int code = kExitOk;
      for (const auto& t : all_scalar_targets()) {
        const auto& fi = info(t.family);
        if (!cs_families.empty() && !detail::selects(cs_families, "", fi.name)) continue;
        if (fi.min_depth > depth.value()) continue;
        const BoundReport r = evaluate_scalar(t, p, w, fi.min_depth > 0 ? std::optional<int>(depth.value()) : std::nullopt);
        if (detail::exit_for(r) != kExitOk) code = kExitViolation;
        if (fmt == detail::Format::text) {
          out << t.label() << ": gap=" << detail::fmt8(r.gap)
              << " hypothesis_ok=" << (r.hypothesis_ok ? "true" : "false")
              << " holds=" << (r.holds ? "true" : "false") << '\n';
        }
        results.push_back(to_json(r));
      }
      if (fmt != detail::Format::text)
        detail::emit(out, fmt, make_document(detail::point_config(a, b, v, depth.value()), results));
      return code;
    }

    if (*check_op) {
      const auto f = parse_operator_family(detail::canonical_name(op_family));
      if (!f) throw input_error("unknown operator family: " + op_family);
      const auto br = parse_branch(op_branch);
      if (!br) throw input_error("unknown branch: " + op_branch);
      const double v = parse_real(op_v);
      const SpdMatrix a(load_matrix(a_file));
      const SpdMatrix b(load_matrix(b_file));
      const OperatorBoundReport r = check_operator(*f, a, b, Weight(v), Depth(op_n), *br);
      if (fmt == detail::Format::text) {
        out << "family: " << r.family << '\n'
            << "branch: " << r.branch << '\n'
            << "inputs: dim=" << r.dim << " v=" << detail::fmt8(r.v) << " n=" << r.n << '\n'
            << "fingerprints: " << r.fingerprint_a << " " << r.fingerprint_b << '\n'
            << "min_eig_gap: " << detail::fmt8(r.min_eig_gap) << '\n'
            << "tol: " << detail::fmt8(r.tol) << '\n'
            << "degenerate: " << (r.degenerate ? "true" : "false") << '\n'
            << "hypothesis_ok: " << (r.hypothesis_ok ? "true" : "false") << '\n'
            << "holds: " << (r.holds ? "true" : "false") << '\n';
      } else {
        Json cfgj{{"a_file", a_file}, {"b_file", b_file}, {"v", v}, {"n", op_n}};
        detail::emit(out, fmt, make_document(cfgj, Json::array({to_json(r)})));
      }
      return (!r.hypothesis_ok || r.holds) ? kExitOk : kExitViolation;
    }

    if (*compare) {
      const double a = parse_real(cmp_a), b = parse_real(cmp_b), v = parse_real(cmp_v);
      const ComparisonReport c = compare_gap_bounds(ScalarPair(a, b), Weight(v), Depth(cmp_n));
      int code = kExitOk;
      for (const auto& e : c.entries)
        if (e.hypothesis_ok && e.value < c.true_gap - kScalarTauRel * (std::abs(e.value) + std::abs(c.true_gap)))
          code = kExitViolation;
      if (fmt == detail::Format::text) {
        out << "true gap: " << detail::fmt8(c.true_gap) << '\n';
        for (const auto& e : c.entries)
          out << e.name << ": " << detail::fmt8(e.value)
              << (e.hypothesis_ok ? "" : "  (hypothesis not met)") << '\n';
        for (const auto& d : c.dominance)
          out << "tighter: " << d.tighter << " over " << d.looser << " by " << detail::fmt8(d.margin) << '\n';
      } else {
        Json body = to_json(c);
        Json doc = make_document(detail::point_config(a, b, v, cmp_n), body.at("results"));
        doc["dominance"] = body.at("dominance");
        detail::emit(out, fmt, doc);
      }
      return code;
    }

    if (*suite) {
      try {
        if (!config_path.empty()) cfg = load_suite_config(config_path, cfg);
        if (seed) cfg.seed = *seed;
        if (const char* env = std::getenv("MEANBOUND_SEED"); env && *env) {
          apply_config_key(cfg, "seed", env);
        }
        if (trials) {
          if (*trials < 1 || *trials > std::numeric_limits<int>::max())
            throw config_error("trials must be >= 1");
          cfg.trials = static_cast<int>(*trials);
        }
        if (!families.empty()) cfg.families = families;
        if (!dims.empty()) cfg.dims = dims;
        if (!depths.empty()) cfg.depths = depths;
        if (cond_max) cfg.cond_max = *cond_max;
        if (threads) cfg.threads = *threads;
        if (grid) cfg.grid = *grid;
        cfg.validate();
      } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitInputError;
      }
      SuiteReport rep;
      try {
        rep = run_all_suites(cfg);
      } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitInputError;
      }
      const Json doc = to_json(rep);
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw input_error("cannot write report: " + out_path);
        f << doc.dump(2) << '\n';
      }
      if (fmt == detail::Format::text) {
        for (const auto& e : rep.entries) {
          out << e.suite << ' ' << e.family << ' ' << e.branch << " trials=" << e.trials
              << " passes=" << e.passes << " failures=" << e.failures << " skips=" << e.skips
              << " worst_gap=" << (e.worst_gap ? detail::fmt8(*e.worst_gap) : std::string("-")) << '\n';
        }
        out << "total failures: " << rep.total_failures() << '\n';
      } else {
        detail::emit(out, fmt, doc);
      }
      return rep.total_failures() == 0 ? kExitOk : kExitViolation;
    }

    if (*repro) {
      const ScalarPair p(1.0, 16.0);
      const Weight w(0.125);
      const double eq19 = main_reverse_correction(p, w, Depth(2), Branch::i);
      const double eq15 = lemma_sm_correction(p, w, Depth(2), Branch::i);
      constexpr double kReported15 = 6.2892;
      const BoundReport full = theorem_main_reverse(p, w, Depth(2), Branch::i);
      const bool tighter19 = eq19 < eq15 && eq19 < kReported15;
      if (fmt == detail::Format::text) {
        out << "inputs: a=1 b=16 v=1/8\n"
            << "(19): " << detail::fmt8(eq19) << "\n"
            << "(15) recomputed: " << detail::fmt8(eq15) << '\n'
            << "(15) reported: " << detail::fmt8(kReported15) << '\n'
            << "(5) full rhs n=2: " << detail::fmt8(full.rhs) << '\n'
            << "tighter: " << (tighter19 ? "(19)" : "(15)") << '\n';
      } else {
        Json results = Json::array();
        auto row = [&](const char* label, const char* fam, const char* br, double val, const char* source) {
          results.push_back({{"family", fam}, {"branch", br}, {"label", label},
                             {"inputs", {{"a", 1.0}, {"b", 16.0}, {"v", 0.125}, {"n", 2}}},
                             {"gap_bound", val}, {"source", source}});
        };
        row("(19)", "theorem-main-reverse", "i", eq19, "recomputed");
        row("(15) recomputed", "lemma-sm-reverse", "i", eq15, "recomputed");
        row("(15) reported", "lemma-sm-reverse", "i", kReported15, "reported");
        row("(5) full rhs n=2", "theorem-main-reverse", "i", full.rhs, "recomputed");
        Json doc = make_document(detail::point_config(1.0, 16.0, 0.125, 2), results);
        doc["tighter"] = tighter19 ? "(19)" : "(15)";
        detail::emit(out, fmt, doc);
      }
      return tighter19 ? kExitOk : kExitViolation;
    }
  } catch (const numerics_error& e) {
    err << "numerical error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitInputError;
  } catch (const matrix_error& e) {
    err << "matrix error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace meanbound
