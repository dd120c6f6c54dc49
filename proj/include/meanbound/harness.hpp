#pragma once

// Seeded verification suites. Each trial draws from its own substream keyed
// by (seed, suite, target, trial), so results do not depend on execution
// order or thread count.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "meanbound/comparison.hpp"
#include "meanbound/families.hpp"
#include "meanbound/matrix.hpp"
#include "meanbound/operator_bounds.hpp"
#include "meanbound/rng.hpp"

namespace meanbound {

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class empty_region_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  int trials = 1000;
  Interval scalar_range{1e-3, 1e3};
  Interval v_range{-6.0, 6.0};
  std::vector<int> dims{1, 2, 4, 8};
  double cond_max = 1e4;
  std::vector<int> depths{1, 2, 3, 4, 5, 6};
  std::vector<std::string> families{"all"};
  double margin = 1e-6;
  double tau_rel = kScalarTauRel;
  double op_tol_factor = kLoewnerTolFactor;
  int grid = 50;
  int threads = 1;

  void validate() const {
    if (trials < 1) throw config_error("trials must be >= 1");
    if (!(scalar_range.lo > 0.0) || !(scalar_range.lo < scalar_range.hi))
      throw config_error("scalar_range must satisfy 0 < lo < hi");
    if (!(v_range.lo < v_range.hi)) throw config_error("v_range must satisfy lo < hi");
    if (dims.empty()) throw config_error("dims must be nonempty");
    for (int d : dims)
      if (d < 1 || d > 64) throw config_error("dims entries must lie in [1, 64]");
    if (!(cond_max >= 1.0)) throw config_error("cond_max must be >= 1");
    if (depths.empty()) throw config_error("depths must be nonempty");
    for (int n : depths)
      if (n < 1 || n > kMaxDepth) throw config_error("depths entries must lie in [1, 30]");
    if (!(margin >= 0.0)) throw config_error("margin must be >= 0");
    if (!(tau_rel >= 0.0) || !(op_tol_factor >= 0.0)) throw config_error("tolerances must be >= 0");
    if (grid < 2) throw config_error("grid must be >= 2");
    if (threads < 1) throw config_error("threads must be >= 1");
    if (families.empty()) throw config_error("families must be nonempty");
  }
};

/// One recorded failure; enough to replay the trial.
struct FailureRecord {
  std::string suite;
  std::string family;
  std::string branch;
  std::int64_t trial = 0;
  double a = 0.0;
  double b = 0.0;
  double v = 0.0;
  int n = 0;
  int dim = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tol = 0.0;
  bool hypothesis_ok = false;
  bool holds = false;
  std::string cause;
};

struct SuiteEntry {
  std::string suite;  ///< scalar | operator | comparison | boundary
  std::string family;
  std::string branch;
  std::int64_t trials = 0;
  std::int64_t passes = 0;
  std::int64_t failures = 0;
  std::int64_t skips = 0;
  std::optional<double> worst_gap;  ///< smallest gap over hypothesis-valid trials
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<SuiteEntry> entries;
  std::vector<FailureRecord> failures;
  double wall_time_s = 0.0;

  std::int64_t total_failures() const {
    std::int64_t f = 0;
    for (const auto& e : entries) f += e.failures;
    return f;
  }

  void append(SuiteReport&& other) {
    for (auto& e : other.entries) entries.push_back(std::move(e));
    for (auto& f : other.failures) failures.push_back(std::move(f));
    wall_time_s += other.wall_time_s;
  }
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Uniform draw of v from the part of `clip` admitted by `region`, keeping
/// distance >= margin from the window endpoints.
inline Weight sample_weight(const Hypothesis& region, const Interval& clip, double margin,
                            Xoshiro256ss& rng) {
  std::vector<Interval> pieces;
  auto keep = [&](double lo, double hi) {
    lo = std::max(lo, clip.lo);
    hi = std::min(hi, clip.hi);
    if (hi > lo) pieces.push_back({lo, hi});
  };
  if (region.kind == Hypothesis::Kind::inside) {
    keep(region.window.lo + margin, region.window.hi - margin);
  } else {
    keep(clip.lo, region.window.lo - margin);
    keep(region.window.hi + margin, clip.hi);
  }
  double total = 0.0;
  for (const auto& p : pieces) total += p.hi - p.lo;
  if (pieces.empty() || !(total > 0.0)) {
    std::ostringstream os;
    os << "weight region is empty after clipping to [" << clip.lo << ", " << clip.hi << "]";
    throw empty_region_error(os.str());
  }
  double t = rng.uniform01() * total;
  for (const auto& p : pieces) {
    const double len = p.hi - p.lo;
    if (t < len) return Weight(p.lo + t);
    t -= len;
  }
  return Weight(pieces.back().hi);
}

/// Q diag(lambda) Q^T with Q orthonormalized from a Gaussian matrix and
/// lambda log-uniform in [1/sqrt(cond_max), sqrt(cond_max)].
inline SpdMatrix random_spd(std::size_t dim, double cond_max, Xoshiro256ss& rng) {
  if (dim < 1) throw std::invalid_argument("random_spd: dim must be >= 1");
  if (!(cond_max >= 1.0)) throw std::invalid_argument("random_spd: cond_max must be >= 1");
  std::vector<double> q(dim * dim);
  for (;;) {
    for (double& x : q) x = rng.normal();
    bool ok = true;
    // Modified Gram-Schmidt on columns.
    for (std::size_t c = 0; c < dim && ok; ++c) {
      for (std::size_t p = 0; p < c; ++p) {
        double dot = 0.0;
        for (std::size_t r = 0; r < dim; ++r) dot += q[r * dim + p] * q[r * dim + c];
        for (std::size_t r = 0; r < dim; ++r) q[r * dim + c] -= dot * q[r * dim + p];
      }
      double norm = 0.0;
      for (std::size_t r = 0; r < dim; ++r) norm += q[r * dim + c] * q[r * dim + c];
      norm = std::sqrt(norm);
      if (norm < 1e-8) {
        ok = false;
        break;
      }
      for (std::size_t r = 0; r < dim; ++r) q[r * dim + c] /= norm;
    }
    if (ok) break;
  }
  const double half = std::sqrt(cond_max);
  EigenDecomp e;
  e.dim = dim;
  e.q = std::move(q);
  e.lambda.resize(dim);
  for (double& l : e.lambda) l = rng.log_uniform(1.0 / half, half);
  return SpdMatrix(e.reconstruct());
}

// ---------------------------------------------------------------------------
// Family selection
// ---------------------------------------------------------------------------

namespace detail {

/// Family identifiers are accepted with '-' or '_' separators.
inline std::string canonical_name(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

inline bool selects(const std::vector<std::string>& families, std::string_view suite,
                    std::string_view name) {
  for (const auto& raw : families) {
    const std::string f = canonical_name(raw);
    if (f == "all" || f == suite || f == name) return true;
    if (auto op = parse_operator_family(f); op && to_string(*op) == name) return true;
  }
  return false;
}

inline std::vector<int> applicable_depths(const std::vector<int>& depths, int min_depth) {
  std::vector<int> out;
  for (int n : depths)
    if (n >= min_depth) out.push_back(n);
  return out;
}

inline constexpr std::uint64_t kScalarSuiteTag = 0x5C;
inline constexpr std::uint64_t kOperatorSuiteTag = 0x0E;
inline constexpr std::uint64_t kBoundarySuiteTag = 0xB0;

/// Runs `jobs` either serially or on `threads` workers; output order is the
/// job order either way.
template <class Job>
std::vector<SuiteReport> run_jobs(const std::vector<Job>& jobs, int threads) {
  std::vector<SuiteReport> out(jobs.size());
  if (threads <= 1 || jobs.size() <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i]();
    return out;
  }
  std::size_t next = 0;
  while (next < jobs.size()) {
    std::vector<std::future<SuiteReport>> running;
    for (int t = 0; t < threads && next < jobs.size(); ++t, ++next)
      running.push_back(std::async(std::launch::async, jobs[next]));
    const std::size_t base = next - running.size();
    for (std::size_t i = 0; i < running.size(); ++i) out[base + i] = running[i].get();
  }
  return out;
}

inline void record_gap(SuiteEntry& e, double gap) {
  if (!e.worst_gap || gap < *e.worst_gap) e.worst_gap = gap;
}

}  // namespace detail

/// Every scalar family name plus the suite-level selectors.
inline bool is_known_family(std::string_view raw) {
  const std::string name = detail::canonical_name(raw);
  if (name == "all" || name == "scalar" || name == "operator" || name == "comparison" ||
      name == "boundary")
    return true;
  if (parse_scalar_family(name)) return true;
  if (parse_operator_family(name)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Scalar suite
// ---------------------------------------------------------------------------

struct ScalarTrial {
  double a = 0.0;
  double b = 0.0;
  double v = 0.0;
  std::optional<int> n;
};

/// Draws the inputs of one scalar trial. When the hypothesis region is empty
/// inside cfg.v_range, v is drawn uniformly from v_range instead (every such
/// trial is then a hypothesis skip).
inline ScalarTrial draw_scalar_trial(const SuiteConfig& cfg, const ScalarTarget& target,
                                     std::int64_t trial) {
  auto rng = Xoshiro256ss::stream(
      cfg.seed, {detail::kScalarSuiteTag, target.tag(), static_cast<std::uint64_t>(trial)});
  ScalarTrial t;
  const int min_depth = info(target.family).min_depth;
  int n = 1;
  if (min_depth > 0) {
    const auto ds = detail::applicable_depths(cfg.depths, min_depth);
    if (ds.empty()) throw config_error(target.label() + ": no applicable depth in config");
    n = ds[static_cast<std::size_t>(trial) % ds.size()];
    t.n = n;
  }
  t.a = rng.log_uniform(cfg.scalar_range.lo, cfg.scalar_range.hi);
  t.b = rng.log_uniform(cfg.scalar_range.lo, cfg.scalar_range.hi);
  try {
    t.v = sample_weight(scalar_hypothesis(target, n), cfg.v_range, cfg.margin, rng).value();
  } catch (const empty_region_error&) {
    t.v = rng.uniform(cfg.v_range.lo, cfg.v_range.hi);
  }
  return t;
}

inline BoundReport replay_scalar_trial(const SuiteConfig& cfg, const ScalarTarget& target,
                                       std::int64_t trial) {
  const ScalarTrial t = draw_scalar_trial(cfg, target, trial);
  return evaluate_scalar(target, ScalarPair(t.a, t.b), Weight(t.v), t.n);
}

inline SuiteReport run_scalar_target(const SuiteConfig& cfg, const ScalarTarget& target) {
  SuiteReport rep;
  SuiteEntry e;
  e.suite = "scalar";
  e.family = std::string(info(target.family).name);
  e.branch = target.selector();
  for (std::int64_t trial = 0; trial < cfg.trials; ++trial) {
    ++e.trials;
    ScalarTrial t;
    try {
      t = draw_scalar_trial(cfg, target, trial);
      BoundReport r = evaluate_scalar(target, ScalarPair(t.a, t.b), Weight(t.v), t.n);
      const double tol = cfg.tau_rel * (std::abs(r.lhs) + std::abs(r.rhs));
      const bool holds = std::isfinite(r.gap) && r.gap >= -tol;
      if (!r.hypothesis_ok) {
        ++e.skips;
        continue;
      }
      detail::record_gap(e, r.gap);
      if (holds) {
        ++e.passes;
        continue;
      }
      ++e.failures;
      rep.failures.push_back({"scalar", e.family, e.branch, trial, t.a, t.b, t.v, t.n.value_or(0),
                              0, r.lhs, r.rhs, r.gap, tol, true, false, "inequality violated"});
    } catch (const std::exception& ex) {
      ++e.failures;
      FailureRecord f;
      f.suite = "scalar";
      f.family = e.family;
      f.branch = e.branch;
      f.trial = trial;
      f.a = t.a;
      f.b = t.b;
      f.v = t.v;
      f.n = t.n.value_or(0);
      f.cause = ex.what();
      rep.failures.push_back(std::move(f));
    }
  }
  rep.entries.push_back(std::move(e));
  return rep;
}

/// Runs every selected scalar family/branch for cfg.trials trials each. A
/// trial fails iff its hypothesis holds and gap < -tau_rel(|lhs|+|rhs|).
inline SuiteReport run_scalar_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::function<SuiteReport()>> jobs;
  for (const auto& target : all_scalar_targets()) {
    if (!detail::selects(cfg.families, "scalar", info(target.family).name)) continue;
    jobs.push_back([&cfg, target] { return run_scalar_target(cfg, target); });
  }
  SuiteReport rep;
  rep.config = cfg;
  for (auto& r : detail::run_jobs(jobs, cfg.threads)) rep.append(std::move(r));
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Operator suite
// ---------------------------------------------------------------------------

struct OperatorTrial {
  std::size_t dim = 1;
  int n = 1;
  double v = 0.0;
  SpdMatrix a;
  SpdMatrix b;
};

inline OperatorTrial draw_operator_trial(const SuiteConfig& cfg, OperatorFamily f, Branch br,
                                         std::int64_t trial) {
  auto rng = Xoshiro256ss::stream(
      cfg.seed, {detail::kOperatorSuiteTag, static_cast<std::uint64_t>(f) * 2 + static_cast<std::uint64_t>(br),
                 static_cast<std::uint64_t>(trial)});
  const auto ds = detail::applicable_depths(cfg.depths, operator_min_depth(f));
  if (ds.empty()) throw config_error(std::string(to_string(f)) + ": no applicable depth in config");
  const std::size_t dim = static_cast<std::size_t>(cfg.dims[static_cast<std::size_t>(trial) % cfg.dims.size()]);
  const int n = ds[static_cast<std::size_t>(trial / static_cast<std::int64_t>(cfg.dims.size())) % ds.size()];
  SpdMatrix a = random_spd(dim, cfg.cond_max, rng);
  SpdMatrix b = random_spd(dim, cfg.cond_max, rng);
  double v;
  try {
    v = sample_weight(operator_hypothesis(f, n, br), cfg.v_range, cfg.margin, rng).value();
  } catch (const empty_region_error&) {
    v = rng.uniform(cfg.v_range.lo, cfg.v_range.hi);
  }
  return {dim, n, v, std::move(a), std::move(b)};
}

inline OperatorBoundReport replay_operator_trial(const SuiteConfig& cfg, OperatorFamily f,
                                                 Branch br, std::int64_t trial) {
  const OperatorTrial t = draw_operator_trial(cfg, f, br, trial);
  return check_operator(f, t.a, t.b, Weight(t.v), Depth(t.n), br);
}

inline SuiteReport run_operator_target(const SuiteConfig& cfg, OperatorFamily f, Branch br) {
  SuiteReport rep;
  SuiteEntry e;
  e.suite = "operator";
  e.family = std::string(to_string(f));
  e.branch = std::string(to_string(br));
  for (std::int64_t trial = 0; trial < cfg.trials; ++trial) {
    ++e.trials;
    FailureRecord fr;
    fr.suite = "operator";
    fr.family = e.family;
    fr.branch = e.branch;
    fr.trial = trial;
    try {
      const OperatorTrial t = draw_operator_trial(cfg, f, br, trial);
      fr.v = t.v;
      fr.n = t.n;
      fr.dim = static_cast<int>(t.dim);
      OperatorBoundReport r = check_operator(f, t.a, t.b, Weight(t.v), Depth(t.n), br);
      if (cfg.op_tol_factor != kLoewnerTolFactor && !r.degenerate) {
        const OperatorSides s = operator_sides(f, t.a, t.b, Weight(t.v), Depth(t.n), br);
        r.tol = cfg.op_tol_factor * (s.lhs.frobenius_norm() + s.rhs.frobenius_norm());
        r.holds = r.min_eig_gap >= -r.tol;
      }
      if (!r.hypothesis_ok) {
        ++e.skips;
        continue;
      }
      detail::record_gap(e, r.min_eig_gap);
      if (r.holds) {
        ++e.passes;
        continue;
      }
      ++e.failures;
      fr.gap = r.min_eig_gap;
      fr.tol = r.tol;
      fr.hypothesis_ok = true;
      fr.cause = "Loewner order violated";
      if (t.dim == 1) {
        fr.a = t.a(0, 0);
        fr.b = t.b(0, 0);
      }
      rep.failures.push_back(std::move(fr));
    } catch (const std::exception& ex) {
      ++e.failures;
      fr.cause = ex.what();
      rep.failures.push_back(std::move(fr));
    }
  }
  rep.entries.push_back(std::move(e));
  return rep;
}

inline SuiteReport run_operator_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::function<SuiteReport()>> jobs;
  for (OperatorFamily f :
       {OperatorFamily::t6, OperatorFamily::t66, OperatorFamily::c3, OperatorFamily::c33}) {
    if (!detail::selects(cfg.families, "operator", to_string(f))) continue;
    for (Branch br : {Branch::i, Branch::ii})
      jobs.push_back([&cfg, f, br] { return run_operator_target(cfg, f, br); });
  }
  SuiteReport rep;
  rep.config = cfg;
  for (auto& r : detail::run_jobs(jobs, cfg.threads)) rep.append(std::move(r));
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison suite: dominance claims, polynomial grids, limits
// ---------------------------------------------------------------------------

/// Outcome of one grid cell: the claim is `tighter <= looser` (up to
/// tau_rel), or a failure cause for checks that are not orderings.
struct ClaimCell {
  double tighter = 0.0;
  double looser = 0.0;
  double scale = 0.0;  ///< tolerance scale; |tighter|+|looser| when zero
  std::string cause;   ///< nonempty marks a failure regardless of ordering
};

struct Claim {
  std::string id;
  std::string description;
  Interval v_window;
  bool ratio_axis = true;  ///< grid over t = b/a in [1e-3, 1e3] (a = 1); else x in [0.1, 11]
  std::function<ClaimCell(double t, double v)> cell;
};

namespace claims {

inline double sq(double x) { return x * x; }

/// Gap-bounds of the numbered inequalities at (a, b) = (1, t).
inline double eq9(double t, double v) {
  return main_reverse_correction(ScalarPair(1.0, t), Weight(v), Depth(3), Branch::i);
}
inline double eq10(double t, double v) {
  return main_reverse_correction(ScalarPair(1.0, t), Weight(v), Depth(3), Branch::ii);
}
inline double eq19(double t, double v) {
  return main_reverse_correction(ScalarPair(1.0, t), Weight(v), Depth(2), Branch::i);
}
inline double eq20(double t, double v) {
  return main_reverse_correction(ScalarPair(1.0, t), Weight(v), Depth(2), Branch::ii);
}
inline double prop(double t, double v) { return proposition_gap_bound(ScalarPair(1.0, t), Weight(v)); }
inline double sm2(double t, double v, Branch br) {
  return lemma_sm_correction(ScalarPair(1.0, t), Weight(v), Depth(2), br);
}

inline ClaimCell order(double tighter, double looser) { return {tighter, looser, 0.0, {}}; }

}  // namespace claims

/// Dyadic dominance claims among reverse bounds, the auxiliary polynomial
/// inequalities, and the index/refinement-sum invariants.
inline std::vector<Claim> dominance_claims() {
  using namespace claims;
  std::vector<Claim> c;
  auto ordering = [&](std::string id, std::string desc, Interval w,
                      std::function<double(double, double)> tight,
                      std::function<double(double, double)> loose) {
    c.push_back({std::move(id), std::move(desc), w, true,
                 [tight, loose](double t, double v) { return order(tight(t, v), loose(t, v)); }});
  };
  ordering("a1-i", "main n=3 i <= proposition i", {0.0, 0.25}, eq9, prop);
  ordering("a1-ii", "main n=3 i <= proposition ii", {0.25, 0.5}, eq9, prop);
  ordering("a2", "main n=3 i <= proposition iii", {0.625, 0.75}, eq9, prop);
  ordering("a3", "main n=3 i <= proposition iv", {0.75, 1.0}, eq9, prop);
  ordering("b1", "main n=3 ii <= proposition i", {0.0, 0.25}, eq10, prop);
  ordering("b2", "main n=3 ii <= proposition ii", {0.25, 0.375}, eq10, prop);
  ordering("b3-iii", "main n=3 ii <= proposition iii", {0.5, 0.75}, eq10, prop);
  ordering("b3-iv", "main n=3 ii <= proposition iv", {0.75, 1.0}, eq10, prop);
  ordering("c19-le-c18", "main n=2 i <= sm n=2 ii", {0.75, 1.0}, eq19,
           [](double t, double v) { return sm2(t, v, Branch::ii); });
  ordering("c16-le-c19", "sm n=2 i <= main n=2 i", {0.25, 0.5},
           [](double t, double v) { return sm2(t, v, Branch::i); }, eq19);
  ordering("c20-le-c15", "main n=2 ii <= sm n=2 i", {0.0, 0.25}, eq20,
           [](double t, double v) { return sm2(t, v, Branch::i); });
  ordering("c17-le-c20", "sm n=2 ii <= main n=2 ii", {0.5, 0.75},
           [](double t, double v) { return sm2(t, v, Branch::ii); }, eq20);

  for (int n = 2; n <= 6; ++n) {
    const double lo = (detail::pow2(n - 1) - 1.0) / detail::pow2(n);
    const double hi = (detail::pow2(n - 1) + 1.0) / detail::pow2(n);
    // v is mapped from [0,1] onto [0, lo) U (hi, 1].
    c.push_back({"main-le-sm-n" + std::to_string(n),
                 "main n=" + std::to_string(n) + " <= sm n=" + std::to_string(n) +
                     " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                 {0.0, 1.0}, true, [n, lo, hi](double t, double s) {
                   const double gapw = 1e-6;
                   const double v = s < 0.5 ? 2.0 * s * (lo - gapw)
                                            : hi + gapw + (2.0 * s - 1.0) * (1.0 - hi - gapw);
                   const ScalarPair p(1.0, t);
                   const Branch main_br = v < 0.5 ? Branch::ii : Branch::i;
                   const Branch sm_br = v < 0.5 ? Branch::i : Branch::ii;
                   return order(main_reverse_correction(p, Weight(v), Depth(n), main_br),
                                lemma_sm_correction(p, Weight(v), Depth(n), sm_br));
                 }});
  }

  c.push_back({"eq100-reduced", "2(1-2v) t^{1/4} (3t^{1/4} - 1 - 2t^{3/8}) >= 0", {0.625, 0.75},
               true, [](double t, double v) {
                 const double q = std::sqrt(std::sqrt(t));
                 return ClaimCell{0.0, 2.0 * (1.0 - 2.0 * v) * q * (3.0 * q - 1.0 - 2.0 * std::pow(t, 0.375)),
                                  4.0 * q * (3.0 * q + 1.0 + 2.0 * std::pow(t, 0.375)), {}};
               }});
  c.push_back({"eq11-quartic", "(4v-3)+(3-8v)t^{1/2}+(4-4v)t^{1/4}+(8v-4)t^{5/8} >= 0",
               {0.75, 1.0}, true, [](double t, double v) {
                 const double s = 3.0 + 5.0 * std::sqrt(t) + std::sqrt(std::sqrt(t)) + 4.0 * std::pow(t, 0.625);
                 return ClaimCell{0.0, quartic_form(t, Weight(v)), s, {}};
               }});

  auto poly_claim = [&](std::string id, std::string desc, auto poly, auto floor_form) {
    c.push_back({std::move(id), std::move(desc), {0.75, 1.0}, false,
                 [poly, floor_form](double x, double v) {
                   const double val = poly(x, Weight(v));
                   const double at_one = poly(1.0, Weight(v));
                   ClaimCell cell{0.0, val, 0.0, {}};
                   cell.scale = 1e3 * (1.0 + std::pow(x, 6.0)) * 1e-9;  // absolute floor ~1e-12 at x ~ 1
                   if (std::abs(at_one) > 1e-12) cell.cause = "value at x = 1 is not 0";
                   else if (val < at_one - 1e-12) cell.cause = "minimum not attained at x = 1";
                   const double f34 = poly(x, Weight(0.75));
                   const double fac = floor_form(x);
                   if (std::abs(f34 - fac) > 1e-12 * 10.0 * (1.0 + std::pow(x, 6.0)))
                     cell.cause = "factorization mismatch at v = 3/4";
                   if (val < f34 - 1e-12 * 10.0 * (1.0 + std::pow(x, 6.0)))
                     cell.cause = "value below its v = 3/4 floor";
                   return cell;
                 }});
  };
  poly_claim("f-nonneg", "f(x,v) >= f(x,3/4) = x^2(x-1)^2(2x+1) >= 0",
             [](double x, const Weight& w) { return comparison_poly_f(x, w); },
             [](double x) { return comparison_poly_f_floor(x); });
  poly_claim("g-nonneg", "g(x,v) >= g(x,3/4) = (x-1)^2(x^4+x^3+3/2x^2+x+1/2) >= 0",
             [](double x, const Weight& w) { return comparison_poly_g(x, w); },
             [](double x) { return comparison_poly_g_floor(x); });

  c.push_back({"gap-bound-validity", "every hypothesis-valid gap-bound bounds the true gap",
               {0.0, 1.0}, true, [](double t, double v) {
                 const ComparisonReport r = compare_gap_bounds(ScalarPair(1.0, t), Weight(v), Depth(4));
                 ClaimCell cell{0.0, 0.0, 0.0, {}};
                 double worst = std::numeric_limits<double>::infinity();
                 for (const auto& e : r.entries) {
                   if (!e.hypothesis_ok) continue;
                   const double slack = e.value - r.true_gap;
                   const double tol = kScalarTauRel * (1.0 + t + std::abs(e.value));
                   if (slack < -tol) cell.cause = e.name + " is below the true gap";
                   worst = std::min(worst, slack);
                 }
                 for (const auto& d : r.dominance)
                   if (d.margin < 0.0) cell.cause = "negative dominance margin";
                 cell.looser = std::isfinite(worst) ? worst : 0.0;
                 cell.scale = 1.0 + t;
                 return cell;
               }});

  c.push_back({"index-coherence", "r_k in {2j_k, 2j_k+1}, j_{k+1} in {2j_k, 2j_k+1}, s_k in [0,1/2]",
               {0.0, 1.0}, false, [](double x, double v) {
                 ClaimCell cell{0.0, 0.0, 1.0, {}};
                 const int kmax = 1 + static_cast<int>(std::lround(std::log(x) * 4.0 + 10.0)) % 20;
                 double worst = 0.5;
                 for (int k = 1; k <= std::max(1, kmax); ++k) {
                   const RefinementIndex i = sababheh_indices(Weight(v), k);
                   const RefinementIndex i2 = sababheh_indices(Weight(v), k + 1);
                   if (i.r != 2 * i.j && i.r != 2 * i.j + 1) cell.cause = "r_k out of {2j, 2j+1}";
                   if (i2.j != 2 * i.j && i2.j != 2 * i.j + 1) cell.cause = "j_{k+1} out of {2j, 2j+1}";
                   if (i.s < 0.0 || i.s > 0.5) cell.cause = "s_k outside [0, 1/2]";
                   worst = std::min(worst, i.s);
                 }
                 cell.looser = worst;
                 return cell;
               }});
  c.push_back({"sn-nonneg", "S_n(v, a, b) >= 0 for v in [0,1], n <= 10", {0.0, 1.0}, true,
               [](double t, double v) {
                 double worst = std::numeric_limits<double>::infinity();
                 for (int n = 1; n <= 10; ++n)
                   worst = std::min(worst, refinement_sum_S(Weight(v), ScalarPair(1.0, t), Depth(n)));
                 return ClaimCell{0.0, worst, 1e-3 * (1.0 + t), {}};
               }});

  c.push_back({"example-19-vs-15", "(19) is tighter than (15) at a=1, b=16, v=1/8", {0.125, 0.125},
               true, [](double, double) {
                 const ScalarPair p(1.0, 16.0);
                 const Weight w(0.125);
                 return order(main_reverse_correction(p, w, Depth(2), Branch::i),
                              lemma_sm_correction(p, w, Depth(2), Branch::i));
               }});
  return c;
}

/// Limit checks: decay rate of the log-limit gap and the limiting log
/// inequalities, over a ratio grid b/a in [1e-2, 1e2].
inline std::vector<Claim> limit_claims() {
  std::vector<Claim> c;
  c.push_back({"log-limit-rate", "delta_n / delta_{n+1} >= 1.9 and delta_n <= ln(b/a)^2 2^{1-n}, n in 5..20",
               {5.0, 19.0}, true, [](double t, double nv) {
                 const int n = static_cast<int>(std::lround(nv));
                 const ScalarPair p(1.0, t);
                 const double d0 = log_limit_gap(p, Depth(n));
                 const double d1 = log_limit_gap(p, Depth(n + 1));
                 const double lr = std::log(t);
                 ClaimCell cell{0.0, 0.0, 1.0, {}};
                 if (d0 == 0.0 && d1 == 0.0) return cell;
                 cell.looser = d0 / d1 - 1.9;
                 if (d0 > lr * lr * std::ldexp(1.0, 1 - n)) cell.cause = "remainder bound exceeded";
                 if (d0 < 1.9 * d1) cell.cause = "decay factor below 1.9";
                 return cell;
               }});
  c.push_back({"log-limit-inequality", "x - 1 - ln x >= 0 with equality only at x = 1", {-2.0, 3.0},
               true, [](double t, double v) {
                 const ScalarPair p(1.0, t);
                 const Weight w(v);
                 ClaimCell cell{0.0, 0.0, 1.0, {}};
                 double worst = std::numeric_limits<double>::infinity();
                 const double lr = std::log(t);
                 const std::array<double, 3> exps{(v - 0.5) * lr, v * lr, -(1.0 - v) * lr};
                 const std::array<double, 3> slacks{limit_inequality_slack(p, w),
                                                    sc_limit_inequality_slack(p, w, Branch::i),
                                                    sc_limit_inequality_slack(p, w, Branch::ii)};
                 for (std::size_t i = 0; i < 3; ++i) {
                   const double s = slacks[i];
                   const double x = std::exp(exps[i]);
                   if (s < 0.0) cell.cause = "negative slack";
                   if (s < 1e-12 && !(std::abs(x - 1.0) < 1e-6)) cell.cause = "near-equality away from x = 1";
                   worst = std::min(worst, s);
                 }
                 cell.looser = worst;
                 return cell;
               }});
  return c;
}

namespace detail {

/// 50-point grids: ratio axis log-spaced over [1e-3, 1e3] with t = 1 at the
/// midpoint index; x axis 10^{(i-24)/24}, which contains x = 1.
inline double grid_axis(bool ratio_axis, int i, int count) {
  if (ratio_axis) {
    const int mid = (count - 1) / 2;
    return std::pow(10.0, 3.0 * static_cast<double>(i - mid) / static_cast<double>(mid));
  }
  const int mid = (count - 2) / 2;
  return std::pow(10.0, static_cast<double>(i - mid) / static_cast<double>(mid));
}

inline SuiteReport run_claim(const SuiteConfig& cfg, const Claim& claim, bool limit_grid) {
  SuiteReport rep;
  SuiteEntry e;
  e.suite = "comparison";
  e.family = claim.id;
  e.branch = "-";
  const int g = cfg.grid;
  const bool point = claim.v_window.lo == claim.v_window.hi;
  const int rows = point ? 1 : g;
  const int cols = point ? 1 : g;
  for (int i = 0; i < rows; ++i) {
    double v;
    if (limit_grid && claim.id == "log-limit-rate") {
      v = claim.v_window.lo + static_cast<double>(i % 15);
    } else {
      v = point ? claim.v_window.lo
                : claim.v_window.lo + (claim.v_window.hi - claim.v_window.lo) * i / (g - 1);
    }
    for (int j = 0; j < cols; ++j) {
      double t;
      if (limit_grid) {
        // b/a in {10^-2, ..., 10^2}; dyadic v-steps keep x away from 1 unless exactly 1.
        t = std::pow(10.0, -2.0 + 4.0 * j / (g - 1 + (g % 2 == 0 ? 1 : 0)));
        if (claim.id == "log-limit-inequality") v = -2.0 + 5.0 * std::ldexp(std::round(std::ldexp(static_cast<double>(i) / (g - 1), 6)), -6);
      } else {
        t = point ? 16.0 : grid_axis(claim.ratio_axis, j, g);
      }
      ++e.trials;
      try {
        const ClaimCell cell = claim.cell(t, v);
        const double gap = cell.looser - cell.tighter;
        const double scale = cell.scale > 0.0 ? cell.scale : std::abs(cell.tighter) + std::abs(cell.looser);
        const double tol = cfg.tau_rel * scale;
        record_gap(e, gap);
        if (cell.cause.empty() && gap >= -tol) {
          ++e.passes;
          continue;
        }
        ++e.failures;
        rep.failures.push_back({"comparison", claim.id, "-", e.trials - 1, 1.0, t, v, 0, 0,
                                cell.tighter, cell.looser, gap, tol, true, false,
                                cell.cause.empty() ? "ordering violated" : cell.cause});
      } catch (const std::exception& ex) {
        ++e.failures;
        rep.failures.push_back({"comparison", claim.id, "-", e.trials - 1, 1.0, t, v, 0, 0, 0.0,
                                0.0, 0.0, 0.0, true, false, ex.what()});
      }
    }
  }
  rep.entries.push_back(std::move(e));
  return rep;
}

}  // namespace detail

/// Grid checks of every dominance claim and limit property.
inline SuiteReport run_comparison_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::function<SuiteReport()>> jobs;
  auto dom = std::make_shared<std::vector<Claim>>(dominance_claims());
  auto lim = std::make_shared<std::vector<Claim>>(limit_claims());
  for (std::size_t i = 0; i < dom->size(); ++i)
    if (detail::selects(cfg.families, "comparison", (*dom)[i].id))
      jobs.push_back([&cfg, dom, i] { return detail::run_claim(cfg, (*dom)[i], false); });
  for (std::size_t i = 0; i < lim->size(); ++i)
    if (detail::selects(cfg.families, "comparison", (*lim)[i].id))
      jobs.push_back([&cfg, lim, i] { return detail::run_claim(cfg, (*lim)[i], true); });
  SuiteReport rep;
  rep.config = cfg;
  for (auto& r : detail::run_jobs(jobs, cfg.threads)) rep.append(std::move(r));
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Boundary probe
// ---------------------------------------------------------------------------

/// Opt-in: runs only when cfg.families names "boundary" itself, never via
/// "all". Every finite window endpoint inside cfg.v_range is evaluated at
/// cfg.trials random (a, b). Endpoints of an excluded window must give
/// |gap| <= tol; endpoints of an admitted window only need gap >= -tol,
/// since several forward bounds are strict there.
inline SuiteReport run_boundary_probe(const SuiteConfig& cfg) {
  cfg.validate();
  SuiteReport rep;
  rep.config = cfg;
  const bool wanted = std::any_of(cfg.families.begin(), cfg.families.end(), [](const auto& f) {
    return detail::canonical_name(f) == "boundary";
  });
  if (!wanted) return rep;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& target : all_scalar_targets()) {
    const int min_depth = info(target.family).min_depth;
    std::vector<std::optional<int>> depths;
    if (min_depth > 0) {
      for (int n : detail::applicable_depths(cfg.depths, min_depth)) depths.push_back(n);
    } else {
      depths.push_back(std::nullopt);
    }
    SuiteEntry e;
    e.suite = "boundary";
    e.family = std::string(info(target.family).name);
    e.branch = target.selector();
    for (const auto& n : depths) {
      const Hypothesis h = scalar_hypothesis(target, n.value_or(1));
      const bool equality = h.kind == Hypothesis::Kind::outside;
      for (const double v : {h.window.lo, h.window.hi}) {
        if (!std::isfinite(v) || !cfg.v_range.contains(v)) continue;
        auto rng = Xoshiro256ss::stream(
            cfg.seed, {detail::kBoundarySuiteTag, target.tag(),
                       static_cast<std::uint64_t>(n.value_or(0)), std::bit_cast<std::uint64_t>(v)});
        for (std::int64_t trial = 0; trial < cfg.trials; ++trial) {
          ++e.trials;
          const double a = rng.log_uniform(cfg.scalar_range.lo, cfg.scalar_range.hi);
          const double b = rng.log_uniform(cfg.scalar_range.lo, cfg.scalar_range.hi);
          const BoundReport r = evaluate_scalar(target, ScalarPair(a, b), Weight(v), n);
          const double tol = cfg.tau_rel * (std::abs(r.lhs) + std::abs(r.rhs));
          const bool ok = std::isfinite(r.gap) && (equality ? std::abs(r.gap) <= tol : r.gap >= -tol);
          detail::record_gap(e, r.gap);
          if (ok) {
            ++e.passes;
            continue;
          }
          ++e.failures;
          rep.failures.push_back({"boundary", e.family, e.branch, trial, a, b, v, n.value_or(0), 0,
                                  r.lhs, r.rhs, r.gap, tol, r.hypothesis_ok, false,
                                  equality ? "endpoint gap not equality-like" : "inequality violated"});
        }
      }
    }
    if (e.trials > 0) rep.entries.push_back(std::move(e));
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Scalar, operator and comparison suites in that order.
inline SuiteReport run_all_suites(const SuiteConfig& cfg) {
  cfg.validate();
  for (const auto& f : cfg.families) {
    if (!is_known_family(f)) {
      bool claim = false;
      for (const auto& c : dominance_claims()) claim = claim || c.id == detail::canonical_name(f);
      for (const auto& c : limit_claims()) claim = claim || c.id == detail::canonical_name(f);
      if (!claim) throw config_error("unknown family: " + f);
    }
  }
  SuiteReport rep = run_scalar_suite(cfg);
  rep.append(run_operator_suite(cfg));
  rep.append(run_comparison_suite(cfg));
  rep.append(run_boundary_probe(cfg));
  return rep;
}

// ---------------------------------------------------------------------------
// Flat key = value config files
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "': not a number: " + s);
  }
}

inline long long parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "': not an integer: " + s);
  }
}

inline Interval parse_range(const std::string& key, const std::string& s) {
  const auto parts = split_list(s);
  if (parts.size() != 2) throw config_error("config key '" + key + "' expects 'lo, hi'");
  return {parse_double(key, parts[0]), parse_double(key, parts[1])};
}

}  // namespace detail

/// Applies one key = value setting to cfg.
inline void apply_config_key(SuiteConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "seed") {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw config_error("config key 'seed': not an unsigned integer: " + value);
    }
  } else if (key == "trials") {
    const long long t = parse_int(key, value);
    if (t < 1 || t > std::numeric_limits<int>::max()) throw config_error("trials must be >= 1");
    cfg.trials = static_cast<int>(t);
  } else if (key == "scalar_range") {
    cfg.scalar_range = parse_range(key, value);
  } else if (key == "v_range") {
    cfg.v_range = parse_range(key, value);
  } else if (key == "dims" || key == "depths") {
    std::vector<int> xs;
    for (const auto& p : split_list(value)) xs.push_back(static_cast<int>(parse_int(key, p)));
    (key == "dims" ? cfg.dims : cfg.depths) = std::move(xs);
  } else if (key == "cond_max") {
    cfg.cond_max = parse_double(key, value);
  } else if (key == "families") {
    cfg.families = split_list(value);
  } else if (key == "margin") {
    cfg.margin = parse_double(key, value);
  } else if (key == "tau_rel") {
    cfg.tau_rel = parse_double(key, value);
  } else if (key == "op_tol_factor") {
    cfg.op_tol_factor = parse_double(key, value);
  } else if (key == "grid") {
    cfg.grid = static_cast<int>(parse_int(key, value));
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value));
  } else {
    throw config_error("unknown config key: " + key);
  }
}

/// Reads `key = value` lines; '#' starts a comment.
inline SuiteConfig parse_suite_config(std::istream& in, SuiteConfig cfg = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    apply_config_key(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline SuiteConfig load_suite_config(const std::string& path, SuiteConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  return parse_suite_config(in, std::move(cfg));
}

}  // namespace meanbound
