#pragma once

// Comparing reverse bounds in the common gap normalization, i.e. as upper
// bounds on (1-v)a + vb - a^{1-v}b^v; the auxiliary polynomials used to
// establish the orderings; and the n -> infinity logarithmic limits.

#include <cmath>
#include <string>
#include <vector>

#include "meanbound/refinement.hpp"
#include "meanbound/scalar_bounds.hpp"

namespace meanbound {

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// f(x,v) = (8v-4)x^5 + (3-8v)x^4 + (4-4v)x^2 + (4v-3); nonnegative for
/// x > 0 when v is in [3/4,1].
inline double comparison_poly_f(double x, const Weight& w) {
  if (!(x > 0.0)) throw std::domain_error("comparison_poly_f requires x > 0");
  if (x == 1.0) return 0.0;  // coefficients cancel; skip their rounding
  const double v = w.value();
  const double x2 = x * x;
  const double x4 = x2 * x2;
  return (8.0 * v - 4.0) * x4 * x + (3.0 - 8.0 * v) * x4 + (4.0 - 4.0 * v) * x2 + (4.0 * v - 3.0);
}

/// g(x,v) = (4v-2)x^6 + (2-4v)x^5 + (2v-1)x^4 + (2-4v)x^3 + (2v-1).
inline double comparison_poly_g(double x, const Weight& w) {
  if (!(x > 0.0)) throw std::domain_error("comparison_poly_g requires x > 0");
  if (x == 1.0) return 0.0;
  const double v = w.value();
  const double x3 = x * x * x;
  const double x4 = x3 * x;
  return (4.0 * v - 2.0) * x4 * x * x + (2.0 - 4.0 * v) * x4 * x + (2.0 * v - 1.0) * x4 +
         (2.0 - 4.0 * v) * x3 + (2.0 * v - 1.0);
}

/// Closed form f(x, 3/4) = x^2 (x-1)^2 (2x+1).
inline double comparison_poly_f_floor(double x) noexcept {
  return x * x * (x - 1.0) * (x - 1.0) * (2.0 * x + 1.0);
}

/// Closed form g(x, 3/4) = (x-1)^2 (x^4 + x^3 + 3/2 x^2 + x + 1/2).
inline double comparison_poly_g_floor(double x) noexcept {
  return (x - 1.0) * (x - 1.0) * ((((x + 1.0) * x + 1.5) * x + 1.0) * x + 0.5);
}

/// (4v-3) + (3-8v)t^{1/2} + (4-4v)t^{1/4} + (8v-4)t^{5/8}; equals
/// f(t^{1/8}, v).
inline double quartic_form(double t, const Weight& w) {
  if (!(t > 0.0)) throw std::domain_error("quartic_form requires t > 0");
  const double v = w.value();
  return (4.0 * v - 3.0) + (3.0 - 8.0 * v) * std::sqrt(t) + (4.0 - 4.0 * v) * std::sqrt(std::sqrt(t)) +
         (8.0 * v - 4.0) * std::pow(t, 0.625);
}

// ---------------------------------------------------------------------------
// Gap-bounds
// ---------------------------------------------------------------------------

/// Gap-bound of the four-branch Zhao-Wu reverse refinement.
inline double proposition_gap_bound(const ScalarPair& p, const Weight& w) {
  const BoundReport r = zhao_wu_reverse(p, w, ReverseForm::proposition);
  return r.rhs - weighted_geometric(p, w);
}

inline double true_young_gap(const ScalarPair& p, const Weight& w) {
  return young_lhs(p, w) - weighted_geometric(p, w);
}

struct GapBoundEntry {
  std::string name;
  std::string family;
  std::string branch;
  int n = 0;
  double value = 0.0;
  bool hypothesis_ok = false;
};

struct Dominance {
  std::string tighter;
  std::string looser;
  double margin = 0.0;  ///< looser - tighter, >= 0
};

struct ComparisonReport {
  double a = 0.0;
  double b = 0.0;
  double v = 0.0;
  int n = 0;
  double true_gap = 0.0;
  std::vector<GapBoundEntry> entries;
  std::vector<Dominance> dominance;
};

/// Evaluates the comparable reverse gap-bounds at (a, b, v): the main reverse
/// theorem at n = 2, 3 (and the requested n), the four-branch Zhao-Wu
/// bound, and the Sababheh-Moslehian bound at n = 2 (and the requested n).
/// Dominance is reported for every pair whose hypotheses both hold.
inline ComparisonReport compare_gap_bounds(const ScalarPair& p, const Weight& w, const Depth& n) {
  ComparisonReport rep;
  rep.a = p.a();
  rep.b = p.b();
  rep.v = w.value();
  rep.n = n.value();
  rep.true_gap = true_young_gap(p, w);
  const double v = w.value();

  auto add_main = [&](int depth, Branch br, std::string label) {
    GapBoundEntry e;
    e.name = std::move(label);
    e.family = "theorem-main-reverse";
    e.branch = std::string(to_string(br));
    e.n = depth;
    e.value = main_reverse_correction(p, w, Depth(depth), br);
    e.hypothesis_ok = main_reverse_hypothesis(depth, br).admits(v);
    rep.entries.push_back(std::move(e));
  };
  add_main(2, Branch::i, "(19) main n=2 i");
  add_main(2, Branch::ii, "(20) main n=2 ii");
  add_main(3, Branch::i, "(9) main n=3 i");
  add_main(3, Branch::ii, "(10) main n=3 ii");
  if (n.value() != 2 && n.value() != 3) {
    add_main(n.value(), Branch::i, "main n=" + std::to_string(n.value()) + " i");
    add_main(n.value(), Branch::ii, "main n=" + std::to_string(n.value()) + " ii");
  }

  if (w.in_unit_interval()) {
    const BoundReport zw = zhao_wu_reverse(p, w, ReverseForm::proposition);
    GapBoundEntry e;
    e.name = "zhao-wu " + zw.branch;
    e.family = "zhao-wu-reverse";
    e.branch = zw.branch;
    e.value = zw.rhs - weighted_geometric(p, w);
    e.hypothesis_ok = true;
    rep.entries.push_back(std::move(e));
  }

  auto add_sm = [&](int depth, Branch br, std::string label) {
    const BoundReport r = lemma_sm_reverse(p, w, Depth(depth), br);
    if (!r.hypothesis_ok) return;
    GapBoundEntry e;
    e.name = std::move(label);
    e.family = "lemma-sm-reverse";
    e.branch = std::string(to_string(br));
    e.n = depth;
    e.value = lemma_sm_correction(p, w, Depth(depth), br);
    e.hypothesis_ok = true;
    rep.entries.push_back(std::move(e));
  };
  add_sm(2, Branch::i, "(15)-(16) sm n=2 i");
  add_sm(2, Branch::ii, "(17)-(18) sm n=2 ii");
  if (n.value() != 2) {
    add_sm(n.value(), Branch::i, "sm n=" + std::to_string(n.value()) + " i");
    add_sm(n.value(), Branch::ii, "sm n=" + std::to_string(n.value()) + " ii");
  }

  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.entries.size(); ++j) {
      const auto& x = rep.entries[i];
      const auto& y = rep.entries[j];
      if (!x.hypothesis_ok || !y.hypothesis_ok) continue;
      if (x.value <= y.value)
        rep.dominance.push_back({x.name, y.name, y.value - x.value});
      else
        rep.dominance.push_back({y.name, x.name, x.value - y.value});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Logarithmic limits
// ---------------------------------------------------------------------------

/// |2^n((b/a)^{1/2^n} - 1) - ln(b/a)|, which tends to zero like
/// ln(b/a)^2 / 2^{n+1}.
inline double log_limit_gap(const ScalarPair& p, const Depth& n) {
  const double log_ba = std::log(p.b()) - std::log(p.a());
  const double scale = detail::pow2(n.value());
  return std::abs(scale * std::expm1(log_ba / scale) - log_ba);
}

/// x - 1 - ln x for x = e^u, evaluated without cancellation.
inline double log_slack_of_exponent(double u) noexcept { return std::expm1(u) - u; }

/// x - 1 - ln x for x > 0.
inline double fundamental_log_slack(double x) {
  if (!(x > 0.0)) throw std::domain_error("fundamental_log_slack requires x > 0");
  if (x > 0.5 && x < 2.0) {
    const double d = x - 1.0;
    return d - std::log1p(d);
  }
  return x - 1.0 - std::log(x);
}

/// Slack of ln x <= x - 1 at x = (b/a)^{v-1/2}, the limit form of the main
/// reverse theorem.
inline double limit_inequality_slack(const ScalarPair& p, const Weight& w) {
  const double log_ba = std::log(p.b()) - std::log(p.a());
  return log_slack_of_exponent((w.value() - 0.5) * log_ba);
}

/// Slack of the limit forms of the extended Sababheh-Choi theorem:
/// x = (b/a)^v (branch i) or x = (a/b)^{1-v} (branch ii).
inline double sc_limit_inequality_slack(const ScalarPair& p, const Weight& w, Branch br) {
  const double log_ba = std::log(p.b()) - std::log(p.a());
  const double u = br == Branch::i ? w.value() * log_ba : -(1.0 - w.value()) * log_ba;
  return log_slack_of_exponent(u);
}

}  // namespace meanbound
