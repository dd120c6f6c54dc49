#pragma once

// Scalar Young and Heinz mean inequalities: the classical refinements for
// weights in [0,1] and the reverse bounds that stay valid for every real
// weight outside a dyadic exclusion window.
//
// Every bound evaluator returns a BoundReport whose `gap` is oriented so that
// a satisfied inequality has gap >= 0, whether the family is an upper bound
// on the arithmetic side (reverse inequalities) or a lower bound on it
// (forward refinements).

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace meanbound {

/// Relative tolerance used for every scalar verdict.
inline constexpr double kScalarTauRel = 1e-9;

/// Refinement depths above this are pure rounding noise.
inline constexpr int kMaxDepth = 30;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Two strictly positive operands. Zero is rejected because weights outside
/// [0,1] produce negative exponents.
class ScalarPair {
 public:
  ScalarPair(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::domain_error("operands must be finite and strictly positive (a=" +
                              std::to_string(a) + ", b=" + std::to_string(b) + ")");
    }
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  ScalarPair swapped() const noexcept { return ScalarPair(b_, a_, Unchecked{}); }

 private:
  struct Unchecked {};
  ScalarPair(double a, double b, Unchecked) noexcept : a_(a), b_(b) {}

  double a_;
  double b_;
};

class Weight {
 public:
  explicit Weight(double v) : v_(v) {
    if (!std::isfinite(v)) throw std::domain_error("weight must be finite");
  }
  double value() const noexcept { return v_; }
  Weight complement() const { return Weight(1.0 - v_); }

  /// True when v lies in [0,1], the regime of Kubo-Ando means.
  bool in_unit_interval() const noexcept { return v_ >= 0.0 && v_ <= 1.0; }

 private:
  double v_;
};

/// Refinement depth n, 1 <= n <= kMaxDepth.
class Depth {
 public:
  explicit Depth(int n) : n_(n) {
    if (n < 1 || n > kMaxDepth) {
      throw std::domain_error("depth n must lie in [1, " + std::to_string(kMaxDepth) +
                              "], got " + std::to_string(n));
    }
  }
  int value() const noexcept { return n_; }

 private:
  int n_;
};

enum class Branch { i, ii };

inline std::string_view to_string(Branch br) { return br == Branch::i ? "i" : "ii"; }

inline std::optional<Branch> parse_branch(std::string_view s) {
  if (s == "i" || s == "1") return Branch::i;
  if (s == "ii" || s == "2") return Branch::ii;
  return std::nullopt;
}

/// Closed interval [lo, hi].
struct Interval {
  double lo;
  double hi;
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

/// A hypothesis on the weight: either v must lie inside a closed interval or
/// it must avoid one. Endpoints are compared exactly as printed.
struct Hypothesis {
  enum class Kind { inside, outside };
  Kind kind;
  Interval window;

  static Hypothesis inside(double lo, double hi) { return {Kind::inside, {lo, hi}}; }
  static Hypothesis outside(double lo, double hi) { return {Kind::outside, {lo, hi}}; }

  bool admits(double v) const noexcept {
    return kind == Kind::inside ? window.contains(v) : !window.contains(v);
  }
};

enum class BoundKind { upper, lower };

/// One inequality evaluation.
struct BoundReport {
  std::string family;
  std::string branch;
  BoundKind kind = BoundKind::upper;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  bool hypothesis_ok = false;
  bool holds = false;
  double a = 0.0;
  double b = 0.0;
  double v = 0.0;
  std::optional<int> n;

  double tau_abs() const noexcept { return kScalarTauRel * (std::abs(lhs) + std::abs(rhs)); }
};

namespace detail {

inline BoundReport make_report(std::string family, std::string branch, BoundKind kind,
                               double lhs, double rhs, bool hypothesis_ok, const ScalarPair& p,
                               const Weight& w, std::optional<int> n = std::nullopt) {
  BoundReport r;
  r.family = std::move(family);
  r.branch = std::move(branch);
  r.kind = kind;
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = kind == BoundKind::upper ? rhs - lhs : lhs - rhs;
  r.hypothesis_ok = hypothesis_ok;
  r.holds = r.gap >= -r.tau_abs();
  r.a = p.a();
  r.b = p.b();
  r.v = w.value();
  r.n = n;
  return r;
}

inline double sq(double x) noexcept { return x * x; }

/// (sqrt(a) - sqrt(b))^2
inline double sqrt_gap_sq(const ScalarPair& p) noexcept {
  return sq(std::sqrt(p.a()) - std::sqrt(p.b()));
}

/// (sqrt(x) - (xy)^{1/4})^2, the quarter-root refinement term.
inline double quarter_gap_sq(double x, double y) noexcept {
  return sq(std::sqrt(x) - std::sqrt(std::sqrt(x) * std::sqrt(y)));
}

inline double pow2(int k) noexcept { return std::ldexp(1.0, k); }

/// Sum_{k=2}^{n} 2^{k-2} ((ratio)^{1/2^k} - 1)^2 where log_ratio = ln(ratio).
/// Summed from k = n downwards so the smallest terms accumulate first.
inline double dyadic_root_sum(double log_ratio, int n) noexcept {
  double s = 0.0;
  for (int k = n; k >= 2; --k) s += pow2(k - 2) * sq(std::expm1(log_ratio / pow2(k)));
  return s;
}

/// Sum_{k=1}^{n} 2^{k-1} (1 - ratio^{1/2^k})^2.
inline double extended_sc_sum(double log_ratio, int n) noexcept {
  double s = 0.0;
  for (int k = n; k >= 1; --k) s += pow2(k - 1) * sq(std::expm1(log_ratio / pow2(k)));
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Means
// ---------------------------------------------------------------------------

/// (1-v)a + vb
inline double young_lhs(const ScalarPair& p, const Weight& w) noexcept {
  if (p.a() == p.b()) return p.a();
  const double v = w.value();
  return (1.0 - v) * p.a() + v * p.b();
}

/// a^{1-v} b^v evaluated as exp((1-v) ln a + v ln b).
inline double weighted_geometric(const ScalarPair& p, const Weight& w) noexcept {
  const double v = w.value();
  if (p.a() == p.b()) return p.a();
  return std::exp((1.0 - v) * std::log(p.a()) + v * std::log(p.b()));
}

/// Heinz mean (a^{1-v}b^v + a^v b^{1-v}) / 2.
inline double heinz_scalar(const ScalarPair& p, const Weight& w) {
  return 0.5 * (weighted_geometric(p, w) + weighted_geometric(p, w.complement()));
}

// ---------------------------------------------------------------------------
// Hypothesis windows shared with the operator families
// ---------------------------------------------------------------------------

/// Window excluded by the main reverse theorem at depth n.
inline Hypothesis main_reverse_hypothesis(int n, Branch br) {
  const double den = detail::pow2(n);
  const double half = detail::pow2(n - 1);
  return br == Branch::i ? Hypothesis::outside(0.5, (half + 1.0) / den)
                         : Hypothesis::outside((half - 1.0) / den, 0.5);
}

/// Window excluded by the extended Sababheh-Choi theorem at depth n.
inline Hypothesis extended_sc_hypothesis(int n, Branch br) {
  const double den = detail::pow2(n);
  return br == Branch::i ? Hypothesis::outside(0.0, 1.0 / den)
                         : Hypothesis::outside((den - 1.0) / den, 1.0);
}

inline Hypothesis one_term_hypothesis(Branch br) {
  return br == Branch::i ? Hypothesis::outside(0.0, 0.5) : Hypothesis::outside(0.5, 1.0);
}

// ---------------------------------------------------------------------------
// Reverse inequalities valid for v outside a window
// ---------------------------------------------------------------------------

/// (1-v)a + vb <= a^{1-v} b^v for v outside [0,1].
inline BoundReport reverse_young_basic(const ScalarPair& p, const Weight& w) {
  const bool ok = Hypothesis::outside(0.0, 1.0).admits(w.value());
  return detail::make_report("reverse-young-basic", "-", BoundKind::upper, young_lhs(p, w),
                             weighted_geometric(p, w), ok, p, w);
}

/// One-term reverse bounds: branch i adds v(sqrt a - sqrt b)^2 for v outside
/// [0,1/2]; branch ii adds (1-v)(sqrt a - sqrt b)^2 for v outside [1/2,1].
inline BoundReport corollary_one_term(const ScalarPair& p, const Weight& w, Branch br) {
  const double v = w.value();
  const double coeff = br == Branch::i ? v : 1.0 - v;
  const double rhs = weighted_geometric(p, w) + coeff * detail::sqrt_gap_sq(p);
  return detail::make_report("corollary-one-term", std::string(to_string(br)), BoundKind::upper,
                             young_lhs(p, w), rhs, one_term_hypothesis(br).admits(v), p, w);
}

/// Gap-bound of the main reverse theorem, i.e. its right-hand side minus
/// a^{1-v}b^v. At n = 1 the dyadic sum is empty.
inline double main_reverse_correction(const ScalarPair& p, const Weight& w, const Depth& n,
                                      Branch br) noexcept {
  const double v = w.value();
  const double root_ab = std::sqrt(p.a()) * std::sqrt(p.b());
  const double log_ba = std::log(p.b()) - std::log(p.a());
  if (br == Branch::i) {
    const double sum = detail::dyadic_root_sum(log_ba, n.value());
    return (1.0 - v) * detail::sqrt_gap_sq(p) + (2.0 * v - 1.0) * root_ab * sum;
  }
  const double sum = detail::dyadic_root_sum(-log_ba, n.value());
  return v * detail::sqrt_gap_sq(p) + (1.0 - 2.0 * v) * root_ab * sum;
}

/// Main extended-range reverse Young inequality. Valid for every real v
/// outside [1/2, (2^{n-1}+1)/2^n] (branch i) or [(2^{n-1}-1)/2^n, 1/2]
/// (branch ii).
inline BoundReport theorem_main_reverse(const ScalarPair& p, const Weight& w, const Depth& n,
                                        Branch br) {
  const double rhs = weighted_geometric(p, w) + main_reverse_correction(p, w, n, br);
  const bool ok = main_reverse_hypothesis(n.value(), br).admits(w.value());
  return detail::make_report("theorem-main-reverse", std::string(to_string(br)),
                             BoundKind::upper, young_lhs(p, w), rhs, ok, p, w, n.value());
}

inline double extended_sc_correction(const ScalarPair& p, const Weight& w, const Depth& n,
                                     Branch br) noexcept {
  const double v = w.value();
  const double log_ba = std::log(p.b()) - std::log(p.a());
  if (br == Branch::i) return v * p.a() * detail::extended_sc_sum(log_ba, n.value());
  return (1.0 - v) * p.b() * detail::extended_sc_sum(-log_ba, n.value());
}

/// Sababheh-Choi reverse bound with the widened weight range:
/// branch i holds for v outside [0, 1/2^n], branch ii for v outside
/// [(2^n-1)/2^n, 1].
inline BoundReport theorem_extended_sc(const ScalarPair& p, const Weight& w, const Depth& n,
                                       Branch br) {
  const double rhs = weighted_geometric(p, w) + extended_sc_correction(p, w, n, br);
  const bool ok = extended_sc_hypothesis(n.value(), br).admits(w.value());
  return detail::make_report("theorem-extended-sc", std::string(to_string(br)),
                             BoundKind::upper, young_lhs(p, w), rhs, ok, p, w, n.value());
}

// ---------------------------------------------------------------------------
// Heinz-mean reverse bounds, lhs = (a+b)/2
// ---------------------------------------------------------------------------

inline BoundReport heinz_reverse_main(const ScalarPair& p, const Weight& w, const Depth& n,
                                      Branch br) {
  if (n.value() < 2) throw std::domain_error("heinz-reverse-main requires n >= 2");
  const double v = w.value();
  const double root_ab = std::sqrt(p.a()) * std::sqrt(p.b());
  const double log_ba = std::log(p.b()) - std::log(p.a());
  const double sym = detail::dyadic_root_sum(-log_ba, n.value()) +
                     detail::dyadic_root_sum(log_ba, n.value());
  const double rhs =
      br == Branch::i
          ? heinz_scalar(p, w) + (1.0 - v) * detail::sqrt_gap_sq(p) + (v - 0.5) * root_ab * sym
          : heinz_scalar(p, w) + v * detail::sqrt_gap_sq(p) + (0.5 - v) * root_ab * sym;
  const bool ok = main_reverse_hypothesis(n.value(), br).admits(v);
  return detail::make_report("heinz-reverse-main", std::string(to_string(br)), BoundKind::upper,
                             0.5 * (p.a() + p.b()), rhs, ok, p, w, n.value());
}

inline BoundReport heinz_reverse_sc(const ScalarPair& p, const Weight& w, const Depth& n,
                                    Branch br) {
  const double v = w.value();
  const double log_ba = std::log(p.b()) - std::log(p.a());
  // 2^{k-2} weights are half of the 2^{k-1} weights of extended_sc_sum.
  const double sym = 0.5 * (p.a() * detail::extended_sc_sum(log_ba, n.value()) +
                            p.b() * detail::extended_sc_sum(-log_ba, n.value()));
  const double coeff = br == Branch::i ? v : 1.0 - v;
  const double rhs = heinz_scalar(p, w) + coeff * sym;
  const bool ok = extended_sc_hypothesis(n.value(), br).admits(v);
  return detail::make_report("heinz-reverse-sc", std::string(to_string(br)), BoundKind::upper,
                             0.5 * (p.a() + p.b()), rhs, ok, p, w, n.value());
}

// ---------------------------------------------------------------------------
// Classical refinements for v in [0,1]
// ---------------------------------------------------------------------------

/// Kittaneh-Manasrah: (1-v)a + vb >= a^{1-v}b^v + min{v,1-v}(sqrt a - sqrt b)^2.
inline BoundReport kittaneh_manasrah(const ScalarPair& p, const Weight& w) {
  const double v = w.value();
  const double r0 = std::min(v, 1.0 - v);
  const double rhs = weighted_geometric(p, w) + r0 * detail::sqrt_gap_sq(p);
  return detail::make_report("kittaneh-manasrah", "-", BoundKind::lower, young_lhs(p, w), rhs,
                             w.in_unit_interval(), p, w);
}

/// Zhao-Wu two-term forward refinement; the branch follows from v (v = 1/2
/// evaluates branch i, both coincide there).
inline BoundReport zhao_wu_forward(const ScalarPair& p, const Weight& w) {
  const double v = w.value();
  const double r = std::min(v, 1.0 - v);
  const double r0 = std::min(2.0 * r, 1.0 - 2.0 * r);
  const bool first = v <= 0.5;
  const double rhs =
      first ? weighted_geometric(p, w) + v * detail::sqrt_gap_sq(p) +
                  r0 * detail::quarter_gap_sq(p.a(), p.b())
            : weighted_geometric(p, w) + (1.0 - v) * detail::sqrt_gap_sq(p) +
                  r0 * detail::quarter_gap_sq(p.b(), p.a());
  return detail::make_report("zhao-wu-forward", first ? "i" : "ii", BoundKind::lower,
                             young_lhs(p, w), rhs, w.in_unit_interval(), p, w);
}

enum class ReverseForm { lemma, proposition };

inline std::string_view to_string(ReverseForm f) {
  return f == ReverseForm::lemma ? "lemma" : "proposition";
}

/// Zhao-Wu reverse refinement, in its two-branch form (r0 = min{2r, 1-2r})
/// or the equivalent four-branch form on quarters of [0,1].
inline BoundReport zhao_wu_reverse(const ScalarPair& p, const Weight& w, ReverseForm form) {
  const double v = w.value();
  const bool low = v <= 0.5;
  const double base = low ? (1.0 - v) * detail::sqrt_gap_sq(p) : v * detail::sqrt_gap_sq(p);
  const double quarter =
      low ? detail::quarter_gap_sq(p.b(), p.a()) : detail::quarter_gap_sq(p.a(), p.b());

  double coeff = 0.0;
  std::string branch;
  if (form == ReverseForm::lemma) {
    const double r = std::min(v, 1.0 - v);
    coeff = -std::min(2.0 * r, 1.0 - 2.0 * r);
    branch = low ? "lemma/i" : "lemma/ii";
  } else if (v <= 0.25) {
    coeff = -2.0 * v;
    branch = "proposition/i";
  } else if (v <= 0.5) {
    coeff = 2.0 * v - 1.0;
    branch = "proposition/ii";
  } else if (v <= 0.75) {
    coeff = -(2.0 * v - 1.0);
    branch = "proposition/iii";
  } else {
    coeff = 2.0 * v - 2.0;
    branch = "proposition/iv";
  }
  const double rhs = weighted_geometric(p, w) + base + coeff * quarter;
  return detail::make_report("zhao-wu-reverse", std::move(branch), BoundKind::upper,
                             young_lhs(p, w), rhs, w.in_unit_interval(), p, w);
}

}  // namespace meanbound
