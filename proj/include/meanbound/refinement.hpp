#pragma once

// Dyadic refinement machinery: the (j_k, r_k, s_k) index sequence, the n-term
// refinement sums built on it, and the two bounds that use them.

#include <cmath>
#include <cstdint>
#include <string>

#include "meanbound/scalar_bounds.hpp"

namespace meanbound {

struct RefinementIndex {
  int k = 1;
  std::int64_t j = 0;  ///< floor(2^{k-1} v)
  std::int64_t r = 0;  ///< floor(2^k v)
  double s = 0.0;      ///< signed coefficient, in [0, 1/2] for v in [0,1]
};

namespace detail {

// No domain check: the formulas are well defined for any v, but only [0,1]
// is meaningful. Out-of-hypothesis report evaluation goes through here.
inline RefinementIndex refinement_index_unchecked(double v, int k) {
  RefinementIndex idx;
  idx.k = k;
  const double half_scaled = std::ldexp(v, k - 1);
  idx.j = static_cast<std::int64_t>(std::floor(half_scaled));
  idx.r = static_cast<std::int64_t>(std::floor(std::ldexp(v, k)));
  // floor((r+1)/2) for integer r, exact for negative r as well.
  const std::int64_t half_up = (idx.r + 1) >= 0 ? (idx.r + 1) / 2 : -((-(idx.r + 1) + 1) / 2);
  const double sign = (idx.r % 2 == 0) ? 1.0 : -1.0;
  idx.s = sign * half_scaled - sign * static_cast<double>(half_up);
  return idx;
}

// Sum_{k=1}^{n} s_k(v) (x_k - y_k)^2 with
//   x_k = (hi^{2^{k-1}-j} lo^{j})^{1/2^k},  y_k = x_k (lo/hi)^{1/2^k}.
// With (hi, lo) = (a, b) this is the forward Sababheh-Choi sum; with
// (hi, lo) = (b, a) it is S_n(v, a, b).
inline double dyadic_refinement_sum(double v, double hi, double lo, int n) {
  if (hi == lo) return 0.0;
  const double log_hi = std::log(hi);
  const double log_lo = std::log(lo);
  double sum = 0.0;
  for (int k = n; k >= 1; --k) {
    const RefinementIndex idx = refinement_index_unchecked(v, k);
    const double den = pow2(k);
    const double jd = static_cast<double>(idx.j);
    const double x = std::exp(((pow2(k - 1) - jd) * log_hi + jd * log_lo) / den);
    const double diff = x * std::expm1((log_lo - log_hi) / den);
    sum += idx.s * diff * diff;
  }
  return sum;
}

inline void require_unit_weight(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(what) + " requires v in [0,1], got " +
                            std::to_string(v));
  }
}

}  // namespace detail

/// (j_k, r_k, s_k) for v in [0,1] and k >= 1.
inline RefinementIndex sababheh_indices(const Weight& w, int k) {
  detail::require_unit_weight(w.value(), "sababheh_indices");
  if (k < 1 || k > 62) throw std::domain_error("index k must lie in [1, 62]");
  return detail::refinement_index_unchecked(w.value(), k);
}

/// S_n(v, a, b); the first operand is the one raised to j_k in the leading
/// root. Nonnegative for v in [0,1].
inline double refinement_sum_S(const Weight& w, const ScalarPair& p, const Depth& n) {
  detail::require_unit_weight(w.value(), "refinement_sum_S");
  return detail::dyadic_refinement_sum(w.value(), p.b(), p.a(), n.value());
}

/// (1-v)a + vb >= a^{1-v}b^v + (n-term Sababheh-Choi sum) for v in [0,1].
inline BoundReport sababheh_choi_forward(const ScalarPair& p, const Weight& w, const Depth& n) {
  const double rhs = weighted_geometric(p, w) +
                     detail::dyadic_refinement_sum(w.value(), p.a(), p.b(), n.value());
  return detail::make_report("sababheh-choi-forward", "-", BoundKind::lower, young_lhs(p, w),
                             rhs, w.in_unit_interval(), p, w, n.value());
}

/// Gap-bound of the Sababheh-Moslehian reverse inequality (rhs minus
/// a^{1-v}b^v).
inline double lemma_sm_correction(const ScalarPair& p, const Weight& w, const Depth& n,
                                  Branch br) {
  const double v = w.value();
  const double root_ab = p.a() == p.b() ? p.a() : std::sqrt(p.a()) * std::sqrt(p.b());
  if (br == Branch::i) {
    // S_n(2v, sqrt(ab), b)
    return (1.0 - v) * detail::sqrt_gap_sq(p) -
           detail::dyadic_refinement_sum(2.0 * v, p.b(), root_ab, n.value());
  }
  // S_n(2(1-v), sqrt(ab), a)
  return v * detail::sqrt_gap_sq(p) -
         detail::dyadic_refinement_sum(2.0 * (1.0 - v), p.a(), root_ab, n.value());
}

/// Sababheh-Moslehian reverse refinement: branch i for v in [0,1/2], branch
/// ii for v in [1/2,1].
inline BoundReport lemma_sm_reverse(const ScalarPair& p, const Weight& w, const Depth& n,
                                    Branch br) {
  const double v = w.value();
  const bool ok = br == Branch::i ? Hypothesis::inside(0.0, 0.5).admits(v)
                                  : Hypothesis::inside(0.5, 1.0).admits(v);
  const double rhs = weighted_geometric(p, w) + lemma_sm_correction(p, w, n, br);
  return detail::make_report("lemma-sm-reverse", std::string(to_string(br)), BoundKind::upper,
                             young_lhs(p, w), rhs, ok, p, w, n.value());
}

}  // namespace meanbound
