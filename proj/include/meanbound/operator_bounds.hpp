#pragma once

// Operator reverse Young and Heinz inequalities on SPD matrices, decided in
// the Loewner order. Each check assembles LHS and RHS from operator means and
// reports the smallest eigenvalue of RHS - LHS.

#include <optional>
#include <string>

#include "meanbound/matrix.hpp"
#include "meanbound/means.hpp"
#include "meanbound/scalar_bounds.hpp"

namespace meanbound {

enum class OperatorFamily { t6, t66, c3, c33 };

inline std::string_view to_string(OperatorFamily f) {
  switch (f) {
    case OperatorFamily::t6: return "theorem-t6";
    case OperatorFamily::t66: return "theorem-t66";
    case OperatorFamily::c3: return "corollary-c3";
    case OperatorFamily::c33: return "corollary-c33";
  }
  return "?";
}

inline std::optional<OperatorFamily> parse_operator_family(std::string_view s) {
  if (s == "theorem-t6" || s == "t6") return OperatorFamily::t6;
  if (s == "theorem-t66" || s == "t66") return OperatorFamily::t66;
  if (s == "corollary-c3" || s == "c3") return OperatorFamily::c3;
  if (s == "corollary-c33" || s == "c33") return OperatorFamily::c33;
  return std::nullopt;
}

/// Hypothesis window of an operator family; identical to its scalar source.
inline Hypothesis operator_hypothesis(OperatorFamily f, int n, Branch br) {
  return (f == OperatorFamily::t6 || f == OperatorFamily::c3) ? main_reverse_hypothesis(n, br)
                                                               : extended_sc_hypothesis(n, br);
}

inline int operator_min_depth(OperatorFamily f) {
  return (f == OperatorFamily::t6 || f == OperatorFamily::c3) ? 2 : 1;
}

struct OperatorBoundReport {
  std::string family;
  std::string branch;
  std::size_t dim = 0;
  double min_eig_gap = 0.0;  ///< smallest eigenvalue of RHS - LHS
  double tol = 0.0;
  bool hypothesis_ok = false;
  bool holds = false;
  bool degenerate = false;    ///< A == B up to 1e-13 relative; gap forced to 0
  bool sharp_regime = false;  ///< v in [0,1]
  double v = 0.0;
  int n = 0;
  std::string fingerprint_a;
  std::string fingerprint_b;
};

/// The two sides of an operator inequality.
struct OperatorSides {
  SymMatrix lhs;
  SymMatrix rhs;
};

inline constexpr double kDegenerateRelTol = 1e-13;

namespace detail {

class MeanTable {
 public:
  MeanTable(const SpdMatrix& a, const SpdMatrix& b) : a_(a), b_(b), path_(a, b) {}

  /// A sharp_w B with the endpoints returned exactly.
  SymMatrix sharp(double w) const {
    if (w == 0.0) return a_.matrix();
    if (w == 1.0) return b_.matrix();
    return path_.at(w);
  }
  SymMatrix heinz(double w) const { return SymMatrix::combine(0.5, sharp(w), 0.5, sharp(1.0 - w)); }
  SymMatrix arith(double w) const { return arithmetic_mean(a_.matrix(), b_.matrix(), Weight(w)); }

 private:
  const SpdMatrix& a_;
  const SpdMatrix& b_;
  GeometricPath path_;
};

inline void require_operator_depth(OperatorFamily f, int n) {
  if (n < operator_min_depth(f)) {
    throw std::domain_error(std::string(to_string(f)) + " requires n >= " +
                            std::to_string(operator_min_depth(f)));
  }
}

}  // namespace detail

/// Builds LHS and RHS for the given family. Dyadic weights are exact in
/// floating point; correction sums run from k = n down before the dominant
/// mean is added.
inline OperatorSides operator_sides(OperatorFamily f, const SpdMatrix& a, const SpdMatrix& b,
                                    const Weight& w, const Depth& depth, Branch br) {
  detail::require_same_dim(a.dim(), b.dim());
  detail::require_operator_depth(f, depth.value());
  const detail::MeanTable t(a, b);
  const double v = w.value();
  const int n = depth.value();
  const bool heinz = f == OperatorFamily::c3 || f == OperatorFamily::c33;
  auto mean_at = [&](double x) { return heinz ? t.heinz(x) : t.sharp(x); };
  const SymMatrix nabla = t.arith(0.5);
  const std::size_t dim = a.dim();
  SymMatrix corr = SymMatrix::from_rows(dim, std::vector<double>(dim * dim, 0.0));

  if (f == OperatorFamily::t6 || f == OperatorFamily::c3) {
    const SymMatrix gm = t.sharp(0.5);
    const double sign = br == Branch::i ? 1.0 : -1.0;
    for (int k = n; k >= 2; --k) {
      const double w1 = (detail::pow2(k - 1) + sign) / detail::pow2(k);
      const double w2 = (detail::pow2(k - 2) + sign) / detail::pow2(k - 1);
      const SymMatrix term = gm - 2.0 * mean_at(w1) + mean_at(w2);
      corr = SymMatrix::combine(1.0, corr, detail::pow2(k - 2), term);
    }
    const double lead = br == Branch::i ? 2.0 * (1.0 - v) : 2.0 * v;
    const double tail = br == Branch::i ? 2.0 * v - 1.0 : 1.0 - 2.0 * v;
    SymMatrix rest = SymMatrix::combine(lead, nabla - gm, tail, corr);
    const SymMatrix dominant = heinz ? t.heinz(v) : t.sharp(v);
    return {heinz ? nabla : t.arith(v), dominant + rest};
  }

  // t66 / c33
  const SymMatrix& end = br == Branch::i ? a.matrix() : b.matrix();
  for (int k = n; k >= 1; --k) {
    double w1, w2;
    if (br == Branch::i) {
      w1 = 1.0 / detail::pow2(k);
      w2 = 1.0 / detail::pow2(k - 1);
    } else {
      w1 = (detail::pow2(k) - 1.0) / detail::pow2(k);
      w2 = (detail::pow2(k - 1) - 1.0) / detail::pow2(k - 1);
    }
    const SymMatrix base = heinz ? nabla : end;
    const SymMatrix term = base - 2.0 * mean_at(w1) + mean_at(w2);
    corr = SymMatrix::combine(1.0, corr, detail::pow2(k - 1), term);
  }
  const double coeff = br == Branch::i ? v : 1.0 - v;
  const SymMatrix dominant = heinz ? t.heinz(v) : t.sharp(v);
  return {heinz ? nabla : t.arith(v), SymMatrix::combine(1.0, dominant, coeff, corr)};
}

/// Checks one operator inequality and reports the Loewner verdict.
inline OperatorBoundReport check_operator(OperatorFamily f, const SpdMatrix& a,
                                          const SpdMatrix& b, const Weight& w, const Depth& n,
                                          Branch br) {
  detail::require_same_dim(a.dim(), b.dim());
  detail::require_operator_depth(f, n.value());
  OperatorBoundReport r;
  r.family = std::string(to_string(f));
  r.branch = std::string(to_string(br));
  r.dim = a.dim();
  r.v = w.value();
  r.n = n.value();
  r.sharp_regime = w.in_unit_interval();
  r.hypothesis_ok = operator_hypothesis(f, n.value(), br).admits(w.value());
  r.fingerprint_a = fingerprint(a.matrix());
  r.fingerprint_b = fingerprint(b.matrix());

  if ((a.matrix() - b.matrix()).frobenius_norm() <= kDegenerateRelTol * a.matrix().frobenius_norm()) {
    r.degenerate = true;
    r.min_eig_gap = 0.0;
    r.tol = 2.0 * kLoewnerTolFactor * a.matrix().frobenius_norm();
    r.holds = true;
    return r;
  }
  const OperatorSides s = operator_sides(f, a, b, w, n, br);
  const LoewnerVerdict lv = loewner_leq(s.lhs, s.rhs);
  r.min_eig_gap = lv.min_eig_diff;
  r.tol = lv.tol;
  r.holds = lv.holds;
  return r;
}

inline OperatorBoundReport theorem_t6(const SpdMatrix& a, const SpdMatrix& b, const Weight& w,
                                      const Depth& n, Branch br) {
  return check_operator(OperatorFamily::t6, a, b, w, n, br);
}

inline OperatorBoundReport theorem_t66(const SpdMatrix& a, const SpdMatrix& b, const Weight& w,
                                       const Depth& n, Branch br) {
  return check_operator(OperatorFamily::t66, a, b, w, n, br);
}

inline OperatorBoundReport corollary_c3(const SpdMatrix& a, const SpdMatrix& b, const Weight& w,
                                        const Depth& n, Branch br) {
  return check_operator(OperatorFamily::c3, a, b, w, n, br);
}

inline OperatorBoundReport corollary_c33(const SpdMatrix& a, const SpdMatrix& b, const Weight& w,
                                         const Depth& n, Branch br) {
  return check_operator(OperatorFamily::c33, a, b, w, n, br);
}

}  // namespace meanbound
