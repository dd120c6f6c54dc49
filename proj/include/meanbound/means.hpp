#pragma once

// Operator means of SPD matrices and the Loewner order.
//
//   A nabla_v B = (1-v)A + vB
//   A natural_v B = A^{1/2} (A^{-1/2} B A^{-1/2})^v A^{1/2}   (any real v)
//   H^_v(A,B) = (A natural_v B + A natural_{1-v} B) / 2
//
// For v in [0,1] the geometric expression is the Kubo-Ando weighted
// geometric mean; outside it is the same formula.

#include <optional>
#include <vector>

#include "meanbound/matrix.hpp"
#include "meanbound/scalar_bounds.hpp"

namespace meanbound {

/// (1-v)A + vB. Not certified SPD: for v outside [0,1] it need not be.
inline SymMatrix arithmetic_mean(const SymMatrix& a, const SymMatrix& b, const Weight& w) {
  detail::require_same_dim(a.dim(), b.dim());
  return SymMatrix::combine(1.0 - w.value(), a, w.value(), b);
}

/// Caches the factorization of C = A^{-1/2} B A^{-1/2} so that A natural_w B
/// can be formed for many weights w. With M = A^{1/2} P and C = P diag(mu) P^T,
///   A natural_w B = M diag(mu^w) M^T.
class GeometricPath {
 public:
  GeometricPath(const SpdMatrix& a, const SpdMatrix& b) : n_(a.dim()) {
    detail::require_same_dim(a.dim(), b.dim());
    const EigenDecomp& ea = a.eigen();
    const SymMatrix root = ea.apply([](double l) { return std::sqrt(l); });
    const SymMatrix inv_root = ea.apply([](double l) { return 1.0 / std::sqrt(l); });

    // C = X B X with X = A^{-1/2}.
    std::vector<double> xb(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += inv_root(i, k) * b(k, j);
        xb[i * n_ + j] = s;
      }
    std::vector<double> c(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += xb[i * n_ + k] * inv_root(k, j);
        c[i * n_ + j] = s;
      }
    const EigenDecomp ec = eigh(SymMatrix::from_rows(n_, std::move(c), kDerivedSymmetryTol));
    if (!(ec.lambda.front() > 0.0)) {
      throw numerics_error("A^{-1/2} B A^{-1/2} lost positive definiteness", ec.lambda.front());
    }
    mu_ = ec.lambda;
    m_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += root(i, k) * ec.vec(k, j);
        m_[i * n_ + j] = s;
      }
  }

  std::size_t dim() const noexcept { return n_; }

  /// Spectrum of A^{-1/2} B A^{-1/2}, ascending.
  const std::vector<double>& inner_spectrum() const noexcept { return mu_; }

  /// A natural_w B, exactly symmetric.
  SymMatrix at(double w) const {
    std::vector<double> d(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      d[k] = std::pow(mu_[k], w);
      if (!std::isfinite(d[k])) {
        throw numerics_error("geometric mean weight " + std::to_string(w) +
                                 " overflows the floating range",
                             d[k]);
      }
    }
    std::vector<double> out(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += m_[i * n_ + k] * d[k] * m_[j * n_ + k];
        out[i * n_ + j] = s;
        out[j * n_ + i] = s;
      }
    return SymMatrix::from_rows(n_, std::move(out));
  }

  /// (A natural_w B + A natural_{1-w} B) / 2.
  SymMatrix heinz(double w) const { return SymMatrix::combine(0.5, at(w), 0.5, at(1.0 - w)); }

 private:
  std::size_t n_;
  std::vector<double> mu_;
  std::vector<double> m_;  // A^{1/2} P, row-major
};

/// Weighted geometric mean for any real v (the Kubo-Ando mean when
/// w.in_unit_interval()).
inline SpdMatrix geometric_mean(const SpdMatrix& a, const SpdMatrix& b, const Weight& w) {
  return SpdMatrix(GeometricPath(a, b).at(w.value()));
}

/// Heinz mean; symmetric under v <-> 1-v by construction.
inline SpdMatrix heinz_mean(const SpdMatrix& a, const SpdMatrix& b, const Weight& w) {
  return SpdMatrix(GeometricPath(a, b).heinz(w.value()));
}

inline constexpr double kLoewnerTolFactor = 1e-8;

struct LoewnerVerdict {
  double min_eig_diff = 0.0;  ///< smallest eigenvalue of B - A
  double tol = 0.0;
  bool holds = false;
};

inline double default_loewner_tol(const SymMatrix& a, const SymMatrix& b) {
  return kLoewnerTolFactor * (a.frobenius_norm() + b.frobenius_norm());
}

/// A <= B in the Loewner order, decided by the smallest eigenvalue of B - A.
inline LoewnerVerdict loewner_leq(const SymMatrix& a, const SymMatrix& b,
                                  std::optional<double> tol = std::nullopt) {
  detail::require_same_dim(a.dim(), b.dim());
  LoewnerVerdict v;
  v.tol = tol.value_or(default_loewner_tol(a, b));
  if (v.tol < 0.0) throw std::invalid_argument("Loewner tolerance must be nonnegative");
  v.min_eig_diff = eigh(b - a).lambda.front();
  v.holds = v.min_eig_diff >= -v.tol;
  return v;
}

}  // namespace meanbound
