#pragma once

// Dense real symmetric matrices, their spectral factorization by cyclic
// Jacobi rotations, and symmetric positive-definite matrices with
// functional-calculus powers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace meanbound {

/// Raised when an iterative kernel fails; carries the residual it stopped at.
class numerics_error : public std::runtime_error {
 public:
  numerics_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Raised when a matrix is rejected for being asymmetric or not positive
/// definite.
class matrix_error : public std::invalid_argument {
 public:
  matrix_error(const std::string& what, double residual)
      : std::invalid_argument(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

inline constexpr double kInputSymmetryTol = 1e-12;
inline constexpr double kDerivedSymmetryTol = 1e-10;

namespace detail {

inline double frobenius(std::span<const double> data) noexcept {
  double scale = 0.0;
  for (double x : data) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : data) {
    const double y = x / scale;
    s += y * y;
  }
  return scale * std::sqrt(s);
}

inline void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
  }
}

}  // namespace detail

/// Dense symmetric matrix, row-major. Entries satisfy m(i,j) == m(j,i)
/// exactly.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Symmetrizes `rows` (row-major dim*dim) as (M + M^T)/2. Throws
  /// matrix_error when ||M - M^T||_F exceeds rel_tol * ||M||_F.
  static SymMatrix from_rows(std::size_t dim, std::vector<double> rows,
                             double rel_tol = kInputSymmetryTol) {
    if (dim == 0) throw std::invalid_argument("matrix dimension must be positive");
    if (rows.size() != dim * dim) {
      throw std::invalid_argument("expected " + std::to_string(dim * dim) + " entries, got " +
                                  std::to_string(rows.size()));
    }
    for (double x : rows) {
      if (!std::isfinite(x)) throw std::invalid_argument("matrix entries must be finite");
    }
    double asym = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) {
        const double d = rows[i * dim + j] - rows[j * dim + i];
        asym += 2.0 * d * d;
      }
    }
    asym = std::sqrt(asym);
    const double norm = detail::frobenius(rows);
    if (asym > rel_tol * norm) {
      std::ostringstream os;
      os.precision(3);
      os << "matrix is not symmetric: ||M - M^T||_F = " << asym << " exceeds " << rel_tol
         << " * ||M||_F = " << rel_tol * norm;
      throw matrix_error(os.str(), asym);
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) {
        const double m = 0.5 * (rows[i * dim + j] + rows[j * dim + i]);
        rows[i * dim + j] = m;
        rows[j * dim + i] = m;
      }
    }
    SymMatrix s;
    s.dim_ = dim;
    s.data_ = std::move(rows);
    s.asymmetry_ = asym;
    return s;
  }

  static SymMatrix identity(std::size_t dim) { return diagonal(std::vector<double>(dim, 1.0)); }

  static SymMatrix diagonal(std::span<const double> diag) {
    const std::size_t n = diag.size();
    std::vector<double> rows(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) rows[i * n + i] = diag[i];
    return from_rows(n, std::move(rows));
  }

  static SymMatrix scalar(double x) { return from_rows(1, {x}); }

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  /// ||M - M^T||_F of the matrix this one was symmetrized from.
  double asymmetry_residual() const noexcept { return asymmetry_; }

  double frobenius_norm() const noexcept { return detail::frobenius(data_); }

  friend SymMatrix operator+(const SymMatrix& x, const SymMatrix& y) {
    return combine(1.0, x, 1.0, y);
  }
  friend SymMatrix operator-(const SymMatrix& x, const SymMatrix& y) {
    return combine(1.0, x, -1.0, y);
  }
  friend SymMatrix operator*(double s, const SymMatrix& x) {
    SymMatrix r = x;
    for (double& e : r.data_) e *= s;
    return r;
  }

  /// alpha * x + beta * y, entrywise (stays exactly symmetric).
  static SymMatrix combine(double alpha, const SymMatrix& x, double beta, const SymMatrix& y) {
    detail::require_same_dim(x.dim_, y.dim_);
    SymMatrix r = x;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = alpha * x.data_[k] + beta * y.data_[k];
    r.asymmetry_ = 0.0;
    return r;
  }

  bool operator==(const SymMatrix& other) const noexcept {
    return dim_ == other.dim_ && data_ == other.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
  double asymmetry_ = 0.0;
};

/// Spectral factorization A = Q diag(lambda) Q^T with lambda ascending.
struct EigenDecomp {
  std::size_t dim = 0;
  std::vector<double> q;       ///< row-major; column k is the k-th eigenvector
  std::vector<double> lambda;  ///< ascending
  int sweeps = 0;

  double vec(std::size_t row, std::size_t col) const noexcept { return q[row * dim + col]; }

  /// Q diag(f(lambda)) Q^T assembled on the upper triangle and mirrored.
  template <class F>
  SymMatrix apply(F&& f) const {
    std::vector<double> fl(dim);
    for (std::size_t k = 0; k < dim; ++k) fl[k] = f(lambda[k]);
    std::vector<double> out(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += vec(i, k) * fl[k] * vec(j, k);
        out[i * dim + j] = s;
        out[j * dim + i] = s;
      }
    }
    return SymMatrix::from_rows(dim, std::move(out));
  }

  SymMatrix reconstruct() const {
    return apply([](double l) { return l; });
  }

  /// ||Q^T Q - I||_F
  double orthogonality_residual() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < dim; ++k) d += vec(k, i) * vec(k, j);
        if (i == j) d -= 1.0;
        s += d * d;
      }
    }
    return std::sqrt(s);
  }
};

inline constexpr int kJacobiMaxSweeps = 30;
inline constexpr double kJacobiRelTol = 1e-13;

/// Cyclic Jacobi eigensolver. Converged when the off-diagonal Frobenius norm
/// drops to 1e-13 * ||A||_F; throws numerics_error after 30 sweeps.
inline EigenDecomp eigh(const SymMatrix& s) {
  const std::size_t n = s.dim();
  std::vector<double> a(s.data().begin(), s.data().end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double o = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) o += 2.0 * a[i * n + j] * a[i * n + j];
    return std::sqrt(o);
  };

  const double target = kJacobiRelTol * s.frobenius_norm();
  int sweep = 0;
  double off = off_norm();
  while (off > target) {
    if (sweep == kJacobiMaxSweeps) {
      throw numerics_error("Jacobi eigensolver did not converge in " +
                               std::to_string(kJacobiMaxSweeps) +
                               " sweeps; off-diagonal norm " + std::to_string(off),
                           off);
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - sn * akq;
          a[k * n + q] = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - sn * aqk;
          a[q * n + k] = sn * apk + c * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - sn * vkq;
          v[k * n + q] = sn * vkp + c * vkq;
        }
      }
    }
    ++sweep;
    off = off_norm();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });

  EigenDecomp e;
  e.dim = n;
  e.sweeps = sweep;
  e.lambda.resize(n);
  e.q.resize(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    e.lambda[c] = a[order[c] * n + order[c]];
    for (std::size_t r = 0; r < n; ++r) e.q[r * n + c] = v[r * n + order[c]];
  }
  return e;
}

/// Symmetric positive-definite matrix together with its factorization.
class SpdMatrix {
 public:
  /// Rejects matrices whose smallest eigenvalue is not above
  /// dim * 1e-14 * ||A||_2.
  explicit SpdMatrix(SymMatrix m) : m_(std::move(m)), eig_(eigh(m_)) {
    const double norm2 = std::max(std::abs(eig_.lambda.front()), std::abs(eig_.lambda.back()));
    const double floor = static_cast<double>(m_.dim()) * 1e-14 * norm2;
    if (!(eig_.lambda.front() > floor) || norm2 == 0.0) {
      std::ostringstream os;
      os << "matrix is not positive definite: smallest eigenvalue " << eig_.lambda.front()
         << " <= " << floor;
      throw matrix_error(os.str(), eig_.lambda.front());
    }
  }

  /// Trusted construction from a matrix and its known positive spectrum.
  static SpdMatrix from_spectrum(SymMatrix m, EigenDecomp eig) {
    if (!(eig.lambda.front() > 0.0))
      throw matrix_error("spectrum is not positive", eig.lambda.front());
    return SpdMatrix(std::move(m), std::move(eig));
  }

  const SymMatrix& matrix() const noexcept { return m_; }
  const EigenDecomp& eigen() const noexcept { return eig_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  double certified_min_eig() const noexcept { return eig_.lambda.front(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

  operator const SymMatrix&() const noexcept { return m_; }  // NOLINT

 private:
  SpdMatrix(SymMatrix m, EigenDecomp eig) : m_(std::move(m)), eig_(std::move(eig)) {}

  SymMatrix m_;
  EigenDecomp eig_;
};

/// A^p = Q diag(lambda^p) Q^T for any real p.
inline SpdMatrix spd_power(const SpdMatrix& a, double p) {
  const EigenDecomp& e = a.eigen();
  EigenDecomp out = e;
  for (double& l : out.lambda) {
    l = std::pow(l, p);
    if (!std::isfinite(l) || !(l > 0.0)) {
      throw numerics_error("eigenvalue power out of floating range (p=" + std::to_string(p) + ")",
                           l);
    }
  }
  SymMatrix m = out.apply([](double l) { return l; });
  // Keep lambda ascending.
  if (p < 0.0) {
    const std::size_t n = out.dim;
    std::reverse(out.lambda.begin(), out.lambda.end());
    for (std::size_t r = 0; r < n; ++r)
      std::reverse(out.q.begin() + static_cast<std::ptrdiff_t>(r * n),
                   out.q.begin() + static_cast<std::ptrdiff_t>((r + 1) * n));
  }
  return SpdMatrix::from_spectrum(std::move(m), std::move(out));
}

/// FNV-1a hash of the entries, as 16 hex digits.
inline std::string fingerprint(const SymMatrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t dim = m.dim();
  mix(&dim, sizeof dim);
  for (double x : m.data()) mix(&x, sizeof x);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace meanbound
