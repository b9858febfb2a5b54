#pragma once

// Dense complex linear algebra for the 2-, 3- and 6-dimensional operators
// of a qubit-qutrit system.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spindimer/error.hpp"

namespace spindimer {

using cplx = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSpectralTol = 1e-10;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

  /// Row-major nested initializer: {{a, b}, {c, d}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
  [[nodiscard]] std::span<const cplx> entries() const noexcept { return data_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  [[nodiscard]] ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  [[nodiscard]] ComplexMatrix transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  [[nodiscard]] cplx trace() const {
    require_square("trace");
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  [[nodiscard]] double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  /// Largest entrywise deviation |M_ij - conj(M_ji)|.
  [[nodiscard]] double hermiticity_defect() const {
    if (!is_square()) return INFINITY;
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j) {
        const double e = std::abs((*this)(i, j) - std::conj((*this)(j, i)));
        if (!std::isfinite(e)) return INFINITY;
        d = std::max(d, e);
      }
    return d;
  }

  /// Hermiticity gate, scaled by the magnitude of the largest entry so that
  /// operators in Kelvin behave like operators in units of J.
  [[nodiscard]] bool is_hermitian(double tol = kHermitianTol) const {
    return hermiticity_defect() <= tol * std::max(1.0, max_abs());
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product: inner dimensions differ");
    ComplexMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_square(const char* what) const {
    if (!is_square()) throw DimensionMismatch(std::string(what) + ": matrix is not square");
  }
  void require_same_shape(const ComplexMatrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionMismatch(std::string(what) + ": shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Largest entrywise |A_ij - B_ij|.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("max_abs_diff: shapes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

/// Tensor product with block ordering A[i][j] * B.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

/// |v><v| for a column vector given as a span.
inline ComplexMatrix outer(std::span<const cplx> v) {
  ComplexMatrix r(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = v[i] * std::conj(v[j]);
  return r;
}

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]

  [[nodiscard]] std::vector<cplx> vector(std::size_t k) const {
    std::vector<cplx> v(eigenvectors.rows());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
  }
};

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot A_pq, then applies the
/// real symmetric Jacobi rotation. Sweeps stop once the off-diagonal
/// Frobenius mass falls below 1e-14 relative to ||M||_F.
inline EigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("hermitian_eig: matrix is not square");
  if (!m.is_hermitian()) throw NonHermitianInput("hermitian_eig: input is not Hermitian");

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(m.frobenius_norm(), 1e-300);
  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_mass() >= 1e-14 * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g <= 1e-300) continue;
        const cplx phase = a(p, q) / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Rotation R acting on columns p, q: R = diag(1, conj(phase)) * [[c, s], [-s, c]].
        const cplx rpp = c;
        const cplx rpq = s;
        const cplx rqp = -s * std::conj(phase);
        const cplx rqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * rpp + akq * rqp;
          a(k, q) = akp * rpq + akq * rqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(rpp) * apk + std::conj(rqp) * aqk;
          a(q, k) = std::conj(rpq) * apk + std::conj(rqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * rpp + vkq * rqp;
          v(k, q) = vkp * rpq + vkq * rqq;
        }
      }
    }
  }
  if (off_mass() >= 1e-12 * scale)
    throw NumericalError("hermitian_eig: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenSystem es;
  es.eigenvalues.resize(n);
  es.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    es.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.eigenvectors(i, k) = v(i, order[k]);
  }
  return es;
}

inline std::vector<double> eigenvalues(const ComplexMatrix& m) { return hermitian_eig(m).eigenvalues; }

/// Subsystem removed by partial_trace on a qubit (x) qutrit operator.
enum class Traced { qubit, qutrit };

inline constexpr std::size_t kQubitDim = 2;
inline constexpr std::size_t kQutritDim = 3;
inline constexpr std::size_t kPairDim = kQubitDim * kQutritDim;

inline void require_pair_operator(const ComplexMatrix& m, const char* what) {
  if (m.rows() != kPairDim || m.cols() != kPairDim)
    throw DimensionMismatch(std::string(what) + ": expected a 6x6 qubit-qutrit operator");
}

/// Marginal of a 6x6 operator in the qubit (x) qutrit basis (index 3a + b).
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Traced traced) {
  require_pair_operator(rho, "partial_trace");
  if (traced == Traced::qutrit) {
    ComplexMatrix r(kQubitDim, kQubitDim);
    for (std::size_t a = 0; a < kQubitDim; ++a)
      for (std::size_t c = 0; c < kQubitDim; ++c)
        for (std::size_t b = 0; b < kQutritDim; ++b) r(a, c) += rho(3 * a + b, 3 * c + b);
    return r;
  }
  ComplexMatrix r(kQutritDim, kQutritDim);
  for (std::size_t b = 0; b < kQutritDim; ++b)
    for (std::size_t d = 0; d < kQutritDim; ++d)
      for (std::size_t a = 0; a < kQubitDim; ++a) r(b, d) += rho(3 * a + b, 3 * a + d);
  return r;
}

/// Transpose on the qubit index only: <a b| X^{T_a} |c d> = <c b| X |a d>.
inline ComplexMatrix partial_transpose_qubit(const ComplexMatrix& rho) {
  require_pair_operator(rho, "partial_transpose_qubit");
  ComplexMatrix r(kPairDim, kPairDim);
  for (std::size_t a = 0; a < kQubitDim; ++a)
    for (std::size_t b = 0; b < kQutritDim; ++b)
      for (std::size_t c = 0; c < kQubitDim; ++c)
        for (std::size_t d = 0; d < kQutritDim; ++d) r(3 * a + b, 3 * c + d) = rho(3 * c + b, 3 * a + d);
  return r;
}

inline double trace_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (double l : hermitian_eig(m).eigenvalues) s += std::abs(l);
  return s;
}

/// Re Tr(A B); exact for Hermitian inputs.
inline double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows() || a.rows() != a.cols())
    throw DimensionMismatch("hs_inner: shapes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += (a(i, k) * b(k, i)).real();
  return s;
}

}  // namespace spindimer
