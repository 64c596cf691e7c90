#pragma once

// Exact-size complex linear algebra for kets and operators of dimension <= 4.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fpb {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 4;

/// Tolerance for structural checks (unitarity, positivity, normalization).
inline constexpr double kStructuralTol = 1e-10;

namespace detail {

inline void require_finite(const Complex& z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("non-finite entry");
  }
}

}  // namespace detail

/// Complex column vector with 1 to 4 entries.
class ComplexVec {
 public:
  explicit ComplexVec(std::size_t size) : size_(size) {
    if (size == 0 || size > kMaxDim) {
      throw std::invalid_argument("ComplexVec size must be in [1, 4], got " + std::to_string(size));
    }
  }

  ComplexVec(std::initializer_list<Complex> entries) : ComplexVec(entries.size()) {
    std::size_t i = 0;
    for (const auto& z : entries) {
      detail::require_finite(z);
      data_[i++] = z;
    }
  }

  std::size_t size() const { return size_; }

  const Complex& operator[](std::size_t i) const { return data_[i]; }
  Complex& operator[](std::size_t i) { return data_[i]; }

  std::span<const Complex> entries() const { return {data_.data(), size_}; }

  double norm() const {
    double sum = 0.0;
    for (const auto& z : entries()) sum += std::norm(z);
    return std::sqrt(sum);
  }

  ComplexVec scaled(Complex factor) const {
    ComplexVec out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = factor * data_[i];
    return out;
  }

  /// Unit vector along this one; throws for the zero vector.
  ComplexVec normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    return scaled(1.0 / n);
  }

  friend ComplexVec operator+(const ComplexVec& a, const ComplexVec& b) {
    check_same_size(a, b);
    ComplexVec out(a.size_);
    for (std::size_t i = 0; i < a.size_; ++i) out[i] = a[i] + b[i];
    return out;
  }

  friend ComplexVec operator-(const ComplexVec& a, const ComplexVec& b) {
    check_same_size(a, b);
    ComplexVec out(a.size_);
    for (std::size_t i = 0; i < a.size_; ++i) out[i] = a[i] - b[i];
    return out;
  }

  friend bool operator==(const ComplexVec& a, const ComplexVec& b) {
    return a.size_ == b.size_ && std::equal(a.entries().begin(), a.entries().end(), b.entries().begin());
  }

 private:
  static void check_same_size(const ComplexVec& a, const ComplexVec& b) {
    if (a.size_ != b.size_) throw std::invalid_argument("ComplexVec dimension mismatch");
  }

  std::size_t size_;
  std::array<Complex, kMaxDim> data_{};
};

/// Row-major complex matrix with at most 4 rows and 4 columns.
class ComplexMat {
 public:
  ComplexMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0 || rows > kMaxDim || cols > kMaxDim) {
      throw std::invalid_argument("ComplexMat dimensions must be in [1, 4]");
    }
  }

  ComplexMat(std::initializer_list<std::initializer_list<Complex>> rows)
      : ComplexMat(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged ComplexMat initializer");
      std::size_t c = 0;
      for (const auto& z : row) {
        detail::require_finite(z);
        (*this)(r, c++) = z;
      }
      ++r;
    }
  }

  static ComplexMat identity(std::size_t n) {
    ComplexMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * kMaxDim + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * kMaxDim + c]; }

  ComplexMat adjoint() const {
    ComplexMat out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  Complex trace() const {
    if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  /// Submatrix keeping the listed rows and columns, in the given order.
  ComplexMat submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
    ComplexMat out(row_idx.size(), col_idx.size());
    for (std::size_t r = 0; r < row_idx.size(); ++r)
      for (std::size_t c = 0; c < col_idx.size(); ++c) out(r, c) = (*this)(row_idx[r], col_idx[c]);
    return out;
  }

  ComplexVec column(std::size_t c) const {
    ComplexVec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  ComplexMat scaled(Complex factor) const {
    ComplexMat out = *this;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) *= factor;
    return out;
  }

  friend ComplexMat operator+(const ComplexMat& a, const ComplexMat& b) {
    check_same_shape(a, b);
    ComplexMat out(a.rows_, a.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t c = 0; c < a.cols_; ++c) out(r, c) = a(r, c) + b(r, c);
    return out;
  }

  friend ComplexMat operator-(const ComplexMat& a, const ComplexMat& b) {
    check_same_shape(a, b);
    ComplexMat out(a.rows_, a.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t c = 0; c < a.cols_; ++c) out(r, c) = a(r, c) - b(r, c);
    return out;
  }

  friend ComplexMat operator*(const ComplexMat& a, const ComplexMat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("ComplexMat product dimension mismatch");
    ComplexMat out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t c = 0; c < b.cols_; ++c) {
        Complex sum = 0.0;
        for (std::size_t k = 0; k < a.cols_; ++k) sum += a(r, k) * b(k, c);
        out(r, c) = sum;
      }
    return out;
  }

  friend ComplexVec operator*(const ComplexMat& a, const ComplexVec& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("ComplexMat-vector dimension mismatch");
    ComplexVec out(a.rows_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < a.cols_; ++k) sum += a(r, k) * v[k];
      out[r] = sum;
    }
    return out;
  }

 private:
  static void check_same_shape(const ComplexMat& a, const ComplexMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("ComplexMat shape mismatch");
  }

  std::size_t rows_;
  std::size_t cols_;
  std::array<Complex, kMaxDim * kMaxDim> data_{};
};

/// Sum of conj(a_i) * b_i; conjugate-linear in the first argument.
inline Complex inner_product(const ComplexVec& a, const ComplexVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner_product dimension mismatch");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

/// |a><b|
inline ComplexMat outer_product(const ComplexVec& a, const ComplexVec& b) {
  ComplexMat out(a.size(), b.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < b.size(); ++c) out(r, c) = a[r] * std::conj(b[c]);
  return out;
}

/// Tensor product a (x) b, with b's index running fastest.
inline ComplexVec kron(const ComplexVec& a, const ComplexVec& b) {
  if (a.size() * b.size() > kMaxDim) throw std::invalid_argument("kron result exceeds dimension 4");
  ComplexVec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

inline double max_abs_entry(const ComplexMat& m) {
  double best = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) best = std::max(best, std::abs(m(r, c)));
  return best;
}

inline bool is_hermitian(const ComplexMat& m, double tol = kStructuralTol) {
  return m.is_square() && max_abs_entry(m - m.adjoint()) <= tol;
}

namespace detail {

// Cyclic Jacobi on a real symmetric matrix stored row-major in `a` (n x n).
inline std::vector<double> jacobi_symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (at(p, q) == 0.0) continue;
        const double tau = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(i, i);
  return out;
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// Dimensions 1-3 use closed-form characteristic-polynomial roots
/// (trigonometric form for the cubic). Dimension 4 falls back to Jacobi on
/// the 8x8 real embedding [[Re, -Im], [Im, Re]], whose spectrum is that of
/// the input with every eigenvalue doubled.
inline std::vector<double> hermitian_eigenvalues(const ComplexMat& m) {
  if (!m.is_square()) throw std::invalid_argument("eigenvalues of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<double> eig;
  if (n == 1) {
    eig = {m(0, 0).real()};
  } else if (n == 2) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    eig = {mid + rad, mid - rad};
  } else if (n == 3) {
    const double q = m.trace().real() / 3.0;
    const ComplexMat b = m - ComplexMat::identity(3).scaled(q);
    double p2 = 0.0;
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) p2 += std::norm(b(r, c));
    const double p = std::sqrt(p2 / 6.0);
    if (p <= 1e-300) {
      eig = {q, q, q};
    } else {
      const ComplexMat bn = b.scaled(1.0 / p);
      const Complex det = bn(0, 0) * (bn(1, 1) * bn(2, 2) - bn(1, 2) * bn(2, 1)) -
                          bn(0, 1) * (bn(1, 0) * bn(2, 2) - bn(1, 2) * bn(2, 0)) +
                          bn(0, 2) * (bn(1, 0) * bn(2, 1) - bn(1, 1) * bn(2, 0));
      const double r = std::clamp(0.5 * det.real(), -1.0, 1.0);
      const double angle = std::acos(r) / 3.0;
      constexpr double kThird = 2.0 * std::numbers::pi / 3.0;
      eig = {q + 2.0 * p * std::cos(angle), q + 2.0 * p * std::cos(angle + 2.0 * kThird),
             q + 2.0 * p * std::cos(angle + kThird)};
    }
  } else {
    std::vector<double> real(4 * n * n);
    const std::size_t w = 2 * n;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        real[r * w + c] = m(r, c).real();
        real[r * w + c + n] = -m(r, c).imag();
        real[(r + n) * w + c] = m(r, c).imag();
        real[(r + n) * w + c + n] = m(r, c).real();
      }
    auto doubled = detail::jacobi_symmetric_eigenvalues(std::move(real), w);
    std::sort(doubled.begin(), doubled.end(), std::greater<>());
    for (std::size_t i = 0; i < n; ++i) eig.push_back(doubled[2 * i]);
  }
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

/// Singular values, descending, padded with zeros to min(rows, cols).
inline std::vector<double> singular_values(const ComplexMat& m) {
  const ComplexMat gram = m.rows() <= m.cols() ? m * m.adjoint() : m.adjoint() * m;
  auto eig = hermitian_eigenvalues(gram);
  for (auto& e : eig) e = std::sqrt(std::max(e, 0.0));
  return eig;
}

inline double spectral_norm(const ComplexMat& m) { return singular_values(m).front(); }

inline bool is_unitary(const ComplexMat& m, double tol = kStructuralTol) {
  if (!m.is_square()) throw std::invalid_argument("is_unitary requires a square matrix");
  return max_abs_entry(m.adjoint() * m - ComplexMat::identity(m.rows())) <= tol;
}

inline bool is_psd(const ComplexMat& m, double tol = kStructuralTol) {
  if (!m.is_square()) throw std::invalid_argument("is_psd requires a square matrix");
  if (!is_hermitian(m, tol)) throw std::invalid_argument("is_psd requires a Hermitian matrix");
  return hermitian_eigenvalues(m).back() >= -tol;
}

}  // namespace fpb
