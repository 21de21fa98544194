#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lagrep/error.hpp"
#include "lagrep/mpoly.hpp"
#include "lagrep/ratfn.hpp"

namespace lagrep {

/// Dense matrix over an exact field (Rational or RatFn). The field's zero
/// and one are passed explicitly because RatFn carries a variable count.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, a_.empty() ? T() : a_[0]);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix dimension mismatch");
    Matrix c(a.rows_, b.cols_, a.a_[0] - a.a_[0]);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  /// Determinant by Gaussian elimination.
  T determinant() const {
    if (rows_ != cols_) throw InputError("determinant of a non-square matrix");
    Matrix m = *this;
    const T zero = a_[0] - a_[0];
    T det = one_like(zero);
    for (std::size_t c = 0; c < rows_; ++c) {
      std::size_t p = c;
      while (p < rows_ && is_zero(m(p, c))) ++p;
      if (p == rows_) return zero;
      if (p != c) {
        m.swap_rows(p, c);
        det = zero - det;
      }
      det = det * m(c, c);
      for (std::size_t r = c + 1; r < rows_; ++r) {
        if (is_zero(m(r, c))) continue;
        const T f = m(r, c) / m(c, c);
        for (std::size_t k = c; k < cols_; ++k) m(r, k) -= f * m(c, k);
      }
    }
    return det;
  }

  /// Exact inverse by Gauss-Jordan elimination; nullopt when singular.
  std::optional<Matrix> inverse() const {
    if (rows_ != cols_) throw InputError("inverse of a non-square matrix");
    const std::size_t n = rows_;
    const T zero = a_[0] - a_[0];
    Matrix m = *this;
    Matrix inv = identity(n, zero, one_like(zero));
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      while (p < n && is_zero(m(p, c))) ++p;
      if (p == n) return std::nullopt;
      m.swap_rows(p, c);
      inv.swap_rows(p, c);
      const T piv = m(c, c);
      for (std::size_t k = 0; k < n; ++k) {
        m(c, k) = m(c, k) / piv;
        inv(c, k) = inv(c, k) / piv;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || is_zero(m(r, c))) continue;
        const T f = m(r, c);
        for (std::size_t k = 0; k < n; ++k) {
          m(r, k) -= f * m(c, k);
          inv(r, k) -= f * inv(c, k);
        }
      }
    }
    return inv;
  }

 private:
  static bool is_zero(const Rational& q) { return q == 0; }
  static bool is_zero(const RatFn& f) { return f.is_zero(); }
  static Rational one_like(const Rational&) { return Rational(1); }
  static RatFn one_like(const RatFn& z) { return RatFn(z.nvars(), Rational(1)); }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(a, k), (*this)(b, k));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> a_;
};

using QMatrix = Matrix<Rational>;
using FMatrix = Matrix<RatFn>;

/// Embeds a rational matrix into rational functions of `nvars` variables.
inline FMatrix to_function_matrix(const QMatrix& q, std::size_t nvars) {
  FMatrix f(q.rows(), q.cols(), RatFn(nvars));
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) f(i, j) = RatFn(nvars, q(i, j));
  return f;
}

/// Solution set of an exact linear system A x = b over Q: a particular
/// solution and a basis of the kernel, or nullopt when inconsistent.
struct LinearSolution {
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> kernel;
};
std::optional<LinearSolution> solve_linear(const QMatrix& a, const std::vector<Rational>& b);

/// Signature (positive, negative, zero) of a symmetric rational matrix via
/// symmetric elimination (congruence), exact over Q.
struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};
Signature signature(const QMatrix& symmetric);

}  // namespace lagrep
