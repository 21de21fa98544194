#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "lagrep/error.hpp"
#include "lagrep/linalg.hpp"
#include "lagrep/ratfn.hpp"

namespace lagrep {

/// Dense tensor of RatFn entries with `rank` indices each running over
/// `dim` values. Index order is exactly the order written in formulas,
/// e.g. L(n, s, m) for L_{nsm}.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rank, std::size_t dim, std::size_t nvars)
      : rank_(rank), dim_(dim), nvars_(nvars), a_(size_for(rank, dim), RatFn(nvars)) {}

  static Tensor from_matrix(const FMatrix& m) {
    Tensor t(2, m.rows(), m.rows() ? m(0, 0).nvars() : 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
    return t;
  }
  FMatrix to_matrix() const {
    if (rank_ != 2) throw InputError("tensor is not a matrix");
    FMatrix m(dim_, dim_, RatFn(nvars_));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  std::size_t rank() const { return rank_; }
  std::size_t dim() const { return dim_; }
  std::size_t nvars() const { return nvars_; }

  template <class... I>
  RatFn& operator()(I... idx) {
    return a_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <class... I>
  const RatFn& operator()(I... idx) const {
    return a_[offset({static_cast<std::size_t>(idx)...})];
  }
  RatFn& at(const std::vector<std::size_t>& idx) { return a_[offset(idx)]; }
  const RatFn& at(const std::vector<std::size_t>& idx) const { return a_[offset(idx)]; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.rank_ == b.rank_ && a.dim_ == b.dim_ && a.a_ == b.a_;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) {
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
    return a;
  }
  friend Tensor operator-(Tensor a, const Tensor& b) {
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
    return a;
  }
  friend Tensor operator*(const Rational& s, Tensor a) {
    for (auto& x : a.a_) x *= s;
    return a;
  }

  /// True when swapping index positions p and q leaves the tensor invariant
  /// (sign = +1) or negates it (sign = -1).
  bool has_symmetry(std::size_t p, std::size_t q, int sign) const;
  /// Totally skew-symmetric in all indices.
  bool is_totally_skew() const;

  /// Visits every multi-index in row-major order.
  template <class F>
  void for_each_index(F&& f) const {
    std::vector<std::size_t> idx(rank_, 0);
    for (std::size_t flat = 0; flat < a_.size(); ++flat) {
      f(idx);
      for (std::size_t k = rank_; k-- > 0;) {
        if (++idx[k] < dim_) break;
        idx[k] = 0;
      }
    }
  }

 private:
  static std::size_t size_for(std::size_t rank, std::size_t dim) {
    std::size_t s = 1;
    for (std::size_t k = 0; k < rank; ++k) s *= dim;
    return s;
  }
  std::size_t offset(const std::vector<std::size_t>& idx) const {
    if (idx.size() != rank_) throw InputError("tensor index has the wrong rank");
    std::size_t o = 0;
    for (auto i : idx) {
      if (i >= dim_) throw InputError("tensor index out of range");
      o = o * dim_ + i;
    }
    return o;
  }

  std::size_t rank_ = 0;
  std::size_t dim_ = 0;
  std::size_t nvars_ = 0;
  std::vector<RatFn> a_;
};

}  // namespace lagrep
