#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lagrep/jet.hpp"
#include "lagrep/linalg.hpp"
#include "lagrep/tensor.hpp"

namespace lagrep {

/// Scalar differential operator sum_k c_k D_x^k, coefficients to the left.
/// Zero coefficients are never stored, so equality is structural.
class DiffOp {
 public:
  using CoeffMap = std::map<std::uint32_t, DiffPoly>;

  DiffOp() = default;
  explicit DiffOp(std::size_t ncomp, int jet_bound = kDefaultJetBound)
      : n_(ncomp), bound_(jet_bound) {}
  /// c D_x^k.
  static DiffOp term(const DiffPoly& c, std::uint32_t k);
  static DiffOp dx(std::size_t ncomp, std::uint32_t k = 1, int jet_bound = kDefaultJetBound);

  std::size_t ncomp() const { return n_; }
  int jet_bound() const { return bound_; }
  const CoeffMap& coefficients() const { return c_; }
  DiffPoly coefficient(std::uint32_t k) const;
  bool is_zero() const { return c_.empty(); }
  /// Highest power of D_x (0 for the zero operator).
  std::uint32_t order() const { return c_.empty() ? 0 : c_.rbegin()->first; }

  void add(std::uint32_t k, const DiffPoly& c);

  DiffOp operator-() const;
  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  /// Left multiplication by a function.
  friend DiffOp operator*(const DiffPoly& f, const DiffOp& a);
  friend DiffOp operator*(const Rational& s, const DiffOp& a);
  friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.c_ == b.c_; }

  /// sum_k c_k D_x^k(f).
  DiffPoly apply(const DiffPoly& f) const;

  DiffOp with_jet_bound(int jet_bound) const;

  template <class F>
  DiffOp map_coefficients(F&& f) const {
    DiffOp r(n_, bound_);
    for (const auto& [k, c] : c_) r.add(k, f(c));
    return r;
  }

 private:
  std::size_t n_ = 0;
  int bound_ = kDefaultJetBound;
  CoeffMap c_;
};

/// Normal-ordered product via (c D^a)(d D^b) = sum_k C(a,k) c D^k(d) D^(a+b-k).
DiffOp compose(const DiffOp& p, const DiffOp& q);
/// Formal adjoint: (c D^k)^* = (-D)^k o c.
DiffOp adjoint(const DiffOp& p);

/// Square matrix of scalar differential operators over n field components.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(std::size_t dim, std::size_t ncomp, int jet_bound = kDefaultJetBound);
  static OperatorMatrix identity(std::size_t n, int jet_bound = kDefaultJetBound);
  /// Constant matrix times D_x^k.
  static OperatorMatrix constant(const QMatrix& k, std::uint32_t power,
                                 int jet_bound = kDefaultJetBound);
  /// Function matrix as a multiplication (order-zero) operator.
  static OperatorMatrix multiplication(const FMatrix& m, int jet_bound = kDefaultJetBound);

  std::size_t dim() const { return dim_; }
  std::size_t ncomp() const { return n_; }
  int jet_bound() const { return bound_; }
  DiffOp& operator()(std::size_t i, std::size_t j) { return e_[i * dim_ + j]; }
  const DiffOp& operator()(std::size_t i, std::size_t j) const { return e_[i * dim_ + j]; }

  bool is_zero() const;
  std::uint32_t order() const;
  /// Coefficient matrix of D_x^k (DiffPoly entries).
  std::vector<std::vector<DiffPoly>> coefficient(std::uint32_t k) const;

  OperatorMatrix transpose() const;
  OperatorMatrix with_jet_bound(int jet_bound) const;
  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(const Rational& s, OperatorMatrix a);
  OperatorMatrix operator-() const { return Rational(-1) * *this; }
  friend bool operator==(const OperatorMatrix& a, const OperatorMatrix& b) {
    return a.dim_ == b.dim_ && a.e_ == b.e_;
  }

  template <class F>
  OperatorMatrix map_coefficients(F&& f) const {
    OperatorMatrix r(dim_, n_, bound_);
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].map_coefficients(f);
    return r;
  }

 private:
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  int bound_ = kDefaultJetBound;
  std::vector<DiffOp> e_;
};

OperatorMatrix compose(const OperatorMatrix& p, const OperatorMatrix& q);
OperatorMatrix adjoint(const OperatorMatrix& p);
/// Component i = sum_j sum_k c^{ij}_k D_x^k(psi_j).
std::vector<DiffPoly> apply(const OperatorMatrix& p, const std::vector<DiffPoly>& psi);
Covector apply_to_covector(const OperatorMatrix& p, const Covector& psi);
EvolutionField apply_to_field(const OperatorMatrix& p, const Covector& psi);

bool is_skew_adjoint(const OperatorMatrix& p);
/// True iff every term of the D_x^k coefficient has x-grade m - k.
bool is_homogeneous(const OperatorMatrix& p, std::uint32_t m);

/// Thrown when an operator does not have the expected homogeneous shape.
struct ShapeError : InputError {
  using InputError::InputError;
};

/// Coefficient tensors of a homogeneous operator. For order 3:
///   g^{ij} D^3 + b^{ij}_k u^k_x D^2 + (c^{ij}_k u^k_xx + c^{ij}_{km} u^k_x u^m_x) D
///   + d^{ij}_k u^k_xxx + d^{ij}_{km} u^k_xx u^m_x + d^{ij}_{kmn} u^k_x u^m_x u^n_x
/// with c_{km} and d_{kmn} symmetrized. For order 1: g^{ij} D + b^{ij}_k u^k_x.
/// Index layout: g(i,j), b(i,j,k), c1(i,j,k), c2(i,j,k,m), d1(i,j,k), d2(i,j,k,m),
/// d3(i,j,k,m,n).
struct HomogeneousTensors {
  std::uint32_t order = 0;
  Tensor g, b, c1, c2, d1, d2, d3;
};
HomogeneousTensors leading_and_lower(const OperatorMatrix& p, std::uint32_t m);
/// Inverse of leading_and_lower (rebuilds the operator from its tensors).
OperatorMatrix from_tensors(const HomogeneousTensors& t, int jet_bound = kDefaultJetBound);

/// If p = D_x o q o D_x, returns q.
std::optional<OperatorMatrix> strip_outer_dx(const OperatorMatrix& p);

/// Point transformation between source coordinates a and target coordinates u,
/// given by the inverse map a(u) (RatFn in u) and optionally the forward map
/// u(a). The Jacobian du/da is obtained as the exact inverse of da/du.
class PointTransform {
 public:
  /// Throws InputError when the Jacobian is singular or forward o inverse != id.
  PointTransform(std::vector<RatFn> inverse, std::optional<std::vector<RatFn>> forward = {});

  std::size_t dim() const { return inverse_.size(); }
  const std::vector<RatFn>& inverse_map() const { return inverse_; }
  const std::optional<std::vector<RatFn>>& forward_map() const { return forward_; }
  /// d a^n / d u^i as matrix (n, i).
  const FMatrix& da_du() const { return da_du_; }
  /// d u^i / d a^n as matrix (i, n), expressed in u.
  const FMatrix& du_da() const { return du_da_; }

  /// Rewrites a source-coordinate differential polynomial in target
  /// coordinates: a^n -> a^n(u), a^n_sigma -> D_x^sigma(a^n(u)).
  DiffPoly pull_back(const DiffPoly& f, int jet_bound) const;

  /// First this transform (a -> u), then `next` (u -> w): composite a -> w.
  PointTransform then(const PointTransform& next) const;

 private:
  std::vector<RatFn> inverse_;
  std::optional<std::vector<RatFn>> forward_;
  FMatrix da_du_;
  FMatrix du_da_;
};

/// Transforms a contravariant operator: A(u)^{ij} = (du^i/da^n) o A^{nm}(a(u)) o (du^j/da^m).
OperatorMatrix change_coordinates(const OperatorMatrix& p, const PointTransform& t);

}  // namespace lagrep
