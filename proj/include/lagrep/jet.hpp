#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lagrep/error.hpp"
#include "lagrep/ratfn.hpp"

namespace lagrep {

/// Default bound on jet orders. Third-order operators applied to second-order
/// densities, followed by a few total derivatives, stay within it.
inline constexpr int kDefaultJetBound = 6;

/// Jet coordinate u^i_sigma with sigma >= 1. The base coordinates u^i live
/// inside the RatFn coefficients instead.
struct JetVar {
  std::uint32_t order = 1;
  std::uint32_t component = 0;

  friend auto operator<=>(const JetVar&, const JetVar&) = default;
};

/// Product of jet variables, sorted by JetVar with positive exponents.
using JetMonomial = std::vector<std::pair<JetVar, std::uint32_t>>;

/// Sum of jet monomials of each factor's order (the x-grading).
std::uint32_t grade_of(const JetMonomial& m);

/// Differential polynomial: polynomial in the jet variables with rational
/// function coefficients in the base coordinates. Terms are keyed by their
/// jet monomial; zero coefficients are never stored.
class DiffPoly {
 public:
  using TermMap = std::map<JetMonomial, RatFn>;

  DiffPoly() = default;
  explicit DiffPoly(std::size_t ncomp, int jet_bound = kDefaultJetBound)
      : n_(ncomp), bound_(jet_bound) {}
  DiffPoly(const RatFn& c, int jet_bound = kDefaultJetBound);

  static DiffPoly constant(std::size_t ncomp, const Rational& c,
                           int jet_bound = kDefaultJetBound);
  static DiffPoly base(std::size_t ncomp, std::size_t i, int jet_bound = kDefaultJetBound);
  /// u^i_sigma; sigma = 0 gives the base coordinate.
  static DiffPoly jet(std::size_t ncomp, std::size_t i, std::uint32_t sigma,
                      int jet_bound = kDefaultJetBound);
  static DiffPoly term(std::size_t ncomp, JetMonomial m, RatFn c,
                       int jet_bound = kDefaultJetBound);

  std::size_t ncomp() const { return n_; }
  int jet_bound() const { return bound_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True when no jet variables occur.
  bool is_jet_free() const;
  /// The coefficient of the empty jet monomial.
  RatFn jet_free_part() const;
  /// Coefficient of exactly this jet monomial (zero if absent).
  RatFn coefficient(const JetMonomial& m) const;
  /// Highest jet order present (0 when jet-free).
  std::uint32_t order() const;
  /// Common x-grade of all terms, or nullopt when inhomogeneous. Zero has grade 0.
  std::optional<std::uint32_t> grade() const;
  /// True when every coefficient is a polynomial in the base coordinates.
  bool has_polynomial_coefficients() const;

  DiffPoly operator-() const;
  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly& operator*=(const RatFn& c);
  DiffPoly& operator*=(const Rational& c);
  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(DiffPoly a, const RatFn& c) { return a *= c; }
  friend DiffPoly operator*(const RatFn& c, DiffPoly a) { return a *= c; }
  friend DiffPoly operator*(DiffPoly a, const Rational& c) { return a *= c; }
  friend DiffPoly operator*(const Rational& c, DiffPoly a) { return a *= c; }
  friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
    return a.terms_ == b.terms_;
  }

  DiffPoly pow(std::uint32_t k) const;

  /// Same polynomial under a different jet bound (BoundError if it does not fit).
  DiffPoly with_jet_bound(int jet_bound) const;

  /// d/du^i acting on coefficients.
  DiffPoly partial_base(std::size_t i) const;
  /// d/du^i_sigma (sigma >= 1).
  DiffPoly partial_jet(JetVar v) const;
  /// d/du^i_sigma for any sigma >= 0.
  DiffPoly partial(std::size_t i, std::uint32_t sigma) const {
    return sigma == 0 ? partial_base(i) : partial_jet({sigma, static_cast<std::uint32_t>(i)});
  }

  /// Multiplies by a single jet variable.
  DiffPoly times_jet(JetVar v) const;

  /// Applies `f` to every coefficient (results must share a variable count).
  template <class F>
  DiffPoly map_coefficients(F&& f) const {
    DiffPoly r(n_, bound_);
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  void add_term(const JetMonomial& m, const RatFn& c);

  /// Evaluates at a point of the jet space: base values and jet values
  /// jets[i][sigma - 1].
  Rational evaluate(std::span<const Rational> base,
                    const std::vector<std::vector<Rational>>& jets) const;

 private:
  std::size_t n_ = 0;
  int bound_ = kDefaultJetBound;
  TermMap terms_;
};

template <class Tag>
class DiffVector {
 public:
  DiffVector() = default;
  explicit DiffVector(std::vector<DiffPoly> components) : c_(std::move(components)) {}
  DiffVector(std::size_t ncomp, int jet_bound) : c_(ncomp, DiffPoly(ncomp, jet_bound)) {}

  std::size_t size() const { return c_.size(); }
  DiffPoly& operator[](std::size_t i) { return c_[i]; }
  const DiffPoly& operator[](std::size_t i) const { return c_[i]; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  const std::vector<DiffPoly>& components() const { return c_; }

  bool is_zero() const {
    for (const auto& p : c_) {
      if (!p.is_zero()) return false;
    }
    return true;
  }

  friend DiffVector operator+(DiffVector a, const DiffVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a.c_[i] += b.c_[i];
    return a;
  }
  friend DiffVector operator-(DiffVector a, const DiffVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  friend DiffVector operator*(const Rational& s, DiffVector a) {
    for (auto& p : a.c_) p *= s;
    return a;
  }
  friend bool operator==(const DiffVector&, const DiffVector&) = default;

 private:
  std::vector<DiffPoly> c_;
};

struct CovectorTag {};
struct EvolutionTag {};
/// Covector psi = psi_j du^j with differential-polynomial components.
using Covector = DiffVector<CovectorTag>;
/// Characteristic tau^i of an evolutionary vector field.
using EvolutionField = DiffVector<EvolutionTag>;

/// Thrown by formal_x_integral when the input is not a total derivative.
class NotDivergenceError : public MathError {
 public:
  NotDivergenceError(const std::string& what, Covector fingerprint)
      : MathError(what), fingerprint_(std::move(fingerprint)) {}
  const Covector& fingerprint() const { return fingerprint_; }

 private:
  Covector fingerprint_;
};

/// Thrown when a covector is not an Euler-Lagrange expression.
struct NotVariationalError : MathError {
  using MathError::MathError;
};

/// Thrown when an algorithm is restricted to polynomial input.
struct UnsupportedInputError : MathError {
  using MathError::MathError;
};

/// Total x-derivative. Throws BoundError if the jet bound would be exceeded.
DiffPoly total_x(const DiffPoly& f);
DiffPoly total_x(const DiffPoly& f, std::uint32_t times);

/// Variational derivative; component j = sum_s (-D_x)^s d f / d u^j_s.
Covector euler(const DiffPoly& f);

bool is_total_divergence(const DiffPoly& f);

/// Returns g with D_x g = f (no constant term). Strips the highest-order jet
/// variable repeatedly, lowest component index first; the order-zero
/// remainder is integrated as an exact rational 1-form.
DiffPoly formal_x_integral(const DiffPoly& f);

/// Volterra homotopy L = int_0^1 u^j psi_j[t u] dt for covectors polynomial in
/// all variables. Result satisfies euler(L) = psi or NotVariationalError is thrown.
DiffPoly volterra_homotopy(const Covector& psi);

/// Reconstructs a density from an x-grade homogeneous variational covector of
/// grade w != 1 via the scaling x -> x/t:  L = -D_x^{-1}(u^j_x psi_j) / (w - 1).
/// Works for rational coefficients, where the Volterra integrand is singular.
DiffPoly grade_homotopy(const Covector& psi);

/// Evolutionary derivative: sum_{i,s} (d f / d u^i_s) D_x^s(Q^i).
DiffPoly evolutionary_derivative(const DiffPoly& f, const EvolutionField& q);

/// Rational antiderivative of f with respect to one base variable.
/// Throws MathError when the antiderivative is not rational.
RatFn integrate_rational(const RatFn& f, std::size_t var);
/// Potential g with dg/du^i = gradient[i]; throws MathError if none is rational.
RatFn integrate_gradient(const std::vector<RatFn>& gradient);

}  // namespace lagrep
