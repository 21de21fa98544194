#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace lagrep {

/// Exact rationals; GMP keeps them in lowest terms with a positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

using Exponents = std::vector<std::uint32_t>;

/// Graded lexicographic comparison: total degree first, then lexicographic
/// with variable 0 the most significant. Returns <0, 0, >0.
int grlex_compare(const Exponents& a, const Exponents& b);

/// Sparse multivariate polynomial with rational coefficients over a fixed
/// number of variables. Terms are kept sorted in descending graded-lex order
/// with no zero coefficients, so two equal polynomials are structurally equal.
class MPoly {
 public:
  using Term = std::pair<Exponents, Rational>;

  MPoly() = default;
  explicit MPoly(std::size_t nvars) : nvars_(nvars) {}
  MPoly(std::size_t nvars, const Rational& c);

  static MPoly variable(std::size_t nvars, std::size_t index);
  static MPoly monomial(Exponents e, const Rational& c);
  /// Builds from arbitrary (possibly unsorted, duplicated) terms.
  static MPoly from_terms(std::size_t nvars, std::vector<Term> terms);

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant value; requires is_constant().
  Rational constant_value() const;
  bool is_one() const;

  const Exponents& leading_exponents() const { return terms_.front().first; }
  const Rational& leading_coefficient() const { return terms_.front().second; }

  std::uint32_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  bool depends_on(std::size_t var) const { return degree_in(var) > 0; }
  /// True when every term has the same total degree (zero counts as homogeneous).
  bool is_homogeneous() const;

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly& operator*=(const Rational& c);

  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(MPoly a, const Rational& c) { return a *= c; }
  friend MPoly operator*(const Rational& c, MPoly a) { return a *= c; }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  MPoly pow(std::uint32_t k) const;
  MPoly partial(std::size_t var) const;

  /// Exact quotient, or nullopt when `d` does not divide this polynomial.
  std::optional<MPoly> try_divide(const MPoly& d) const;
  /// Exact quotient; throws MathError when the division is not exact.
  MPoly divide_exact(const MPoly& d) const;

  /// Coefficients with respect to `var`: result[k] is the coefficient of var^k
  /// (a polynomial not involving `var`).
  std::vector<MPoly> coefficients_in(std::size_t var) const;

  /// Scales to integer coefficients with unit content and positive leading
  /// coefficient. Returns the scaling factor s with result = s * this.
  Rational make_primitive();
  /// Scales so the leading coefficient is 1. Zero stays zero.
  MPoly monic() const;

  Rational evaluate(std::span<const Rational> point) const;
  /// Substitutes polynomial values for all variables; `values` must have
  /// nvars() entries which share a common variable count.
  MPoly substitute(std::span<const MPoly> values) const;
  /// Re-embeds into a ring with `nvars` variables; variable i goes to map[i].
  MPoly remap(std::size_t nvars, std::span<const std::size_t> map) const;

  std::size_t hash() const;

 private:
  void normalize();

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Greatest common divisor over Q, normalized monic (gcd(0, 0) = 0).
MPoly gcd(const MPoly& a, const MPoly& b);

/// Square-free decomposition of a nonzero polynomial: pairs (factor, multiplicity)
/// with pairwise-coprime primitive factors, plus the constant unit so that
/// p = unit * prod factor^multiplicity.
struct SquareFreeDecomposition {
  Rational unit;
  std::vector<std::pair<MPoly, std::uint32_t>> factors;
};
SquareFreeDecomposition square_free(const MPoly& p);

}  // namespace lagrep
