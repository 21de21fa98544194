#pragma once

#include <cstddef>
#include <span>

#include "lagrep/mpoly.hpp"

namespace lagrep {

/// Rational function num/den in a fixed set of variables, kept in normal form:
/// gcd(num, den) = 1 and den is monic in graded-lex order. Zero is 0/1.
/// Because the normal form is unique, operator== is structural.
class RatFn {
 public:
  RatFn() : num_(0), den_(0, Rational(1)) {}
  explicit RatFn(std::size_t nvars) : num_(nvars), den_(nvars, Rational(1)) {}
  RatFn(std::size_t nvars, const Rational& c) : num_(nvars, c), den_(nvars, Rational(1)) {}
  explicit RatFn(MPoly num);
  /// Normalizes; throws MathError when den is zero.
  RatFn(MPoly num, MPoly den);

  static RatFn variable(std::size_t nvars, std::size_t index) {
    return RatFn(MPoly::variable(nvars, index));
  }

  std::size_t nvars() const { return num_.nvars(); }
  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const;
  bool depends_on(std::size_t var) const {
    return num_.depends_on(var) || den_.depends_on(var);
  }
  /// Degree of homogeneity deg(num) - deg(den) when both parts are homogeneous.
  bool homogeneous_degree(long& degree) const;

  RatFn operator-() const;
  friend RatFn operator+(const RatFn& a, const RatFn& b);
  friend RatFn operator-(const RatFn& a, const RatFn& b);
  friend RatFn operator*(const RatFn& a, const RatFn& b);
  /// Throws MathError on division by the zero function.
  friend RatFn operator/(const RatFn& a, const RatFn& b);
  friend RatFn operator*(const RatFn& a, const Rational& c);
  friend RatFn operator*(const Rational& c, const RatFn& a) { return a * c; }

  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
  RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
  RatFn& operator*=(const Rational& c) { return *this = *this * c; }
  RatFn& operator/=(const RatFn& o) { return *this = *this / o; }

  friend bool operator==(const RatFn& a, const RatFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Integer power; negative exponents invert (throws on zero base).
  RatFn pow(long k) const;
  RatFn partial(std::size_t var) const;
  RatFn inverse() const;

  /// Throws MathError when the denominator vanishes at the point.
  Rational evaluate(std::span<const Rational> point) const;
  /// Composition: substitutes rational functions (all in a common target ring)
  /// for the variables.
  RatFn substitute(std::span<const RatFn> values) const;
  RatFn remap(std::size_t nvars, std::span<const std::size_t> map) const;

  std::size_t hash() const { return num_.hash() * 31 + den_.hash(); }

 private:
  struct Unchecked {};
  RatFn(MPoly num, MPoly den, Unchecked) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  MPoly num_;
  MPoly den_;
};

}  // namespace lagrep
