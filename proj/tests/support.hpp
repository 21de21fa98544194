#pragma once

#include <random>
#include <string>
#include <vector>

#include "lagrep/diffop.hpp"
#include "lagrep/expr.hpp"
#include "lagrep/jet.hpp"
#include "lagrep/mpoly.hpp"
#include "lagrep/ratfn.hpp"

namespace lagrep::testing {

inline const Names& u3() {
  static const Names n{"u1", "u2", "u3"};
  return n;
}

inline DiffPoly dp(const std::string& s, const Names& names = u3()) {
  return parse_diffpoly(s, names);
}
inline RatFn rf(const std::string& s, const Names& names = u3()) {
  return parse_ratfn(s, names);
}
inline MPoly mp(const std::string& s, const Names& names = u3()) {
  RatFn f = parse_ratfn(s, names);
  return f.num() * (Rational(1) / f.den().constant_value());
}

/// Small seeded generators for property tests. Sizes stay tiny so that
/// hundreds of cases run in well under a second.
class Random {
 public:
  explicit Random(unsigned seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  Rational rational() {
    int num = integer(-5, 5);
    int den = integer(1, 3);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  MPoly poly(std::size_t nv, int max_terms, int max_deg) {
    MPoly p(nv);
    const int terms = integer(0, max_terms);
    for (int t = 0; t < terms; ++t) {
      Exponents e(nv, 0);
      int budget = integer(0, max_deg);
      while (budget-- > 0) e[static_cast<std::size_t>(integer(0, static_cast<int>(nv) - 1))]++;
      p += MPoly::monomial(e, rational());
    }
    return p;
  }

  MPoly nonzero_poly(std::size_t nv, int max_terms, int max_deg) {
    while (true) {
      MPoly p = poly(nv, max_terms, max_deg);
      if (!p.is_zero()) return p;
    }
  }

  RatFn ratfn(std::size_t nv, bool allow_den = true) {
    MPoly num = poly(nv, 3, 2);
    if (!allow_den || coin()) return RatFn(num);
    // Denominators built from shifted differences so they never vanish identically.
    MPoly den(nv, Rational(1));
    const int factors = integer(1, 2);
    for (int k = 0; k < factors; ++k) {
      const auto i = static_cast<std::size_t>(integer(0, static_cast<int>(nv) - 1));
      const auto j = static_cast<std::size_t>(integer(0, static_cast<int>(nv) - 1));
      MPoly f = MPoly::variable(nv, i) - MPoly::variable(nv, j) * Rational(integer(2, 3));
      f += MPoly(nv, Rational(integer(0, 2)));
      den *= f;
    }
    return RatFn(num, den);
  }

  /// Random differential polynomial: up to `terms` monomials of jet order
  /// <= max_order and jet degree <= max_deg.
  DiffPoly diffpoly(std::size_t n, int terms, std::uint32_t max_order, int max_deg,
                    bool rational_coeffs) {
    DiffPoly f(n);
    const int count = integer(1, terms);
    for (int t = 0; t < count; ++t) {
      DiffPoly m = DiffPoly(rational_coeffs ? ratfn(n) : RatFn(poly(n, 2, 2)));
      const int deg = integer(0, max_deg);
      for (int d = 0; d < deg; ++d) {
        const auto i = static_cast<std::size_t>(integer(0, static_cast<int>(n) - 1));
        const auto s = static_cast<std::uint32_t>(integer(1, static_cast<int>(max_order)));
        m = m * DiffPoly::jet(n, i, s);
      }
      f += m;
    }
    return f;
  }

 private:
  std::mt19937 rng_;
};

inline OperatorMatrix random_operator(Random& r, std::size_t n, std::uint32_t max_dx) {
  OperatorMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (r.integer(0, 2) == 0) continue;
      const auto k = static_cast<std::uint32_t>(r.integer(0, static_cast<int>(max_dx)));
      p(i, j).add(k, r.diffpoly(n, 2, 1, 1, false));
    }
  }
  return p;
}

// Triangular polynomial map with unit Jacobian determinant, so both
// directions stay polynomial.
inline PointTransform random_triangular(Random& r) {
  const std::size_t n = 2;
  MPoly u1 = MPoly::variable(n, 0), u2 = MPoly::variable(n, 1);
  const Rational c = r.rational();
  const Rational s = r.coin() ? Rational(1) : Rational(-1);
  MPoly shift = r.coin() ? u2 * u2 * c : u2 * c;
  return PointTransform({RatFn(u1 * s + shift), RatFn(u2 + MPoly(n, r.rational()))});
}

}  // namespace lagrep::testing
