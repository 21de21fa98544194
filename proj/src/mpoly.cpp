#include "lagrep/mpoly.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "lagrep/error.hpp"

namespace lagrep {

namespace {

std::uint32_t checked_add(std::uint32_t a, std::uint32_t b) {
  if (a > std::numeric_limits<std::uint32_t>::max() - b) {
    throw BoundError("exponent overflow in polynomial arithmetic");
  }
  return a + b;
}

std::uint32_t degree_sum(const Exponents& e) {
  std::uint64_t s = 0;
  for (auto x : e) s += x;
  return static_cast<std::uint32_t>(s);
}

bool term_greater(const MPoly::Term& a, const MPoly::Term& b) {
  return grlex_compare(a.first, b.first) > 0;
}

}  // namespace

int grlex_compare(const Exponents& a, const Exponents& b) {
  const auto da = degree_sum(a);
  const auto db = degree_sum(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

MPoly::MPoly(std::size_t nvars, const Rational& c) : nvars_(nvars) {
  if (c != 0) terms_.emplace_back(Exponents(nvars, 0), c);
}

MPoly MPoly::variable(std::size_t nvars, std::size_t index) {
  Exponents e(nvars, 0);
  e.at(index) = 1;
  return monomial(std::move(e), Rational(1));
}

MPoly MPoly::monomial(Exponents e, const Rational& c) {
  MPoly p(e.size());
  if (c != 0) p.terms_.emplace_back(std::move(e), c);
  return p;
}

MPoly MPoly::from_terms(std::size_t nvars, std::vector<Term> terms) {
  MPoly p(nvars);
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

void MPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(), term_greater);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      if (!out.empty() && out.back().second == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().second == 0) out.pop_back();
  terms_ = std::move(out);
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && degree_sum(terms_[0].first) == 0);
}

Rational MPoly::constant_value() const {
  return terms_.empty() ? Rational(0) : terms_[0].second;
}

bool MPoly::is_one() const { return is_constant() && constant_value() == 1; }

std::uint32_t MPoly::total_degree() const {
  return terms_.empty() ? 0 : degree_sum(terms_.front().first);
}

std::uint32_t MPoly::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

bool MPoly::is_homogeneous() const {
  for (const auto& t : terms_) {
    if (degree_sum(t.first) != total_degree()) return false;
  }
  return true;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

namespace {

// Merges two sorted term lists; sign = +1 or -1 for the second operand.
std::vector<MPoly::Term> merge_terms(const std::vector<MPoly::Term>& a,
                                     const std::vector<MPoly::Term>& b, int sign) {
  std::vector<MPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int cmp;
    if (i == a.size()) cmp = -1;
    else if (j == b.size()) cmp = 1;
    else cmp = grlex_compare(a[i].first, b[j].first);
    if (cmp > 0) {
      out.push_back(a[i++]);
    } else if (cmp < 0) {
      out.emplace_back(b[j].first, sign > 0 ? b[j].second : Rational(-b[j].second));
      ++j;
    } else {
      Rational c = sign > 0 ? Rational(a[i].second + b[j].second) : Rational(a[i].second - b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MPoly& MPoly::operator+=(const MPoly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) {
    nvars_ = o.nvars_;
    terms_ = o.terms_;
    return *this;
  }
  terms_ = merge_terms(terms_, o.terms_, +1);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) nvars_ = o.nvars_;
  terms_ = merge_terms(terms_, o.terms_, -1);
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r(std::max(a.nvars_, b.nvars_));
  if (a.terms_.empty() || b.terms_.empty()) return r;
  if (b.terms_.size() == 1 && degree_sum(b.terms_[0].first) == 0) {
    return a * b.terms_[0].second;
  }
  if (a.terms_.size() == 1 && degree_sum(a.terms_[0].first) == 0) {
    return b * a.terms_[0].second;
  }
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = checked_add(ea[k], eb[k]);
      r.terms_.emplace_back(std::move(e), ca * cb);
    }
  }
  r.normalize();
  return r;
}

MPoly& MPoly::operator*=(const MPoly& o) { return *this = *this * o; }

MPoly& MPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

MPoly MPoly::pow(std::uint32_t k) const {
  MPoly result(nvars_, Rational(1));
  MPoly base = *this;
  while (k > 0) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

MPoly MPoly::partial(std::size_t var) const {
  MPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents f = e;
    f[var] -= 1;
    r.terms_.emplace_back(std::move(f), c * e[var]);
  }
  // Differentiation preserves the relative grlex order of surviving terms
  // only within a fixed degree, so re-sort.
  r.normalize();
  return r;
}

std::optional<MPoly> MPoly::try_divide(const MPoly& d) const {
  if (d.is_zero()) throw MathError("polynomial division by zero");
  MPoly q(nvars_);
  if (is_zero()) return q;
  if (d.is_constant()) return *this * (Rational(1) / d.constant_value());
  MPoly r = *this;
  const auto& ld = d.terms_.front();
  std::vector<Term> qterms;
  while (!r.is_zero()) {
    const auto& lr = r.terms_.front();
    Exponents e(nvars_);
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (lr.first[k] < ld.first[k]) return std::nullopt;
      e[k] = lr.first[k] - ld.first[k];
    }
    Rational c = lr.second / ld.second;
    MPoly t = monomial(e, c);
    r -= t * d;
    qterms.emplace_back(std::move(e), std::move(c));
  }
  q.terms_ = std::move(qterms);
  q.normalize();
  return q;
}

MPoly MPoly::divide_exact(const MPoly& d) const {
  auto q = try_divide(d);
  if (!q) throw MathError("inexact polynomial division");
  return *std::move(q);
}

std::vector<MPoly> MPoly::coefficients_in(std::size_t var) const {
  std::vector<MPoly> out(degree_in(var) + 1, MPoly(nvars_));
  std::vector<std::vector<Term>> buckets(out.size());
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    const auto k = f[var];
    f[var] = 0;
    buckets[k].emplace_back(std::move(f), c);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = from_terms(nvars_, std::move(buckets[k]));
  }
  return out;
}

Rational MPoly::make_primitive() {
  if (terms_.empty()) return Rational(1);
  Integer den_lcm = 1;
  for (const auto& t : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.second.get_den_mpz_t());
  }
  Integer num_gcd = 0;
  for (const auto& t : terms_) {
    Integer v = t.second.get_num() * (den_lcm / t.second.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_mpz_t());
  }
  Rational s(den_lcm, num_gcd);
  s.canonicalize();
  if (terms_.front().second < 0) s = -s;
  for (auto& t : terms_) t.second *= s;
  return s;
}

MPoly MPoly::monic() const {
  if (terms_.empty()) return *this;
  return *this * (Rational(1) / terms_.front().second);
}

Rational MPoly::evaluate(std::span<const Rational> point) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational v = c;
    for (std::size_t k = 0; k < nvars_; ++k) {
      for (std::uint32_t p = 0; p < e[k]; ++p) v *= point[k];
    }
    sum += v;
  }
  return sum;
}

MPoly MPoly::substitute(std::span<const MPoly> values) const {
  const std::size_t target = values.empty() ? 0 : values[0].nvars();
  MPoly sum(target);
  // Cache powers per variable.
  std::vector<std::vector<MPoly>> powers(nvars_);
  for (const auto& [e, c] : terms_) {
    MPoly t(target, c);
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (e[k] == 0) continue;
      auto& pk = powers[k];
      if (pk.empty()) pk.push_back(MPoly(target, Rational(1)));
      while (pk.size() <= e[k]) pk.push_back(pk.back() * values[k]);
      t = t * pk[e[k]];
    }
    sum += t;
  }
  return sum;
}

MPoly MPoly::remap(std::size_t nvars, std::span<const std::size_t> map) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) {
    Exponents f(nvars, 0);
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (e[k]) f.at(map[k]) = checked_add(f.at(map[k]), e[k]);
    }
    out.emplace_back(std::move(f), c);
  }
  return from_terms(nvars, std::move(out));
}

std::size_t MPoly::hash() const {
  std::size_t h = nvars_;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& [e, c] : terms_) {
    for (auto x : e) mix(x);
    mix(mpz_get_ui(c.get_num_mpz_t()));
    mix(mpz_get_ui(c.get_den_mpz_t()));
  }
  return h;
}

// ---------------------------------------------------------------------------
// gcd: recursive primitive polynomial remainder sequences over Z.

namespace {

constexpr std::size_t kNoVar = static_cast<std::size_t>(-1);

std::size_t first_variable(const MPoly& p) {
  std::size_t best = kNoVar;
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t k = 0; k < e.size() && k < best; ++k) {
      if (e[k]) {
        best = k;
        break;
      }
    }
  }
  return best;
}

MPoly primitive_copy(MPoly p) {
  p.make_primitive();
  return p;
}

MPoly poly_gcd(const MPoly& a, const MPoly& b);

// gcd of the coefficients of p with respect to var, primitive over Z.
MPoly content_in(const MPoly& p, std::size_t var) {
  auto coeffs = p.coefficients_in(var);
  // Start from the sparsest coefficient to keep the cascade cheap.
  std::sort(coeffs.begin(), coeffs.end(),
            [](const MPoly& x, const MPoly& y) { return x.size() < y.size(); });
  MPoly g(p.nvars());
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? primitive_copy(c) : poly_gcd(g, c);
    if (g.is_constant()) return MPoly(p.nvars(), Rational(1));
  }
  return g;
}

MPoly pseudo_remainder(MPoly a, const MPoly& b, std::size_t var) {
  const auto db = b.degree_in(var);
  const auto bc = b.coefficients_in(var);
  const MPoly& lb = bc.back();
  Exponents shift(a.nvars(), 0);
  while (!a.is_zero() && a.degree_in(var) >= db) {
    const auto da = a.degree_in(var);
    MPoly la = a.coefficients_in(var).back();
    shift.assign(a.nvars(), 0);
    shift[var] = da - db;
    a = lb * a - la * MPoly::monomial(shift, Rational(1)) * b;
    a.make_primitive();
  }
  return a;
}

// Both arguments nonzero; result primitive over Z (not yet monic).
MPoly poly_gcd(const MPoly& a, const MPoly& b) {
  if (a.is_constant() || b.is_constant()) return MPoly(a.nvars(), Rational(1));
  if (a == b) return primitive_copy(a);
  if (a.size() <= b.size()) {
    if (b.try_divide(a)) return primitive_copy(a);
  } else {
    if (a.try_divide(b)) return primitive_copy(b);
  }
  const std::size_t va = first_variable(a);
  const std::size_t vb = first_variable(b);
  const std::size_t var = std::min(va, vb);
  if (a.degree_in(var) == 0) return poly_gcd(a, content_in(b, var));
  if (b.degree_in(var) == 0) return poly_gcd(content_in(a, var), b);

  const MPoly ca = content_in(a, var);
  const MPoly cb = content_in(b, var);
  const MPoly gc = poly_gcd(ca, cb);
  MPoly r1 = primitive_copy(a.divide_exact(ca));
  MPoly r2 = primitive_copy(b.divide_exact(cb));
  if (r1.degree_in(var) < r2.degree_in(var)) std::swap(r1, r2);
  MPoly g;
  while (true) {
    MPoly r = pseudo_remainder(r1, r2, var);
    if (r.is_zero()) {
      g = primitive_copy(r2.divide_exact(content_in(r2, var)));
      break;
    }
    if (r.degree_in(var) == 0) {
      g = MPoly(a.nvars(), Rational(1));
      break;
    }
    r1 = std::move(r2);
    r2 = primitive_copy(r.divide_exact(content_in(r, var)));
  }
  return primitive_copy(gc * g);
}

// Heuristic gcd over Z: evaluate one variable at a large integer xi, take
// the gcd of the images recursively, rebuild a candidate from the xi-adic
// digits of its coefficients and accept it only if it divides both inputs.
// Inputs have integer coefficients.

Integer max_norm(const MPoly& p) {
  Integer m = 0;
  for (const auto& [e, c] : p.terms()) {
    Integer v = abs(c.get_num());
    if (v > m) m = v;
  }
  return m;
}

Integer integer_content(const MPoly& p) {
  Integer g = 0;
  for (const auto& [e, c] : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    if (g == 1) break;
  }
  return g;
}

MPoly evaluate_at(const MPoly& p, std::size_t var, const Integer& xi) {
  std::vector<MPoly::Term> terms;
  terms.reserve(p.size());
  Integer power;
  for (const auto& [e, c] : p.terms()) {
    Exponents f = e;
    mpz_pow_ui(power.get_mpz_t(), xi.get_mpz_t(), f[var]);
    f[var] = 0;
    terms.emplace_back(std::move(f), c * Rational(power));
  }
  return MPoly::from_terms(p.nvars(), std::move(terms));
}

MPoly xi_adic_lift(const MPoly& h, std::size_t var, const Integer& xi) {
  std::vector<MPoly::Term> terms;
  const Integer half = xi / 2;
  for (const auto& [e, c] : h.terms()) {
    Integer v = c.get_num();
    std::uint32_t k = 0;
    while (v != 0) {
      Integer r;
      mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), xi.get_mpz_t());
      if (r > half) r -= xi;
      if (r != 0) {
        Exponents f = e;
        f[var] = k;
        terms.emplace_back(std::move(f), Rational(r));
      }
      v = (v - r) / xi;
      ++k;
    }
  }
  return MPoly::from_terms(h.nvars(), std::move(terms));
}

std::optional<MPoly> heuristic_gcd(const MPoly& f0, const MPoly& g0, int depth) {
  const std::size_t nv = f0.nvars();
  if (f0.is_zero()) return g0;
  if (g0.is_zero()) return f0;
  const Integer cf = integer_content(f0);
  const Integer cg = integer_content(g0);
  Integer c;
  mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  if (f0.is_constant() || g0.is_constant()) return MPoly(nv, Rational(c));
  const MPoly f = f0 * Rational(Integer(1), cf);
  const MPoly g = g0 * Rational(Integer(1), cg);

  std::size_t var = 0;
  bool found = false;
  for (std::size_t k = nv; k-- > 0;) {
    if (f.depends_on(k) || g.depends_on(k)) {
      var = k;
      found = true;
      break;
    }
  }
  if (!found) return MPoly(nv, Rational(c));
  if (depth > 64) return std::nullopt;

  const Integer fn = max_norm(f);
  const Integer gn = max_norm(g);
  Integer xi = 2 * (fn < gn ? fn : gn) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const MPoly fx = evaluate_at(f, var, xi);
    const MPoly gx = evaluate_at(g, var, xi);
    if (!fx.is_zero() && !gx.is_zero()) {
      if (auto hx = heuristic_gcd(fx, gx, depth + 1)) {
        MPoly h = xi_adic_lift(*hx, var, xi);
        if (!h.is_zero()) {
          h.make_primitive();
          if (f.try_divide(h) && g.try_divide(h)) return h * Rational(c);
        }
      }
    }
    xi = xi * 73794 / 27011 + 1;
  }
  return std::nullopt;
}

}  // namespace

MPoly gcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  MPoly pa = primitive_copy(a);
  MPoly pb = primitive_copy(b);
  if (pa.is_constant() || pb.is_constant()) return MPoly(a.nvars(), Rational(1));
  if (auto h = heuristic_gcd(pa, pb, 0)) return h->monic();
  return poly_gcd(pa, pb).monic();
}

SquareFreeDecomposition square_free(const MPoly& p) {
  if (p.is_zero()) throw MathError("square-free decomposition of zero");
  SquareFreeDecomposition out;
  MPoly q = p;
  out.unit = Rational(1) / q.make_primitive();
  std::function<void(const MPoly&)> rec = [&](const MPoly& f) {
    if (f.is_constant()) return;
    const std::size_t var = first_variable(f);
    const MPoly cont = content_in(f, var);
    MPoly g = primitive_copy(f.divide_exact(cont));
    // Yun's algorithm in `var`.
    MPoly dg = g.partial(var);
    MPoly b = gcd(g, dg);
    MPoly c = g.divide_exact(b);
    MPoly d = dg.divide_exact(b) - c.partial(var);
    std::uint32_t i = 1;
    while (!c.is_constant()) {
      MPoly a = gcd(c, d);
      if (!a.is_constant()) out.factors.emplace_back(primitive_copy(a), i);
      c = c.divide_exact(a);
      d = d.divide_exact(a) - c.partial(var);
      ++i;
    }
    rec(cont);
  };
  rec(q);
  // Fix the unit so that the product matches p exactly.
  MPoly prod(p.nvars(), out.unit);
  for (const auto& [f, m] : out.factors) prod *= f.pow(m);
  out.unit *= p.leading_coefficient() / prod.leading_coefficient();
  return out;
}

}  // namespace lagrep
