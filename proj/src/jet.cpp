#include "lagrep/jet.hpp"

#include <algorithm>
#include <string>

namespace lagrep {

std::uint32_t grade_of(const JetMonomial& m) {
  std::uint32_t g = 0;
  for (const auto& [v, e] : m) g += v.order * e;
  return g;
}

namespace {

JetMonomial multiply(const JetMonomial& a, const JetMonomial& b) {
  JetMonomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

JetMonomial times_var(const JetMonomial& a, JetVar v) {
  return multiply(a, JetMonomial{{v, 1u}});
}

}  // namespace

DiffPoly::DiffPoly(const RatFn& c, int jet_bound) : n_(c.nvars()), bound_(jet_bound) {
  if (!c.is_zero()) terms_.emplace(JetMonomial{}, c);
}

DiffPoly DiffPoly::constant(std::size_t ncomp, const Rational& c, int jet_bound) {
  return DiffPoly(RatFn(ncomp, c), jet_bound);
}

DiffPoly DiffPoly::base(std::size_t ncomp, std::size_t i, int jet_bound) {
  return DiffPoly(RatFn::variable(ncomp, i), jet_bound);
}

DiffPoly DiffPoly::jet(std::size_t ncomp, std::size_t i, std::uint32_t sigma, int jet_bound) {
  if (sigma == 0) return base(ncomp, i, jet_bound);
  if (static_cast<int>(sigma) > jet_bound) {
    throw BoundError("jet order " + std::to_string(sigma) + " exceeds bound " +
                     std::to_string(jet_bound));
  }
  return term(ncomp, JetMonomial{{JetVar{sigma, static_cast<std::uint32_t>(i)}, 1u}},
              RatFn(ncomp, Rational(1)), jet_bound);
}

DiffPoly DiffPoly::term(std::size_t ncomp, JetMonomial m, RatFn c, int jet_bound) {
  DiffPoly p(ncomp, jet_bound);
  p.add_term(m, c);
  return p;
}

void DiffPoly::add_term(const JetMonomial& m, const RatFn& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool DiffPoly::is_jet_free() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

RatFn DiffPoly::jet_free_part() const { return coefficient({}); }

RatFn DiffPoly::coefficient(const JetMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? RatFn(n_) : it->second;
}

std::uint32_t DiffPoly::order() const {
  std::uint32_t o = 0;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m) o = std::max(o, v.order);
  }
  return o;
}

std::optional<std::uint32_t> DiffPoly::grade() const {
  std::optional<std::uint32_t> g;
  for (const auto& [m, c] : terms_) {
    const auto gm = grade_of(m);
    if (g && *g != gm) return std::nullopt;
    g = gm;
  }
  return g.value_or(0);
}

bool DiffPoly::has_polynomial_coefficients() const {
  for (const auto& [m, c] : terms_) {
    if (!c.is_polynomial()) return false;
  }
  return true;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  if (terms_.empty()) {
    n_ = std::max(n_, o.n_);
    bound_ = std::max(bound_, o.bound_);
  }
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  if (terms_.empty()) {
    n_ = std::max(n_, o.n_);
    bound_ = std::max(bound_, o.bound_);
  }
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

DiffPoly& DiffPoly::operator*=(const RatFn& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, k] : terms_) k *= c;
  return *this;
}

DiffPoly& DiffPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, k] : terms_) k *= c;
  return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly r(std::max(a.n_, b.n_), std::max(a.bound_, b.bound_));
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      r.add_term(multiply(ma, mb), ca * cb);
    }
  }
  return r;
}

DiffPoly DiffPoly::with_jet_bound(int jet_bound) const {
  if (static_cast<int>(order()) > jet_bound) {
    throw BoundError("jet order " + std::to_string(order()) + " exceeds bound " +
                     std::to_string(jet_bound));
  }
  DiffPoly r = *this;
  r.bound_ = jet_bound;
  return r;
}

DiffPoly DiffPoly::pow(std::uint32_t k) const {
  DiffPoly r = constant(n_, Rational(1), bound_);
  for (std::uint32_t i = 0; i < k; ++i) r = r * *this;
  return r;
}

DiffPoly DiffPoly::partial_base(std::size_t i) const {
  DiffPoly r(n_, bound_);
  for (const auto& [m, c] : terms_) r.add_term(m, c.partial(i));
  return r;
}

DiffPoly DiffPoly::partial_jet(JetVar v) const {
  DiffPoly r(n_, bound_);
  for (const auto& [m, c] : terms_) {
    auto it = std::find_if(m.begin(), m.end(), [&](const auto& f) { return f.first == v; });
    if (it == m.end()) continue;
    JetMonomial rest = m;
    auto& slot = rest[static_cast<std::size_t>(it - m.begin())];
    const auto e = slot.second;
    if (--slot.second == 0) rest.erase(rest.begin() + (it - m.begin()));
    r.add_term(rest, c * Rational(e));
  }
  return r;
}

DiffPoly DiffPoly::times_jet(JetVar v) const {
  DiffPoly r(n_, bound_);
  for (const auto& [m, c] : terms_) r.add_term(times_var(m, v), c);
  return r;
}

Rational DiffPoly::evaluate(std::span<const Rational> base,
                            const std::vector<std::vector<Rational>>& jets) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational v = c.evaluate(base);
    for (const auto& [jv, e] : m) {
      for (std::uint32_t k = 0; k < e; ++k) v *= jets.at(jv.component).at(jv.order - 1);
    }
    sum += v;
  }
  return sum;
}

// ---------------------------------------------------------------------------

DiffPoly total_x(const DiffPoly& f) {
  const std::size_t n = f.ncomp();
  DiffPoly r(n, f.jet_bound());
  for (const auto& [m, c] : f.terms()) {
    // Coefficient part: sum_i dc/du^i u^i_x.
    for (std::size_t i = 0; i < n; ++i) {
      if (!c.depends_on(i)) continue;
      if (f.jet_bound() < 1) throw BoundError("jet order 1 exceeds bound");
      r.add_term(times_var(m, JetVar{1, static_cast<std::uint32_t>(i)}), c.partial(i));
    }
    // Jet part: u^i_s -> u^i_{s+1}.
    for (std::size_t k = 0; k < m.size(); ++k) {
      const auto [v, e] = m[k];
      if (static_cast<int>(v.order) + 1 > f.jet_bound()) {
        throw BoundError("total derivative exceeds jet bound " + std::to_string(f.jet_bound()));
      }
      JetMonomial rest = m;
      if (--rest[k].second == 0) rest.erase(rest.begin() + static_cast<long>(k));
      r.add_term(times_var(rest, JetVar{v.order + 1, v.component}), c * Rational(e));
    }
  }
  return r;
}

DiffPoly total_x(const DiffPoly& f, std::uint32_t times) {
  DiffPoly r = f;
  for (std::uint32_t k = 0; k < times; ++k) r = total_x(r);
  return r;
}

Covector euler(const DiffPoly& f) {
  const std::size_t n = f.ncomp();
  const auto ord = f.order();
  Covector out(n, f.jet_bound());
  for (std::size_t j = 0; j < n; ++j) {
    // Horner-like: sum_s (-D)^s a_s = a_0 - D(a_1 - D(a_2 - ...)).
    DiffPoly acc(n, f.jet_bound());
    for (std::uint32_t s = ord + 1; s-- > 0;) {
      DiffPoly a = f.partial(j, s);
      acc = a - (acc.is_zero() ? acc : total_x(acc));
    }
    out[j] = std::move(acc);
  }
  return out;
}

bool is_total_divergence(const DiffPoly& f) { return euler(f).is_zero(); }

DiffPoly evolutionary_derivative(const DiffPoly& f, const EvolutionField& q) {
  const std::size_t n = f.ncomp();
  DiffPoly r(n, f.jet_bound());
  const auto ord = f.order();
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i].is_zero()) continue;
    DiffPoly dq = q[i];
    for (std::uint32_t s = 0; s <= ord; ++s) {
      if (s > 0) dq = total_x(dq);
      DiffPoly df = f.partial(i, s);
      if (!df.is_zero()) r += df * dq;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rational integration in one variable (no logarithmic part allowed).

namespace {

// Coefficient of var^k in a rational function whose denominator is free of var.
RatFn coefficient_in(const RatFn& f, std::size_t var, std::uint32_t k) {
  auto cs = f.num().coefficients_in(var);
  if (k >= cs.size()) return RatFn(f.nvars());
  return RatFn(cs[k], f.den());
}

std::uint32_t degree_in(const RatFn& f, std::size_t var) { return f.num().degree_in(var); }

}  // namespace

RatFn integrate_rational(const RatFn& f, std::size_t var) {
  const std::size_t nv = f.nvars();
  if (f.is_zero()) return RatFn(nv);
  const MPoly x = MPoly::variable(nv, var);
  if (!f.den().depends_on(var)) {
    RatFn r(nv);
    auto cs = f.num().coefficients_in(var);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (cs[k].is_zero()) continue;
      r += RatFn(cs[k] * x.pow(static_cast<std::uint32_t>(k + 1)) * Rational(1, k + 1), f.den());
    }
    return r;
  }
  // Split the denominator into its var-free content and the rest.
  const auto coeffs = f.den().coefficients_in(var);
  MPoly content(nv);
  for (const auto& c : coeffs) {
    if (!c.is_zero()) content = content.is_zero() ? c.monic() : gcd(content, c);
  }
  const MPoly q = f.den().divide_exact(content);           // depends on var
  const RatFn ptilde(f.num(), content);                     // free of var in den
  const MPoly d = gcd(q, q.partial(var));                   // repeated part
  const MPoly e = q.divide_exact(d);                        // square-free kernel
  const MPoly w = (e * d.partial(var)).divide_exact(d);     // E D' / D
  // Solve ptilde = E A' - A W for A, a polynomial in var with coefficients
  // free of var, top-down.
  const std::uint32_t deg_e = e.degree_in(var);
  const std::uint32_t deg_d = d.degree_in(var);
  const std::uint32_t deg_p = degree_in(ptilde, var);
  const std::uint32_t top = std::max<std::uint32_t>(deg_p + 1 >= deg_e ? deg_p + 1 - deg_e : 0, deg_d);
  const MPoly lc_e = e.coefficients_in(var).back();
  RatFn residual = ptilde;
  RatFn a(nv);
  for (std::uint32_t k = top + 1; k-- > 0;) {
    if (k == deg_d) continue;
    // a_k x^k contributes (k - deg D) lc(E) x^(k + deg E - 1) at the top.
    const std::uint32_t pos = k + deg_e - 1;
    const RatFn target = coefficient_in(residual, var, pos);
    if (target.is_zero()) continue;
    const RatFn ak = target / (RatFn(lc_e) * Rational(static_cast<long>(k) - static_cast<long>(deg_d)));
    const RatFn term = ak * RatFn(x.pow(k));
    // residual -= E term' - term W
    residual -= RatFn(e) * term.partial(var) - term * RatFn(w);
    a += term;
  }
  RatFn result = a / RatFn(d);
  if (result.partial(var) != f) {
    throw MathError("antiderivative is not a rational function");
  }
  return result;
}

RatFn integrate_gradient(const std::vector<RatFn>& gradient) {
  const std::size_t n = gradient.size();
  if (n == 0) return RatFn();
  const std::size_t nv = gradient[0].nvars();
  RatFn g(nv);
  for (std::size_t i = 0; i < n; ++i) {
    RatFn r = gradient[i] - g.partial(i);
    if (!r.is_zero()) g += integrate_rational(r, i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (g.partial(i) != gradient[i]) throw MathError("1-form is not exact");
  }
  return g;
}

// ---------------------------------------------------------------------------

DiffPoly formal_x_integral(const DiffPoly& f) {
  const Covector fp = euler(f);
  if (!fp.is_zero()) {
    throw NotDivergenceError("density is not a total x-derivative", fp);
  }
  const std::size_t n = f.ncomp();
  DiffPoly g(n, f.jet_bound());
  DiffPoly r = f;
  while (!r.is_zero()) {
    const std::uint32_t top = r.order();
    if (top == 0) throw MathError("internal: nonzero jet-free divergence remainder");
    if (top == 1) {
      // r = sum_i c_i(u) u^i_x.
      std::vector<RatFn> grad(n, RatFn(r.terms().begin()->second.nvars()));
      for (const auto& [m, c] : r.terms()) {
        if (m.size() != 1 || m[0].second != 1) {
          throw MathError("internal: nonlinear first-order divergence remainder");
        }
        grad[m[0].first.component] = c;
      }
      DiffPoly h(integrate_gradient(grad), f.jet_bound());
      g += h;
      r -= total_x(h);
      continue;
    }
    std::uint32_t comp = static_cast<std::uint32_t>(n);
    for (const auto& [m, c] : r.terms()) {
      for (const auto& [v, e] : m) {
        if (v.order == top) comp = std::min(comp, v.component);
      }
    }
    const DiffPoly c = r.partial_jet({top, comp});
    // Integrate c with respect to u^comp_{top-1}.
    const JetVar below{top - 1, comp};
    DiffPoly h(n, f.jet_bound());
    for (const auto& [m, k] : c.terms()) {
      std::uint32_t e = 0;
      for (const auto& [v, ex] : m) {
        if (v == below) e = ex;
      }
      h += DiffPoly::term(n, m, k * Rational(1, e + 1), f.jet_bound()).times_jet(below);
    }
    g += h;
    r -= total_x(h);
  }
  return g;
}

DiffPoly volterra_homotopy(const Covector& psi) {
  const std::size_t n = psi.size();
  if (n == 0) return DiffPoly();
  const int bound = psi[0].jet_bound();
  for (const auto& p : psi) {
    if (!p.has_polynomial_coefficients()) {
      throw UnsupportedInputError(
          "homotopy integrand is singular for rational coefficients; polynomial input required");
    }
  }
  DiffPoly L(n, bound);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [m, c] : psi[j].terms()) {
      std::uint32_t jet_deg = 0;
      for (const auto& [v, e] : m) jet_deg += e;
      const Rational inv_den = Rational(1) / c.den().constant_value();
      for (const auto& [ex, coef] : c.num().terms()) {
        std::uint32_t deg = jet_deg;
        for (auto x : ex) deg += x;
        // psi_j[t u] contributes t^deg; integral of t^deg over [0, 1].
        RatFn piece(MPoly::monomial(ex, coef * inv_den * Rational(1, deg + 1)) *
                    MPoly::variable(n, j));
        L.add_term(m, piece);
      }
    }
  }
  if (euler(L) != psi) throw NotVariationalError("covector fails the Helmholtz conditions");
  return L;
}

DiffPoly grade_homotopy(const Covector& psi) {
  const std::size_t n = psi.size();
  if (n == 0) return DiffPoly();
  const int bound = psi[0].jet_bound();
  std::optional<std::uint32_t> w;
  bool all_zero = true;
  for (const auto& p : psi) {
    if (p.is_zero()) continue;
    all_zero = false;
    auto g = p.grade();
    if (!g || (w && *w != *g)) {
      throw UnsupportedInputError("covector is not homogeneous in the x-grading");
    }
    w = g;
  }
  if (all_zero) return DiffPoly(n, bound);
  if (*w == 1) throw UnsupportedInputError("grade-1 covectors are singular for x-scaling");
  DiffPoly flux(n, bound);
  for (std::size_t j = 0; j < n; ++j) {
    flux += psi[j].times_jet({1, static_cast<std::uint32_t>(j)});
  }
  DiffPoly P;
  try {
    P = formal_x_integral(flux);
  } catch (const NotDivergenceError&) {
    throw NotVariationalError("covector is not variational (u_x . psi is not a divergence)");
  }
  DiffPoly L = P * (Rational(-1) / Rational(static_cast<long>(*w) - 1));
  if (euler(L) != psi) throw NotVariationalError("covector fails the Helmholtz conditions");
  return L;
}

}  // namespace lagrep
