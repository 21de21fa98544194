#include "lagrep/ratfn.hpp"

#include "lagrep/error.hpp"

namespace lagrep {

RatFn::RatFn(MPoly num) : num_(std::move(num)), den_(num_.nvars(), Rational(1)) {}

RatFn::RatFn(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw MathError("rational function with zero denominator");
  normalize();
}

void RatFn::normalize() {
  if (num_.is_zero()) {
    den_ = MPoly(num_.nvars(), Rational(1));
    return;
  }
  if (!den_.is_constant()) {
    MPoly g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = num_.divide_exact(g);
      den_ = den_.divide_exact(g);
    }
  }
  const Rational lc = den_.leading_coefficient();
  if (lc != 1) {
    const Rational s = Rational(1) / lc;
    num_ *= s;
    den_ *= s;
  }
}

Rational RatFn::constant_value() const {
  return num_.constant_value() / den_.constant_value();
}

bool RatFn::homogeneous_degree(long& degree) const {
  if (!num_.is_homogeneous() || !den_.is_homogeneous()) return false;
  degree = static_cast<long>(num_.total_degree()) - static_cast<long>(den_.total_degree());
  return true;
}

RatFn RatFn::operator-() const { return RatFn(-num_, den_, Unchecked{}); }

RatFn operator+(const RatFn& a, const RatFn& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    return RatFn(a.num_ + b.num_, a.den_);
  }
  if (a.den_.is_constant() && b.den_.is_constant()) {
    return RatFn(a.num_ * (Rational(1) / a.den_.constant_value()) +
                     b.num_ * (Rational(1) / b.den_.constant_value()),
                 MPoly(a.nvars(), Rational(1)), RatFn::Unchecked{});
  }
  // Henrici: only the common factor of the denominators can cancel.
  const MPoly g = gcd(a.den_, b.den_);
  if (g.is_constant()) {
    MPoly num = a.num_ * b.den_ + b.num_ * a.den_;
    MPoly den = a.den_ * b.den_;
    RatFn r(std::move(num), std::move(den), RatFn::Unchecked{});
    const Rational lc = r.den_.leading_coefficient();
    if (lc != 1) {
      r.num_ *= Rational(1) / lc;
      r.den_ *= Rational(1) / lc;
    }
    if (r.num_.is_zero()) r.den_ = MPoly(r.num_.nvars(), Rational(1));
    return r;
  }
  const MPoly ad = a.den_.divide_exact(g);
  const MPoly bd = b.den_.divide_exact(g);
  MPoly num = a.num_ * bd + b.num_ * ad;
  if (num.is_zero()) return RatFn(a.nvars());
  // Both inputs are reduced, so only a factor of g can cancel.
  const MPoly h = gcd(num, g);
  MPoly den = ad * bd * (h.is_constant() ? g : g.divide_exact(h));
  if (!h.is_constant()) num = num.divide_exact(h);
  const Rational lc = den.leading_coefficient();
  if (lc != 1) {
    num *= Rational(1) / lc;
    den *= Rational(1) / lc;
  }
  return RatFn(std::move(num), std::move(den), RatFn::Unchecked{});
}

RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }

RatFn operator*(const RatFn& a, const RatFn& b) {
  if (a.is_zero() || b.is_zero()) return RatFn(std::max(a.nvars(), b.nvars()));
  if (a.is_polynomial() && b.is_polynomial()) {
    return RatFn(a.num_ * b.num_ *
                     (Rational(1) / (a.den_.constant_value() * b.den_.constant_value())),
                 MPoly(a.nvars(), Rational(1)), RatFn::Unchecked{});
  }
  // Cross-cancel before multiplying.
  MPoly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
  if (!bd.is_constant()) {
    MPoly g = gcd(an, bd);
    if (!g.is_constant()) {
      an = an.divide_exact(g);
      bd = bd.divide_exact(g);
    }
  }
  if (!ad.is_constant()) {
    MPoly g = gcd(bn, ad);
    if (!g.is_constant()) {
      bn = bn.divide_exact(g);
      ad = ad.divide_exact(g);
    }
  }
  MPoly num = an * bn;
  MPoly den = ad * bd;
  const Rational lc = den.leading_coefficient();
  if (lc != 1) {
    num *= Rational(1) / lc;
    den *= Rational(1) / lc;
  }
  return RatFn(std::move(num), std::move(den), RatFn::Unchecked{});
}

RatFn operator*(const RatFn& a, const Rational& c) {
  if (c == 0) return RatFn(a.nvars());
  return RatFn(a.num_ * c, a.den_, RatFn::Unchecked{});
}

RatFn RatFn::inverse() const {
  if (is_zero()) throw MathError("division by the zero rational function");
  return RatFn(den_, num_);
}

RatFn operator/(const RatFn& a, const RatFn& b) { return a * b.inverse(); }

RatFn RatFn::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  // Powers of a reduced fraction stay reduced; den^k stays monic.
  return RatFn(num_.pow(static_cast<std::uint32_t>(k)),
               den_.pow(static_cast<std::uint32_t>(k)), Unchecked{});
}

RatFn RatFn::partial(std::size_t var) const {
  if (!depends_on(var)) return RatFn(nvars());
  if (den_.is_constant()) {
    return RatFn(num_.partial(var) * (Rational(1) / den_.constant_value()),
                 MPoly(nvars(), Rational(1)), Unchecked{});
  }
  // (n/d)' = (n' d - n d') / d^2; dividing through by g = gcd(d, d') first
  // keeps the intermediate sizes down.
  const MPoly dd = den_.partial(var);
  const MPoly g = gcd(den_, dd);
  const MPoly dg = den_.divide_exact(g);
  MPoly num = num_.partial(var) * dg - num_ * dd.divide_exact(g);
  MPoly den = den_ * dg;
  return RatFn(std::move(num), std::move(den));
}

Rational RatFn::evaluate(std::span<const Rational> point) const {
  const Rational d = den_.evaluate(point);
  if (d == 0) throw MathError("rational function evaluated at a pole");
  return num_.evaluate(point) / d;
}

RatFn RatFn::substitute(std::span<const RatFn> values) const {
  // Work with a common denominator per variable to avoid repeated gcds:
  // p(n_1/d_1, ...) = sum_c c prod n_k^e_k d_k^(D_k - e_k) / prod d_k^D_k.
  const std::size_t target = values.empty() ? 0 : values[0].nvars();
  auto eval_poly = [&](const MPoly& p) {
    std::vector<std::uint32_t> maxdeg(p.nvars(), 0);
    for (std::size_t k = 0; k < p.nvars(); ++k) maxdeg[k] = p.degree_in(k);
    MPoly common(target, Rational(1));
    for (std::size_t k = 0; k < p.nvars(); ++k) {
      if (maxdeg[k]) common *= values[k].den().pow(maxdeg[k]);
    }
    std::vector<std::vector<MPoly>> npow(p.nvars()), dpow(p.nvars());
    auto power = [&](std::vector<std::vector<MPoly>>& cache, const MPoly& base,
                     std::size_t k, std::uint32_t e) -> const MPoly& {
      auto& c = cache[k];
      if (c.empty()) c.push_back(MPoly(target, Rational(1)));
      while (c.size() <= e) c.push_back(c.back() * base);
      return c[e];
    };
    MPoly sum(target);
    for (const auto& [e, c] : p.terms()) {
      MPoly t(target, c);
      for (std::size_t k = 0; k < p.nvars(); ++k) {
        if (maxdeg[k] == 0) continue;
        t = t * power(npow, values[k].num(), k, e[k]);
        if (!values[k].den().is_constant()) {
          t = t * power(dpow, values[k].den(), k, maxdeg[k] - e[k]);
        } else {
          Rational s = 1;
          const Rational dv = values[k].den().constant_value();
          for (std::uint32_t q = e[k]; q < maxdeg[k]; ++q) s *= dv;
          t *= s;
        }
      }
      sum += t;
    }
    return RatFn(std::move(sum), std::move(common));
  };
  if (num_.is_zero()) return RatFn(target);
  RatFn n = eval_poly(num_);
  if (den_.is_one()) return n;
  return n / eval_poly(den_);
}

RatFn RatFn::remap(std::size_t nvars, std::span<const std::size_t> map) const {
  return RatFn(num_.remap(nvars, map), den_.remap(nvars, map));
}

}  // namespace lagrep
