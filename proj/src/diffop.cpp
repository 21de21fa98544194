#include "lagrep/diffop.hpp"

#include <algorithm>
#include <sstream>

namespace lagrep {

namespace {

Rational binomial(std::uint32_t n, std::uint32_t k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) {
    throw InputError("operator dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DiffOp

DiffOp DiffOp::term(const DiffPoly& c, std::uint32_t k) {
  DiffOp r(c.ncomp(), c.jet_bound());
  r.add(k, c);
  return r;
}

DiffOp DiffOp::dx(std::size_t ncomp, std::uint32_t k, int jet_bound) {
  return term(DiffPoly::constant(ncomp, Rational(1), jet_bound), k);
}

DiffPoly DiffOp::coefficient(std::uint32_t k) const {
  auto it = c_.find(k);
  return it == c_.end() ? DiffPoly(n_, bound_) : it->second;
}

void DiffOp::add(std::uint32_t k, const DiffPoly& c) {
  if (c.is_zero()) return;
  auto it = c_.find(k);
  if (it == c_.end()) {
    c_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) c_.erase(it);
}

DiffOp DiffOp::operator-() const {
  DiffOp r = *this;
  for (auto& [k, c] : r.c_) c = -c;
  return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  if (n_ == 0) {
    n_ = o.n_;
    bound_ = o.bound_;
  }
  for (const auto& [k, c] : o.c_) add(k, c);
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  if (n_ == 0) {
    n_ = o.n_;
    bound_ = o.bound_;
  }
  for (const auto& [k, c] : o.c_) add(k, -c);
  return *this;
}

DiffOp operator*(const DiffPoly& f, const DiffOp& a) {
  DiffOp r(a.n_ ? a.n_ : f.ncomp(), a.bound_);
  if (f.is_zero()) return r;
  for (const auto& [k, c] : a.c_) r.add(k, f * c);
  return r;
}

DiffOp operator*(const Rational& s, const DiffOp& a) {
  DiffOp r(a.n_, a.bound_);
  if (s == 0) return r;
  for (const auto& [k, c] : a.c_) r.add(k, c * s);
  return r;
}

DiffOp DiffOp::with_jet_bound(int jet_bound) const {
  DiffOp r(n_, jet_bound);
  for (const auto& [k, c] : c_) r.c_.emplace(k, c.with_jet_bound(jet_bound));
  return r;
}

DiffPoly DiffOp::apply(const DiffPoly& f) const {
  DiffPoly out(n_ ? n_ : f.ncomp(), bound_);
  if (c_.empty() || f.is_zero()) return out;
  DiffPoly d = f;
  std::uint32_t at = 0;
  for (const auto& [k, c] : c_) {
    while (at < k) {
      d = total_x(d);
      ++at;
    }
    out += c * d;
  }
  return out;
}

DiffOp compose(const DiffOp& p, const DiffOp& q) {
  DiffOp r(p.ncomp() ? p.ncomp() : q.ncomp(), p.jet_bound());
  if (p.is_zero() || q.is_zero()) return r;
  for (const auto& [b, d] : q.coefficients()) {
    // Successive total derivatives of d, shared by all powers a.
    std::vector<DiffPoly> dk{d};
    for (const auto& [a, c] : p.coefficients()) {
      while (dk.size() <= a) dk.push_back(total_x(dk.back()));
      for (std::uint32_t k = 0; k <= a; ++k) {
        if (dk[k].is_zero()) continue;
        r.add(a + b - k, (c * dk[k]) * binomial(a, k));
      }
    }
  }
  return r;
}

DiffOp adjoint(const DiffOp& p) {
  DiffOp r(p.ncomp(), p.jet_bound());
  for (const auto& [k, c] : p.coefficients()) {
    const Rational sign = (k % 2 == 0) ? Rational(1) : Rational(-1);
    DiffPoly dl = c;
    for (std::uint32_t l = 0; l <= k; ++l) {
      if (l > 0) dl = total_x(dl);
      if (dl.is_zero()) break;
      r.add(k - l, dl * (sign * binomial(k, l)));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(std::size_t dim, std::size_t ncomp, int jet_bound)
    : dim_(dim), n_(ncomp), bound_(jet_bound), e_(dim * dim, DiffOp(ncomp, jet_bound)) {}

OperatorMatrix OperatorMatrix::identity(std::size_t n, int jet_bound) {
  OperatorMatrix m(n, n, jet_bound);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = DiffOp::dx(n, 0, jet_bound);
  return m;
}

OperatorMatrix OperatorMatrix::constant(const QMatrix& k, std::uint32_t power, int jet_bound) {
  const std::size_t n = k.rows();
  OperatorMatrix m(n, n, jet_bound);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (k(i, j) != 0) m(i, j) = DiffOp::term(DiffPoly::constant(n, k(i, j), jet_bound), power);
  return m;
}

OperatorMatrix OperatorMatrix::multiplication(const FMatrix& f, int jet_bound) {
  const std::size_t n = f.rows();
  const std::size_t nv = n ? f(0, 0).nvars() : 0;
  OperatorMatrix m(n, nv, jet_bound);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!f(i, j).is_zero()) m(i, j) = DiffOp::term(DiffPoly(f(i, j), jet_bound), 0);
  return m;
}

bool OperatorMatrix::is_zero() const {
  for (const auto& e : e_)
    if (!e.is_zero()) return false;
  return true;
}

std::uint32_t OperatorMatrix::order() const {
  std::uint32_t o = 0;
  for (const auto& e : e_) o = std::max(o, e.order());
  return o;
}

std::vector<std::vector<DiffPoly>> OperatorMatrix::coefficient(std::uint32_t k) const {
  std::vector<std::vector<DiffPoly>> out(dim_, std::vector<DiffPoly>(dim_, DiffPoly(n_, bound_)));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i][j] = (*this)(i, j).coefficient(k);
  return out;
}

OperatorMatrix OperatorMatrix::with_jet_bound(int jet_bound) const {
  OperatorMatrix r(dim_, n_, jet_bound);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].with_jet_bound(jet_bound);
  return r;
}

OperatorMatrix OperatorMatrix::transpose() const {
  OperatorMatrix t(dim_, n_, bound_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) {
  require_same_dim(a, b);
  for (std::size_t k = 0; k < a.e_.size(); ++k) a.e_[k] += b.e_[k];
  return a;
}

OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) {
  require_same_dim(a, b);
  for (std::size_t k = 0; k < a.e_.size(); ++k) a.e_[k] -= b.e_[k];
  return a;
}

OperatorMatrix operator*(const Rational& s, OperatorMatrix a) {
  for (auto& e : a.e_) e = s * e;
  return a;
}

OperatorMatrix compose(const OperatorMatrix& p, const OperatorMatrix& q) {
  require_same_dim(p, q);
  const std::size_t n = p.dim();
  OperatorMatrix r(n, p.ncomp(), p.jet_bound());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (p(i, k).is_zero() || q(k, j).is_zero()) continue;
        r(i, j) += compose(p(i, k), q(k, j));
      }
  return r;
}

OperatorMatrix adjoint(const OperatorMatrix& p) {
  const std::size_t n = p.dim();
  OperatorMatrix r(n, p.ncomp(), p.jet_bound());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = adjoint(p(j, i));
  return r;
}

std::vector<DiffPoly> apply(const OperatorMatrix& p, const std::vector<DiffPoly>& psi) {
  const std::size_t n = p.dim();
  if (psi.size() != n) throw InputError("covector length does not match operator dimension");
  std::vector<DiffPoly> out(n, DiffPoly(p.ncomp(), p.jet_bound()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += p(i, j).apply(psi[j]);
  return out;
}

Covector apply_to_covector(const OperatorMatrix& p, const Covector& psi) {
  return Covector(apply(p, psi.components()));
}

EvolutionField apply_to_field(const OperatorMatrix& p, const Covector& psi) {
  return EvolutionField(apply(p, psi.components()));
}

bool is_skew_adjoint(const OperatorMatrix& p) { return adjoint(p) == -p; }

bool is_homogeneous(const OperatorMatrix& p, std::uint32_t m) {
  for (std::size_t i = 0; i < p.dim(); ++i)
    for (std::size_t j = 0; j < p.dim(); ++j)
      for (const auto& [k, c] : p(i, j).coefficients()) {
        if (k > m) return false;
        auto g = c.grade();
        if (!g || *g != m - k) return false;
      }
  return true;
}

// ---------------------------------------------------------------------------
// Coefficient tensors

HomogeneousTensors leading_and_lower(const OperatorMatrix& p, std::uint32_t m) {
  if (m != 1 && m != 3) throw InputError("coefficient tensors are implemented for orders 1 and 3");
  const std::size_t n = p.dim();
  const std::size_t nv = p.ncomp();
  HomogeneousTensors t;
  t.order = m;
  t.g = Tensor(2, n, nv);
  t.b = Tensor(3, n, nv);
  if (m == 3) {
    t.c1 = Tensor(3, n, nv);
    t.c2 = Tensor(4, n, nv);
    t.d1 = Tensor(3, n, nv);
    t.d2 = Tensor(4, n, nv);
    t.d3 = Tensor(5, n, nv);
  }
  std::vector<std::string> bad;
  auto reject = [&](std::size_t i, std::size_t j, std::uint32_t k, const JetMonomial& mono) {
    std::ostringstream os;
    os << "entry (" << i + 1 << "," << j + 1 << ") D_x^" << k << ": monomial of grade "
       << grade_of(mono);
    bad.push_back(os.str());
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& [k, c] : p(i, j).coefficients()) {
        for (const auto& [mono, coef] : c.terms()) {
          // Flatten the monomial into a list of jet variables with repetition.
          std::vector<JetVar> vars;
          for (const auto& [v, e] : mono)
            for (std::uint32_t r = 0; r < e; ++r) vars.push_back(v);
          const std::uint32_t w = grade_of(mono);
          if (k > m || w != m - k) {
            reject(i, j, k, mono);
            continue;
          }
          if (k == m) {
            t.g(i, j) += coef;
          } else if (k + 1 == m) {
            t.b(i, j, vars[0].component) += coef;
          } else if (k == 1) {  // m == 3
            if (vars.size() == 1) {
              t.c1(i, j, vars[0].component) += coef;
            } else {
              const auto a = vars[0].component, b = vars[1].component;
              if (a == b) {
                t.c2(i, j, a, a) += coef;
              } else {
                const RatFn half = coef * Rational(1, 2);
                t.c2(i, j, a, b) += half;
                t.c2(i, j, b, a) += half;
              }
            }
          } else {  // k == 0, m == 3
            if (vars.size() == 1) {
              t.d1(i, j, vars[0].component) += coef;
            } else if (vars.size() == 2) {
              // vars sorted by order: u^a_x then u^b_xx.
              t.d2(i, j, vars[1].component, vars[0].component) += coef;
            } else {
              // Symmetrize over the distinct permutations of (a, b, c).
              std::vector<std::size_t> idx{vars[0].component, vars[1].component,
                                           vars[2].component};
              std::sort(idx.begin(), idx.end());
              std::vector<std::vector<std::size_t>> perms;
              do perms.push_back(idx);
              while (std::next_permutation(idx.begin(), idx.end()));
              const RatFn share = coef * (Rational(1) / Rational(static_cast<long>(perms.size())));
              for (const auto& q : perms) t.d3(i, j, q[0], q[1], q[2]) += share;
            }
          }
        }
      }
    }
  }
  if (!bad.empty()) {
    std::string msg = "operator is not homogeneous of order " + std::to_string(m) + ":";
    for (const auto& s : bad) msg += "\n  " + s;
    throw ShapeError(msg);
  }
  return t;
}

OperatorMatrix from_tensors(const HomogeneousTensors& t, int jet_bound) {
  const std::size_t n = t.g.dim();
  const std::size_t nv = t.g.nvars();
  const std::uint32_t m = t.order;
  OperatorMatrix p(n, nv, jet_bound);
  auto jet = [&](std::size_t comp, std::uint32_t s) { return DiffPoly::jet(nv, comp, s, jet_bound); };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      DiffOp& e = p(i, j);
      e.add(m, DiffPoly(t.g(i, j), jet_bound));
      for (std::size_t k = 0; k < n; ++k) e.add(m - 1, t.b(i, j, k) * jet(k, 1));
      if (m != 3) continue;
      for (std::size_t k = 0; k < n; ++k) {
        e.add(1, t.c1(i, j, k) * jet(k, 2));
        e.add(0, t.d1(i, j, k) * jet(k, 3));
        for (std::size_t q = 0; q < n; ++q) {
          e.add(1, t.c2(i, j, k, q) * (jet(k, 1) * jet(q, 1)));
          e.add(0, t.d2(i, j, k, q) * (jet(k, 2) * jet(q, 1)));
          for (std::size_t r = 0; r < n; ++r)
            e.add(0, t.d3(i, j, k, q, r) * (jet(k, 1) * jet(q, 1) * jet(r, 1)));
        }
      }
    }
  }
  return p;
}

std::optional<OperatorMatrix> strip_outer_dx(const OperatorMatrix& p) {
  // p = r o D  iff every D^0 coefficient vanishes; then p^* = -D o r^*.
  auto right_divide = [](const OperatorMatrix& a) -> std::optional<OperatorMatrix> {
    OperatorMatrix r(a.dim(), a.ncomp(), a.jet_bound());
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j)
        for (const auto& [k, c] : a(i, j).coefficients()) {
          if (k == 0) return std::nullopt;
          r(i, j).add(k - 1, c);
        }
    return r;
  };
  auto r = right_divide(p);  // p = r o D
  if (!r) return std::nullopt;
  // r = D o q  iff r^* = -q^* o D.
  auto s = right_divide(adjoint(*r));  // r^* = s o D, so r = -D o s^*
  if (!s) return std::nullopt;
  return -adjoint(*s);
}

// ---------------------------------------------------------------------------
// Point transformations

PointTransform::PointTransform(std::vector<RatFn> inverse,
                               std::optional<std::vector<RatFn>> forward)
    : inverse_(std::move(inverse)), forward_(std::move(forward)) {
  const std::size_t n = inverse_.size();
  if (n == 0) throw InputError("empty point transformation");
  const std::size_t nv = inverse_[0].nvars();
  if (nv != n) throw InputError("point transformation must map n coordinates to n coordinates");
  da_du_ = FMatrix(n, n, RatFn(nv));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < n; ++i) da_du_(a, i) = inverse_[a].partial(i);
  auto inv = da_du_.inverse();
  if (!inv) throw InputError("point transformation has a singular Jacobian");
  du_da_ = *inv;
  if (forward_) {
    if (forward_->size() != n) throw InputError("forward map has the wrong length");
    for (std::size_t i = 0; i < n; ++i) {
      if (!((*forward_)[i].substitute(inverse_) == RatFn::variable(n, i))) {
        throw InputError("forward and inverse maps are not mutually inverse (component " +
                         std::to_string(i + 1) + ")");
      }
    }
  }
}

DiffPoly PointTransform::pull_back(const DiffPoly& f, int jet_bound) const {
  const std::size_t n = dim();
  // D_x^sigma(a^n(u)) computed lazily.
  std::vector<std::vector<DiffPoly>> derivs(n);
  auto jet_image = [&](JetVar v) -> const DiffPoly& {
    auto& d = derivs[v.component];
    if (d.empty()) d.push_back(DiffPoly(inverse_[v.component], jet_bound));
    while (d.size() <= v.order) d.push_back(total_x(d.back()));
    return d[v.order];
  };
  DiffPoly out(n, jet_bound);
  for (const auto& [mono, coef] : f.terms()) {
    DiffPoly term(coef.substitute(inverse_), jet_bound);
    for (const auto& [v, e] : mono) term = term * jet_image(v).pow(e);
    out += term;
  }
  return out;
}

PointTransform PointTransform::then(const PointTransform& next) const {
  std::vector<RatFn> inv;
  for (const auto& a : inverse_) inv.push_back(a.substitute(next.inverse_));
  std::optional<std::vector<RatFn>> fwd;
  if (forward_ && next.forward_) {
    std::vector<RatFn> w;
    for (const auto& x : *next.forward_) w.push_back(x.substitute(*forward_));
    fwd = std::move(w);
  }
  return PointTransform(std::move(inv), std::move(fwd));
}

OperatorMatrix change_coordinates(const OperatorMatrix& p, const PointTransform& t) {
  const std::size_t n = t.dim();
  if (p.dim() != n) throw InputError("operator and transformation dimensions differ");
  const int bound = p.jet_bound();
  const OperatorMatrix pulled =
      p.map_coefficients([&](const DiffPoly& c) { return t.pull_back(c, bound); });
  const OperatorMatrix j = OperatorMatrix::multiplication(t.du_da(), bound);
  return compose(compose(j, pulled), j.transpose());
}

}  // namespace lagrep
