#include "lagrep/pipeline.hpp"

#include <algorithm>
#include <map>

#include "lagrep/expr.hpp"

namespace lagrep {

namespace {

std::string idx(std::initializer_list<std::size_t> ii) {
  std::string s = "(";
  for (auto i : ii) s += (s.size() > 1 ? "," : "") + std::to_string(i + 1);
  return s + ")";
}

// (m X m)_{pn} with X given entrywise.
template <class F>
RatFn sandwich(const QMatrix& m, std::size_t p, std::size_t n, std::size_t nvars, F&& x) {
  RatFn s(nvars);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    if (m(p, k) == 0) continue;
    for (std::size_t q = 0; q < m.rows(); ++q)
      if (m(q, n) != 0) s += x(k, q) * (m(p, k) * m(q, n));
  }
  return s;
}

OperatorMatrix conjugate(const QMatrix& k, const OperatorMatrix& p) {
  OperatorMatrix kop = OperatorMatrix::constant(k, 0, p.jet_bound());
  return compose(kop, compose(p, kop));
}

DiffPoly ux(std::size_t n, std::size_t m, int bound, std::uint32_t sigma = 1) {
  return DiffPoly::jet(n, m, sigma, bound);
}

// Operator from per-power coefficient matrices P[k](p, n).
OperatorMatrix from_powers(const std::vector<std::vector<std::vector<DiffPoly>>>& powers,
                           std::size_t n, int bound) {
  OperatorMatrix op(n, n, bound);
  for (std::uint32_t k = 0; k < powers.size(); ++k)
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) op(p, q).add(k, powers[k][p][q]);
  return op;
}

std::vector<std::vector<std::vector<DiffPoly>>> zero_powers(std::size_t n, int bound) {
  return std::vector<std::vector<std::vector<DiffPoly>>>(
      4, std::vector<std::vector<DiffPoly>>(n, std::vector<DiffPoly>(n, DiffPoly(n, bound))));
}

int max_order(const std::vector<DiffPoly>& v) {
  std::uint32_t r = 0;
  for (const auto& f : v) r = std::max(r, f.order());
  return static_cast<int>(r);
}

std::vector<DiffPoly> rebound(const std::vector<DiffPoly>& v, int bound) {
  std::vector<DiffPoly> r;
  for (const auto& f : v) r.push_back(f.with_jet_bound(bound));
  return r;
}

}  // namespace

std::string skew_adjoint_residual(const OperatorMatrix& a, const Names& names) {
  OperatorMatrix s = adjoint(a) + a;
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j)
      if (!s(i, j).is_zero())
        return "entry " + idx({i, j}) + ": A + A^* = " + to_string(s(i, j), names);
  return {};
}

std::string operator_difference(const OperatorMatrix& a, const OperatorMatrix& b,
                                const Names& names) {
  if (a.dim() != b.dim()) return "dimension mismatch";
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      DiffOp d = a(i, j) - b(i, j);
      if (!d.is_zero()) return "entry " + idx({i, j}) + ": difference " + to_string(d, names);
    }
  return {};
}

SymplecticData symplectic_operator(const BiHamiltonianSystem& sys) {
  const std::size_t n = sys.dim();
  SymplecticData out;
  out.B = -conjugate(sys.M, sys.A2);
  HomogeneousTensors t = leading_and_lower(sys.A2, 3);
  out.G = Tensor(2, n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      out.G(p, q) = sandwich(sys.M, p, q, n, [&](auto k, auto r) { return t.g(k, r); });
  return out;
}

StructureTensors extract_GLF(const BiHamiltonianSystem& sys) {
  const std::size_t n = sys.dim();
  HomogeneousTensors t = leading_and_lower(sys.A2, 3);
  StructureTensors s{Tensor(2, n, n), Tensor(3, n, n), Tensor(3, n, n)};
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      s.G(p, q) = sandwich(sys.M, p, q, n, [&](auto k, auto r) { return t.g(k, r); });
      for (std::size_t m = 0; m < n; ++m) {
        // The u^m_xxx coefficient is K L_{.,.,m} K; the u^m_xx part of D_x is K F_{.m.} K.
        s.L(q, p, m) = sandwich(sys.M, p, q, n, [&](auto k, auto r) { return t.d1(k, r, m); });
        s.F(p, m, q) = sandwich(sys.M, p, q, n, [&](auto k, auto r) { return t.c1(k, r, m); });
      }
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        if (!(s.L(a, b, c) == s.L(a, c, b)))
          throw AnsatzError("L is not symmetric in its last two indices: L" + idx({a, b, c}) +
                            " = " + to_string(s.L(a, b, c), sys.coordinates) + " but L" +
                            idx({a, c, b}) + " = " + to_string(s.L(a, c, b), sys.coordinates));
  return s;
}

Obstruction obstruction_T(const Tensor& G, const Tensor& L, const Tensor& F) {
  const std::size_t n = G.dim(), nv = G.nvars();
  Obstruction ob;
  ob.T = Tensor(3, n, nv);
  const Rational half(1, 2);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t q = 0; q < n; ++q)
        ob.T(p, m, q) = F(p, m, q) - half * (G(p, m).partial(q) + G(q, p).partial(m) -
                                             G(q, m).partial(p) + Rational(4) * L(q, p, m));
  ob.skew = ob.T.is_totally_skew();
  ob.dT = Tensor(4, n, nv);
  const Tensor& T = ob.T;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          ob.dT(p, m, q, r) = T(m, q, r).partial(p) - T(p, q, r).partial(m) +
                              T(p, m, r).partial(q) - T(p, m, q).partial(r);
  ob.closed = ob.skew && ob.dT.is_zero();
  return ob;
}

Tensor exterior_derivative2(const Tensor& R) {
  const std::size_t n = R.dim();
  Tensor d(3, n, R.nvars());
  auto entry = [&](std::size_t p, std::size_t m, std::size_t q) {
    return R(p, m).partial(q) + R(m, q).partial(p) + R(q, p).partial(m);
  };
  if (!R.has_symmetry(0, 1, -1)) {
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) d(p, m, q) = entry(p, m, q);
    return d;
  }
  // For skew R the result is totally skew: compute p < m < q and permute.
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t m = p + 1; m < n; ++m)
      for (std::size_t q = m + 1; q < n; ++q) {
        const RatFn v = entry(p, m, q);
        d(p, m, q) = d(m, q, p) = d(q, p, m) = v;
        d(m, p, q) = d(p, q, m) = d(q, m, p) = -v;
      }
  return d;
}

Tensor exterior_derivative1(const std::vector<RatFn>& theta) {
  const std::size_t n = theta.size();
  Tensor d(2, n, n ? theta[0].nvars() : 0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t m = 0; m < n; ++m) d(p, m) = theta[m].partial(p) - theta[p].partial(m);
  return d;
}

bool verify_R(const Tensor& R, const Tensor& T) {
  return R.rank() == 2 && R.dim() == T.dim() && R.has_symmetry(0, 1, -1) &&
         exterior_derivative2(R) == T;
}

namespace {

// The equal-partials ansatz R_{12,3} = R_{23,1} = R_{31,2} = T_{123}/3 (three dimensions only).
std::optional<Tensor> symmetric_ansatz(const Tensor& T, std::string& note) {
  if (T.dim() != 3) {
    note = "symmetric-ansatz: only defined in three dimensions";
    return std::nullopt;
  }
  const RatFn third = T(0, 1, 2) * Rational(1, 3);
  Tensor R(2, 3, T.nvars());
  try {
    R(0, 1) = integrate_rational(third, 2);
    R(1, 2) = integrate_rational(third, 0);
    R(2, 0) = integrate_rational(third, 1);
  } catch (const MathError& e) {
    note = std::string("symmetric-ansatz: no rational antiderivative (") + e.what() + ")";
    return std::nullopt;
  }
  R(1, 0) = -R(0, 1);
  R(2, 1) = -R(1, 2);
  R(0, 2) = -R(2, 0);
  if (!verify_R(R, T)) {
    note = "symmetric-ansatz: antiderivatives found but dR != T";
    return std::nullopt;
  }
  note = "symmetric-ansatz: solved";
  return R;
}

// All exponent vectors of total degree `deg` in `nv` variables.
void monomials_of_degree(std::size_t nv, std::uint32_t deg, Exponents& cur, std::size_t var,
                         std::vector<Exponents>& out) {
  if (var + 1 == nv) {
    cur[var] = deg;
    out.push_back(cur);
    return;
  }
  for (std::uint32_t e = deg + 1; e-- > 0;) {
    cur[var] = e;
    monomials_of_degree(nv, deg - e, cur, var + 1, out);
  }
}

std::vector<Exponents> monomials_up_to(std::size_t nv, std::uint32_t lo, std::uint32_t hi) {
  std::vector<Exponents> out;
  for (std::uint32_t d = lo; d <= hi; ++d) {
    Exponents cur(nv, 0);
    monomials_of_degree(nv, d, cur, 0, out);
  }
  return out;
}

// Linear factors u_i and u_i - u_j that divide some denominator of T.
std::vector<MPoly> singular_factors(const Tensor& T) {
  const std::size_t nv = T.nvars();
  std::vector<MPoly> cand;
  for (std::size_t i = 0; i < nv; ++i) cand.push_back(MPoly::variable(nv, i));
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = i + 1; j < nv; ++j)
      cand.push_back(MPoly::variable(nv, i) - MPoly::variable(nv, j));
  std::vector<MPoly> found;
  for (const auto& f : cand) {
    bool divides = false;
    T.for_each_index([&](const std::vector<std::size_t>& ix) {
      if (!divides && T.at(ix).den().try_divide(f)) divides = true;
    });
    if (divides) found.push_back(f);
  }
  return found;
}

// R_{ab} = N_{ab} / D for a < b, with D a product of singular factors and the
// numerators' coefficients unknown. Clearing denominators in dR = T turns the
// problem into a linear system over Q.
std::optional<Tensor> undetermined_coefficients(const Tensor& T, unsigned max_power,
                                                std::vector<std::string>& log) {
  const std::size_t n = T.dim(), nv = T.nvars();
  std::vector<MPoly> factors = singular_factors(T);

  bool homogeneous = true;
  long tdeg = 0;
  bool first = true;
  std::uint32_t spread = 0;
  T.for_each_index([&](const std::vector<std::size_t>& ix) {
    const RatFn& t = T.at(ix);
    if (t.is_zero()) return;
    long d;
    if (!t.homogeneous_degree(d) || (!first && d != tdeg)) homogeneous = false;
    if (first) tdeg = d;
    first = false;
    spread = std::max(spread, t.num().total_degree());
  });

  std::vector<std::array<std::size_t, 2>> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) pairs.push_back({a, b});

  const unsigned top = factors.empty() ? 1 : max_power;
  for (unsigned power = 1; power <= top; ++power) {
    MPoly D(nv, Rational(1));
    for (const auto& f : factors) D = D * f.pow(power);
    const long ddeg = D.total_degree();
    std::vector<Exponents> basis;
    if (homogeneous) {
      const long e = ddeg + tdeg + 1;
      if (e < 0) {
        log.push_back("undetermined-coefficients: power " + std::to_string(power) +
                      " gives a negative numerator degree");
        continue;
      }
      basis = monomials_up_to(nv, static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(e));
    } else {
      basis = monomials_up_to(nv, 0, static_cast<std::uint32_t>(ddeg + spread + 1));
    }
    const std::size_t nb = basis.size(), unknowns = nb * pairs.size();

    // Equation rows keyed by (triple, monomial).
    std::map<std::pair<std::size_t, Exponents>, std::size_t> row_of;
    std::vector<std::map<std::size_t, Rational>> rows;
    std::vector<Rational> rhs;
    auto row = [&](std::size_t eq, const Exponents& e) {
      auto [it, fresh] = row_of.try_emplace({eq, e}, rows.size());
      if (fresh) {
        rows.emplace_back();
        rhs.emplace_back(0);
      }
      return it->second;
    };

    std::size_t eq = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t m = p + 1; m < n; ++m)
        for (std::size_t q = m + 1; q < n; ++q, ++eq) {
          const RatFn& t = T(p, m, q);
          const MPoly tden = t.den();
          const MPoly target = t.num() * D * D;
          for (const auto& tm : target.terms()) rhs[row(eq, tm.first)] += tm.second;
          // R_{pm,q} + R_{mq,p} + R_{qp,m}
          const std::array<std::array<std::size_t, 3>, 3> cyc{
              {{p, m, q}, {m, q, p}, {q, p, m}}};
          for (const auto& c : cyc) {
            std::size_t a = c[0], b = c[1];
            Rational sign(1);
            if (a > b) {
              std::swap(a, b);
              sign = -1;
            }
            const std::size_t pair_idx =
                std::find(pairs.begin(), pairs.end(), std::array<std::size_t, 2>{a, b}) -
                pairs.begin();
            const std::size_t z = c[2];
            const MPoly dz = D.partial(z);
            for (std::size_t k = 0; k < nb; ++k) {
              MPoly mu = MPoly::monomial(basis[k], Rational(1));
              MPoly contrib = (mu.partial(z) * D - mu * dz) * tden * sign;
              for (const auto& tm : contrib.terms())
                rows[row(eq, tm.first)][pair_idx * nb + k] += tm.second;
            }
          }
        }

    QMatrix A(rows.size(), unknowns, Rational(0));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (const auto& [c, v] : rows[r]) A(r, c) = v;
    auto sol = solve_linear(A, rhs);
    if (!sol) {
      log.push_back("undetermined-coefficients: no solution with factor power " +
                    std::to_string(power) + " (" + std::to_string(unknowns) + " unknowns)");
      continue;
    }
    Tensor R(2, n, nv);
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      std::vector<MPoly::Term> terms;
      for (std::size_t k = 0; k < nb; ++k)
        if (sol->particular[pi * nb + k] != 0)
          terms.push_back({basis[k], sol->particular[pi * nb + k]});
      RatFn r(MPoly::from_terms(nv, std::move(terms)), D);
      R(pairs[pi][0], pairs[pi][1]) = r;
      R(pairs[pi][1], pairs[pi][0]) = -r;
    }
    if (!verify_R(R, T)) {
      log.push_back("undetermined-coefficients: linear solution failed verification");
      continue;
    }
    log.push_back("undetermined-coefficients: solved with factor power " +
                  std::to_string(power) + ", " + std::to_string(sol->kernel.size()) +
                  "-dimensional gauge freedom in the basis");
    return R;
  }
  return std::nullopt;
}

}  // namespace

RSolution solve_R(const Tensor& T, const RSolverOptions& opts) {
  if (T.rank() != 3) throw InputError("solve_R: T must have rank 3");
  if (!T.is_totally_skew()) throw MathError("solve_R: T is not totally skew-symmetric");
  RSolution out;
  if (T.is_zero()) {
    out.R = Tensor(2, T.dim(), T.nvars());
    out.method = "zero";
    out.log.push_back("zero: T = 0, R = 0");
    return out;
  }
  std::string note;
  if (auto r = symmetric_ansatz(T, note)) {
    out.log.push_back(note);
    out.R = *r;
    out.method = "symmetric-ansatz";
    return out;
  }
  out.log.push_back(note);
  if (auto r = undetermined_coefficients(T, std::max(1u, opts.denominator_degree), out.log)) {
    out.R = *r;
    out.method = "undetermined-coefficients";
    return out;
  }
  if (opts.candidate) {
    if (verify_R(*opts.candidate, T)) {
      out.log.push_back("candidate: verified");
      out.R = *opts.candidate;
      out.method = "candidate";
      return out;
    }
    out.log.push_back("candidate: rejected (not skew or dR != T)");
  }
  std::string msg = "no rational R with dR = T found";
  for (const auto& l : out.log) msg += "; " + l;
  throw NoSolutionError(msg);
}

Covector assemble_Ln(const Tensor& G, const Tensor& R, const Tensor& L, int bound) {
  const std::size_t n = G.dim();
  Covector out(n, bound);
  const Rational half(1, 2);
  for (std::size_t a = 0; a < n; ++a) {
    DiffPoly inner(n, bound), quad(n, bound);
    for (std::size_t m = 0; m < n; ++m) {
      RatFn c = G(a, m) * half + R(a, m);
      if (!c.is_zero()) inner += DiffPoly(c, bound) * ux(n, m, bound);
      for (std::size_t s = 0; s < n; ++s)
        if (!L(a, s, m).is_zero())
          quad += DiffPoly(L(a, s, m), bound) * ux(n, s, bound) * ux(n, m, bound);
    }
    out[a] = total_x(inner) - quad * half;
  }
  return out;
}

Tensor structure_F(const Tensor& G, const Tensor& R, const Tensor& L) {
  const std::size_t n = G.dim();
  Tensor dR = exterior_derivative2(R);
  Tensor F(3, n, G.nvars());
  const Rational half(1, 2);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t q = 0; q < n; ++q)
        F(p, m, q) = half * (G(p, m).partial(q) + G(q, p).partial(m) - G(q, m).partial(p)) +
                     Rational(2) * L(q, p, m) + dR(p, m, q);
  return F;
}

OperatorMatrix reconstruct_A2(const QMatrix& K, const Tensor& G, const Tensor& R, const Tensor& L,
                              int bound) {
  const std::size_t n = G.dim();
  const Tensor F = structure_F(G, R, L);
  const Rational half(1, 2);
  auto P = zero_powers(n, bound);
  auto c = [&](const RatFn& f) { return DiffPoly(f, bound); };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      P[3][p][q] = c(G(p, q));
      DiffPoly inner0(n, bound);
      for (std::size_t m = 0; m < n; ++m) {
        RatFn b2 = F(p, m, q) + G(p, q).partial(m) - L(q, p, m) - L(p, q, m);
        if (!b2.is_zero()) P[2][p][q] += c(b2) * ux(n, m, bound);
        if (!F(p, m, q).is_zero()) P[1][p][q] += c(F(p, m, q)) * ux(n, m, bound, 2);
        if (!L(q, p, m).is_zero()) inner0 += c(L(q, p, m)) * ux(n, m, bound, 2);
        for (std::size_t s = 0; s < n; ++s) {
          RatFn b1 = F(p, m, q).partial(s) - half * L(p, s, m).partial(q) -
                     half * L(q, s, m).partial(p);
          if (!b1.is_zero()) P[1][p][q] += c(b1) * ux(n, s, bound) * ux(n, m, bound);
          RatFn b0 = L(q, p, m).partial(s) - half * L(q, s, m).partial(p);
          if (!b0.is_zero()) inner0 += c(b0) * ux(n, s, bound) * ux(n, m, bound);
        }
      }
      P[0][p][q] = total_x(inner0);
    }
  return conjugate(K, from_powers(P, n, bound));
}

OperatorMatrix expand_A2(const QMatrix& K, const Covector& Ln) {
  const std::size_t n = Ln.size();
  if (n == 0) throw InputError("expand_A2: empty covector");
  if (max_order(Ln.components()) > 2)
    throw AnsatzError("expand_A2: L_n must have jet order at most 2");
  const int bound = Ln[0].jet_bound();
  auto P = zero_powers(n, bound);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const DiffPoly d2 = Ln[q].partial(p, 2), d1 = Ln[q].partial(p, 1), d0 = Ln[q].partial(p, 0);
      P[3][p][q] = Ln[p].partial(q, 2) + d2;
      P[2][p][q] = Ln[p].partial(q, 1) - d1 + Rational(3) * total_x(d2);
      P[1][p][q] = Ln[p].partial(q, 0) + d0 - Rational(2) * total_x(d1) +
                   Rational(3) * total_x(d2, 2);
      P[0][p][q] = total_x(d0 - total_x(d1) + total_x(d2, 2));
    }
  return conjugate(K, from_powers(P, n, bound));
}

OperatorMatrix A2_from_potential(const QMatrix& K, const Covector& Ln) {
  return conjugate(K, presentation_operator(Ln));
}

EvolutionField tau_field(const QMatrix& K, const Covector& Ln) {
  const std::size_t n = Ln.size();
  EvolutionField tau(n, n ? Ln[0].jet_bound() : kDefaultJetBound);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      if (K(i, a) != 0) tau[i] -= Ln[a] * K(i, a);
  return tau;
}

LagrangianRep make_rep(const BiHamiltonianSystem& sys, const StructureTensors& s,
                       const Obstruction& ob, const Tensor& R) {
  LagrangianRep rep;
  rep.G = s.G;
  rep.R = R;
  rep.L = s.L;
  rep.F = s.F;
  rep.T = ob.T;
  rep.Ln = assemble_Ln(s.G, R, s.L, sys.jet_bound);
  rep.tau = tau_field(sys.K, rep.Ln);
  return rep;
}

EvolutionField hamiltonian_flow(const BiHamiltonianSystem& sys, const DiffPoly& h) {
  return apply_to_field(sys.A1().with_jet_bound(h.jet_bound()), euler(h));
}

DiffPoly time_derivative(const DiffPoly& f, const EvolutionField& flow) {
  return evolutionary_derivative(f, flow);
}

EvolutionField flow_commutator(const EvolutionField& x, const EvolutionField& y) {
  EvolutionField out(x.size(), x.size() ? x[0].jet_bound() : kDefaultJetBound);
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = evolutionary_derivative(y[i], x) - evolutionary_derivative(x[i], y);
  return out;
}

CertificationReport certify(const BiHamiltonianSystem& sys, const LagrangianRep& rep) {
  using S = CheckResult::Status;
  const std::size_t n = sys.dim();
  const Names& names = sys.coordinates;
  CertificationReport out;

  {
    CheckResult c{"lie-derivative", S::skipped, {}};
    OperatorMatrix lie = lie_derivative(sys.A1(), rep.tau);
    c.residual = operator_difference(lie, sys.A2, names);
    c.status = c.residual.empty() ? S::pass : S::fail;
    out.checks.push_back(c);
  }
  {
    CheckResult c{"presentation", S::skipped, {}};
    Covector psi(n, sys.jet_bound);
    for (std::size_t a = 0; a < n; ++a) psi[a] = -rep.Ln[a];
    c.residual = operator_difference(presentation_operator(psi),
                                     symplectic_operator(sys).B, names);
    c.status = c.residual.empty() ? S::pass : S::fail;
    out.checks.push_back(c);
  }
  {
    CheckResult c{"conservation", S::skipped, {}};
    if (!sys.h) {
      c.residual = "no Hamiltonian density h supplied";
    } else {
      EvolutionField flow = hamiltonian_flow(sys, *sys.h);
      const int bound = std::max(
          sys.jet_bound, 2 * (max_order(rep.Ln.components()) + max_order(flow.components())) + 3);
      EvolutionField wide(rebound(flow.components(), bound));
      c.status = S::pass;
      for (std::size_t a = 0; a < n && c.status == S::pass; ++a) {
        DiffPoly dt = time_derivative(rep.Ln[a].with_jet_bound(bound), wide);
        if (!is_total_divergence(dt)) {
          c.status = S::fail;
          c.residual = "D_t L_" + std::to_string(a + 1) + " is not a total x-derivative";
        }
      }
    }
    out.checks.push_back(c);
  }
  {
    CheckResult c{"recursion", S::skipped, {}};
    c.status = S::pass;
    const int bound = std::max(sys.jet_bound, 2 * max_order(rep.Ln.components()) + 2);
    OperatorMatrix a1 = sys.A1().with_jet_bound(bound);
    OperatorMatrix a2 = sys.A2.with_jet_bound(bound);
    for (std::size_t k = 0; k < n && c.status == S::pass; ++k) {
      std::vector<DiffPoly> e(n, DiffPoly(n, bound));
      e[k] = DiffPoly::constant(n, Rational(1), bound);
      DiffPoly dens(n, bound);
      for (std::size_t m = 0; m < n; ++m)
        if (sys.K(k, m) != 0) dens += rep.Ln[m].with_jet_bound(bound) * sys.K(k, m);
      std::vector<DiffPoly> lhs = lagrep::apply(a2, e);
      std::vector<DiffPoly> rhs = lagrep::apply(a1, euler(dens).components());
      for (std::size_t i = 0; i < n; ++i) {
        if (!(lhs[i] == rhs[i])) {
          c.status = S::fail;
          c.residual = "Casimir u" + std::to_string(k + 1) + ", component " +
                       std::to_string(i + 1) + ": " + to_string(lhs[i] - rhs[i], names);
          break;
        }
      }
    }
    out.checks.push_back(c);
  }
  return out;
}

DiffPoly recursion_step(const BiHamiltonianSystem& sys, const DiffPoly& h) {
  const std::size_t n = sys.dim();
  const int bound = std::max(sys.jet_bound, 2 * (static_cast<int>(h.order()) * 2 + 3) + 1);
  Covector eh = euler(h.with_jet_bound(bound));
  std::vector<DiffPoly> flow = lagrep::apply(sys.A2.with_jet_bound(bound), eh.components());
  Covector psi(n, bound);
  for (std::size_t p = 0; p < n; ++p) {
    DiffPoly v(n, bound);
    for (std::size_t i = 0; i < n; ++i)
      if (sys.M(p, i) != 0) v += flow[i] * sys.M(p, i);
    if (!is_total_divergence(v))
      throw NotDivergenceError("recursion_step: component " + std::to_string(p + 1) +
                                   " of M A2 euler(h) is not a total x-derivative",
                               euler(v));
    psi[p] = formal_x_integral(v);
  }
  if (!helmholtz_symmetric(psi))
    throw NotVariationalError(
        "recursion_step: the integrated covector fails the Helmholtz conditions");
  bool polynomial = true;
  for (const auto& c : psi) polynomial = polynomial && c.has_polynomial_coefficients();
  return polynomial ? volterra_homotopy(psi) : grade_homotopy(psi);
}

Derivation derive(const BiHamiltonianSystem& sys, const RSolverOptions& opts) {
  Derivation out;
  auto stage = [&](const std::string& name, bool pass, std::string detail = {}) {
    out.stages.push_back({name, pass, std::move(detail)});
    return pass;
  };
  const Names& names = sys.coordinates;

  std::string skew = skew_adjoint_residual(sys.A2, names);
  if (!stage("skew-adjointness", skew.empty(), skew)) return out;
  if (!stage("homogeneity", is_homogeneous(sys.A2, 3),
             is_homogeneous(sys.A2, 3) ? "" : "A2 is not homogeneous of order 3"))
    return out;

  symplectic_operator(sys);
  stage("symplectic", true);

  StructureTensors s;
  try {
    s = extract_GLF(sys);
  } catch (const AnsatzError& e) {
    stage("extract", false, e.what());
    return out;
  }
  stage("extract", true);

  Obstruction ob = obstruction_T(s.G, s.L, s.F);
  if (!stage("obstruction", ob.closed,
             !ob.skew ? "T is not totally skew" : (ob.closed ? "" : "dT != 0")))
    return out;

  try {
    out.r_solution = solve_R(ob.T, opts);
  } catch (const NoSolutionError& e) {
    stage("solve-R", false, e.what());
    return out;
  }
  stage("solve-R", true, out.r_solution->method);

  out.rep = make_rep(sys, s, ob, out.r_solution->R);
  stage("assemble", true);

  out.reconstructed = reconstruct_A2(sys.K, s.G, out.r_solution->R, s.L, sys.jet_bound);
  std::string diff = operator_difference(*out.reconstructed, sys.A2, names);
  if (!stage("reconstruct", diff.empty(), diff)) return out;

  out.certification = certify(sys, *out.rep);
  std::string failed;
  for (const auto& c : out.certification->checks)
    if (!c.ok()) failed += (failed.empty() ? "" : "; ") + c.name + ": " + c.residual;
  stage("certify", out.certification->pass(), failed);
  return out;
}

}  // namespace lagrep
