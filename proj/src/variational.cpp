#include "lagrep/variational.hpp"

#include <algorithm>
#include <thread>

#include "lagrep/expr.hpp"

namespace lagrep {

OperatorMatrix frechet(const std::vector<DiffPoly>& f) {
  const std::size_t n = f.size();
  if (n == 0) throw InputError("frechet: empty vector");
  const std::size_t nc = f[0].ncomp();
  if (nc != n) throw InputError("frechet: expected as many components as coordinates");
  const int bound = f[0].jet_bound();
  OperatorMatrix l(n, nc, bound);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t ord = f[k].order();
    for (std::size_t i = 0; i < nc; ++i) {
      for (std::uint32_t s = 0; s <= ord; ++s) l(k, i).add(s, f[k].partial(i, s));
    }
  }
  return l;
}

bool helmholtz_symmetric(const Covector& psi) {
  OperatorMatrix l = frechet(psi);
  return l == adjoint(l);
}

OperatorMatrix presentation_operator(const Covector& psi) {
  OperatorMatrix l = frechet(psi);
  const std::size_t n = l.dim();
  OperatorMatrix d = OperatorMatrix::constant(QMatrix::identity(n, Rational(0), Rational(1)), 1,
                                              l.jet_bound());
  return compose(l, d) + compose(d, adjoint(l));
}

bool presentation_check(const OperatorMatrix& b, const Covector& psi) {
  return b == presentation_operator(psi);
}

OperatorMatrix directional_derivative(const OperatorMatrix& a, const EvolutionField& tau) {
  return a.map_coefficients([&](const DiffPoly& c) { return evolutionary_derivative(c, tau); });
}

OperatorMatrix lie_derivative(const OperatorMatrix& a, const EvolutionField& tau) {
  OperatorMatrix lt = frechet(tau);
  return directional_derivative(a, tau) - compose(lt, a) - compose(a, adjoint(lt));
}

CovectorTriples monomial_triples(const Names& names, std::uint32_t max_order, int jet_bound) {
  const std::size_t n = names.size();
  CovectorTriples t;
  for (std::size_t slot = 0; slot < n; ++slot) {
    for (std::size_t var = 0; var < n; ++var) {
      for (std::uint32_t s = 0; s <= max_order; ++s) {
        Covector c(n, jet_bound);
        c[slot] = DiffPoly::jet(n, var, s, jet_bound);
        t.basis.push_back(std::move(c));
        t.labels.push_back(to_string(t.basis.back()[slot], names) + " d" + names[slot]);
      }
    }
  }
  const std::size_t m = t.basis.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) t.triples.push_back({i, j, k});
  return t;
}

namespace {

std::uint32_t coefficient_order(const OperatorMatrix& a) {
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (const auto& [k, c] : a(i, j).coefficients()) r = std::max(r, c.order());
  return r;
}

DiffPoly pairing(const Covector& psi, const std::vector<DiffPoly>& v) {
  DiffPoly s(psi[0].ncomp(), psi[0].jet_bound());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (!psi[i].is_zero() && !v[i].is_zero()) s += psi[i] * v[i];
  }
  return s;
}

// Order of the densities is at most r + max(r, m + q), and the Euler operator
// doubles it.
int evidence_bound(const std::vector<const OperatorMatrix*>& ops, const CovectorTriples& t) {
  std::uint32_t r = 0, m = 0, q = 0;
  for (const auto* op : ops) {
    r = std::max(r, coefficient_order(*op));
    m = std::max(m, op->order());
  }
  for (const auto& c : t.basis)
    for (const auto& p : c) q = std::max(q, p.order());
  const std::uint32_t density = std::max(q, std::max(r + std::max(r, m + q), m + q));
  return static_cast<int>(2 * density + 1);
}

Covector rebound(const Covector& c, int bound) {
  Covector r(c.size(), bound);
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = c[i].with_jet_bound(bound);
  return r;
}

// `deform[b]` is the operator psi2 -> D_{X psi_b}(...)(psi2) for basis element b.
EvidenceReport run_triples(const std::vector<Covector>& basis,
                           const std::vector<OperatorMatrix>& deform, const CovectorTriples& t) {
  const std::size_t count = t.triples.size();
  std::vector<char> ok(count, 1);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t idx = begin; idx < count; idx += step) {
      const auto& tr = t.triples[idx];
      DiffPoly density(basis[0][0].ncomp(), basis[0][0].jet_bound());
      for (int rot = 0; rot < 3; ++rot) {
        const std::size_t p1 = tr[rot], p2 = tr[(rot + 1) % 3], p3 = tr[(rot + 2) % 3];
        density += pairing(basis[p1], lagrep::apply(deform[p3], basis[p2].components()));
      }
      ok[idx] = is_total_divergence(density) ? 1 : 0;
    }
  };
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 16));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(work, w, threads);
  work(0, threads);
  for (auto& th : pool) th.join();

  EvidenceReport rep;
  rep.checked = count;
  for (std::size_t idx = 0; idx < count; ++idx) {
    if (ok[idx]) continue;
    ++rep.failed;
    if (rep.failures.size() < 8) {
      const auto& tr = t.triples[idx];
      rep.failures.push_back({tr, "(" + t.labels[tr[0]] + ", " + t.labels[tr[1]] + ", " +
                                      t.labels[tr[2]] + "): density is not a total divergence"});
    }
  }
  return rep;
}

}  // namespace

EvidenceReport jacobi_evidence(const OperatorMatrix& a0, const CovectorTriples& t) {
  if (t.basis.empty()) return {};
  const int bound = std::max(evidence_bound({&a0}, t), a0.jet_bound());
  OperatorMatrix a = a0.with_jet_bound(bound);
  std::vector<Covector> basis;
  std::vector<OperatorMatrix> deform;
  for (const auto& c : t.basis) {
    basis.push_back(rebound(c, bound));
    EvolutionField x(lagrep::apply(a, basis.back().components()));
    deform.push_back(directional_derivative(a, x));
  }
  return run_triples(basis, deform, t);
}

EvidenceReport compatibility_evidence(const OperatorMatrix& a0, const OperatorMatrix& b0,
                                      const CovectorTriples& t) {
  if (t.basis.empty()) return {};
  const int bound =
      std::max({evidence_bound({&a0, &b0}, t), a0.jet_bound(), b0.jet_bound()});
  OperatorMatrix a = a0.with_jet_bound(bound);
  OperatorMatrix b = b0.with_jet_bound(bound);
  std::vector<Covector> basis;
  std::vector<OperatorMatrix> deform;
  for (const auto& c : t.basis) {
    basis.push_back(rebound(c, bound));
    EvolutionField xa(lagrep::apply(a, basis.back().components()));
    EvolutionField xb(lagrep::apply(b, basis.back().components()));
    deform.push_back(directional_derivative(b, xa) + directional_derivative(a, xb));
  }
  return run_triples(basis, deform, t);
}

}  // namespace lagrep
