#include <doctest.h>

#include "lagrep/io.hpp"
#include "lagrep/variational.hpp"
#include "support.hpp"

using namespace lagrep;
using namespace lagrep::testing;

namespace {

QMatrix wdvv_k() {
  QMatrix k(3, 3, Rational(-1, 2));
  for (std::size_t i = 0; i < 3; ++i) k(i, i) = Rational(1, 2);
  return k;
}

OperatorMatrix dx_identity(std::size_t n, std::uint32_t k = 1) {
  return OperatorMatrix::constant(QMatrix::identity(n, Rational(0), Rational(1)), k);
}

Json fixture_json() { return read_json_file(LAGREP_DATA_DIR "/wdvv3/system.json"); }

// Jet point: base values and jets[i][sigma-1], shifted by eps * D^sigma(tau).
struct JetPoint {
  std::vector<Rational> base;
  std::vector<std::vector<Rational>> jets;
};

JetPoint shifted(const JetPoint& p, const std::vector<DiffPoly>& tau, const Rational& eps) {
  JetPoint q = p;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    DiffPoly d = tau[i];
    q.base[i] += eps * d.evaluate(p.base, p.jets);
    for (std::size_t s = 0; s < p.jets[i].size() && s + 1 < 4; ++s) {
      d = total_x(d);
      q.jets[i][s] += eps * d.evaluate(p.base, p.jets);
    }
  }
  return q;
}

}  // namespace

TEST_CASE("linearization") {
  CHECK(frechet(std::vector<DiffPoly>{dp("u1_x"), dp("u2_x"), dp("u3_x")}) == dx_identity(3));

  OperatorMatrix hess = frechet(euler(dp("u1*u2*u3")));
  CHECK(hess.order() == 0);
  const char* h[3][3] = {{"0", "u3", "u2"}, {"u3", "0", "u1"}, {"u2", "u1", "0"}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(hess(i, j).coefficient(0) == dp(h[i][j]));

  // Flow of the WDVV system in flat coordinates. It is quadratic in the jets,
  // so a central difference is an exact directional derivative.
  std::vector<DiffPoly> flow = lagrep::apply(OperatorMatrix::constant(wdvv_k(), 1),
                                     euler(dp("u1*u2*u3")).components());
  OperatorMatrix l = frechet(flow);
  CHECK(l(0, 0).coefficient(1) == dp("-1/2*(u2+u3)"));
  std::vector<DiffPoly> tau{dp("u2*u3_x"), dp("u1^2"), dp("u1_xx-u2")};
  JetPoint p{{Rational(2), Rational(-1), Rational(3)},
             {{Rational(1), Rational(5), Rational(-2), Rational(0), Rational(0), Rational(0)},
              {Rational(-3), Rational(1, 2), Rational(4), Rational(0), Rational(0), Rational(0)},
              {Rational(7), Rational(-1), Rational(1), Rational(0), Rational(0), Rational(0)}}};
  const Rational eps(1, 7);
  JetPoint plus = shifted(p, tau, eps), minus = shifted(p, tau, -eps);
  std::vector<DiffPoly> lt = lagrep::apply(l, tau);
  for (std::size_t k = 0; k < 3; ++k) {
    Rational fd = (flow[k].evaluate(plus.base, plus.jets) - flow[k].evaluate(minus.base, minus.jets)) /
                  (Rational(2) * eps);
    CHECK(lt[k].evaluate(p.base, p.jets) == fd);
  }
}

TEST_CASE("Helmholtz symmetry") {
  CHECK(helmholtz_symmetric(euler(dp("u1*u2_x^2+u3*u1_xx"))));
  Covector bad(std::vector<DiffPoly>{dp("u2_x"), dp("0"), dp("0")});
  CHECK_FALSE(helmholtz_symmetric(bad));
}

TEST_CASE("presentation of symplectic operators") {
  // The flat-coordinate image of a potential Euler expression carries B = 0.
  Covector e = euler(dp("u1*u2_x^2+u3^2*u1_x"));
  Covector psi(std::vector<DiffPoly>{total_x(e[0]), total_x(e[1]), total_x(e[2])});
  CHECK(presentation_check(OperatorMatrix(3, 3), psi));
  CHECK_FALSE(presentation_check(OperatorMatrix(3, 3), e));

  Covector order0(std::vector<DiffPoly>{dp("u2*u3"), dp("u1"), dp("u1*u3")});
  CHECK_FALSE(presentation_check(OperatorMatrix::constant(wdvv_k(), 1), order0));
  // In flat coordinates a linear potential psi = 1/2 K u presents K D_x itself.
  Covector lin(std::vector<DiffPoly>{dp("1/4*(u1-u2-u3)"), dp("1/4*(u2-u1-u3)"),
                                     dp("1/4*(u3-u1-u2)")});
  CHECK(presentation_operator(lin) == OperatorMatrix::constant(wdvv_k(), 1));
}

TEST_CASE("Lie derivative of operators") {
  OperatorMatrix k = OperatorMatrix::constant(wdvv_k(), 1);
  CHECK(lie_derivative(k, EvolutionField(3, kDefaultJetBound)).is_zero());
  EvolutionField c(std::vector<DiffPoly>{dp("1"), dp("-2"), dp("1/3")});
  CHECK(lie_derivative(k, c).is_zero());
  // Translation u1 -> u1 + t moves the coefficient u1 of a scalar operator.
  const Names x{"u1"};
  OperatorMatrix a(1, 1);
  a(0, 0) = DiffOp::term(dp("u1", x), 1) + DiffOp::term(dp("1/2*u1_x", x), 0);
  EvolutionField one(std::vector<DiffPoly>{dp("1", x)});
  OperatorMatrix expect(1, 1);
  expect(0, 0) = DiffOp::dx(1);
  CHECK(lie_derivative(a, one) == expect);
}

TEST_CASE("variational properties on random samples") {
  Random r(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = trial % 3 == 0 ? 1 : 2;
    DiffPoly dens = r.diffpoly(n, 3, 2, 3, trial % 4 == 1);
    CHECK(helmholtz_symmetric(euler(dens)));

    Covector psi(n, kDefaultJetBound);
    for (std::size_t i = 0; i < n; ++i) psi[i] = r.diffpoly(n, 2, 1, 2, false);
    OperatorMatrix b = presentation_operator(psi);
    CHECK(is_skew_adjoint(b));

    EvolutionField t1(n, kDefaultJetBound), t2(n, kDefaultJetBound);
    for (std::size_t i = 0; i < n; ++i) {
      t1[i] = r.diffpoly(n, 2, 1, 2, false);
      t2[i] = r.diffpoly(n, 2, 1, 2, false);
    }
    OperatorMatrix a = n == 1 ? OperatorMatrix::constant(QMatrix(1, 1, Rational(1)), 1)
                              : dx_identity(2);
    CHECK(lie_derivative(a, t1 + t2) == lie_derivative(a, t1) + lie_derivative(a, t2));
    CHECK(is_skew_adjoint(lie_derivative(a, t1)));
  }
}

TEST_CASE("Jacobi and compatibility evidence") {
  const Names x{"u"};
  auto t1 = monomial_triples(x, 2);
  OperatorMatrix d = OperatorMatrix::constant(QMatrix(1, 1, Rational(1)), 1);
  CHECK(jacobi_evidence(d, t1).pass());

  // Skew-adjoint but not Hamiltonian: the coefficient depends on u_x.
  OperatorMatrix bad(1, 1);
  bad(0, 0) = DiffOp::term(dp("2*u_x", x), 1) + DiffOp::term(dp("u_xx", x), 0);
  REQUIRE(is_skew_adjoint(bad));
  auto rep = jacobi_evidence(bad, t1);
  CHECK_FALSE(rep.pass());
  CHECK(rep.failures.size() >= 1);

  Json j = fixture_json();
  OperatorMatrix a1 = operator_from_json(j.at("A1")).op;
  OperatorMatrix a2 = operator_from_json(j.at("A2")).op;
  const Names abc{"a", "b", "c"};
  auto t3 = monomial_triples(abc, 1);
  CHECK(t3.triples.size() == 816);
  CHECK(jacobi_evidence(a1, t3).pass());
  CHECK(compatibility_evidence(a1, a1, t3).pass());
  CHECK(compatibility_evidence(a1, a2, t3).pass());

  QMatrix k = wdvv_k();
  auto tu = monomial_triples(u3(), 1);
  CHECK(compatibility_evidence(OperatorMatrix::constant(k, 1), OperatorMatrix::constant(k, 3), tu)
            .pass());

  // A skew perturbation of A1 that breaks the Jacobi identity.
  OperatorMatrix pert = a1;
  pert(0, 0) = pert(0, 0) + DiffOp::term(dp("2*b", abc), 1) + DiffOp::term(dp("b_x", abc), 0);
  REQUIRE(is_skew_adjoint(pert));
  CHECK_FALSE(jacobi_evidence(pert, t3).pass());
}
