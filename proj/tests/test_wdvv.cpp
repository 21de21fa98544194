#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "lagrep/wdvv.hpp"
#include "support.hpp"

using namespace lagrep;
using namespace lagrep::testing;

namespace {

const WdvvFixture& fixture() {
  static const WdvvFixture f = load_wdvv3();
  return f;
}

// Leibniz expansion over all permutations.
template <class T>
T leibniz(const std::vector<std::vector<T>>& m, const T& zero, const T& one) {
  const std::size_t n = m.size();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  T sum = zero;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    T term = one;
    for (std::size_t i = 0; i < n; ++i) term = T(term * m[i][p[i]]);
    if (inversions % 2) sum = sum - term;
    else sum = sum + term;
  } while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

}  // namespace

TEST_CASE("fixture data") {
  const WdvvFixture& f = fixture();
  CHECK(f.system.dim() == 3);
  CHECK(f.source == Names{"a", "b", "c"});
  CHECK(f.system.transform.has_value());
  // Every stored expression parses.
  const Json& e = f.data.at("expected");
  for (const char* key : {"g_contravariant", "g_covariant", "G", "G_contravariant", "R0"})
    CHECK_NOTHROW(function_matrix_from_json(e.at(key), f.system.coordinates));
  CHECK_NOTHROW(parse_ratfn(e.at("det_G").get<std::string>(), f.system.coordinates));
  CHECK(fixture_json("wdvv3") == f.data);
  CHECK_THROWS_AS(fixture_json("wdvv6"), InputError);
}

TEST_CASE("Lax eigenvalues") {
  const WdvvFixture& f = fixture();
  LaxReport rep = lax_eigenvalue_check(f);
  CHECK(rep.pass);

  const Names src{"a", "b", "c", "lambda"};
  const char* x[3][3] = {{"0", "1", "0"}, {"b", "a", "1"}, {"c", "b", "0"}};
  std::vector<std::vector<RatFn>> m(3, std::vector<RatFn>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      m[i][j] = rf(i == j ? std::string("lambda-(") + x[i][j] + ")" : std::string("-(") + x[i][j] + ")", src);
  RatFn brute = leibniz(m, RatFn(4), RatFn(4, Rational(1)));
  CHECK(brute == rf(rep.char_poly_source, src));
  CHECK(brute == rf("lambda^3-a*lambda^2-2*b*lambda-c", src));
  CHECK(rf(rep.char_poly_u, {"u1", "u2", "u3", "lambda"}) ==
        rf("(lambda-u1)*(lambda-u2)*(lambda-u3)", {"u1", "u2", "u3", "lambda"}));

  // At u = (1,2,3): a = 6, b = -11/2, c = 6, and the numeric matrix has eigenvalues 1, 2, 3.
  const Rational a(6), b(-11, 2), c(6);
  const Rational xv[3][3] = {{0, 1, 0}, {b, a, 1}, {c, b, 0}};
  for (int k : {1, 2, 3}) {
    std::vector<std::vector<Rational>> mk(3, std::vector<Rational>(3));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) mk[i][j] = (i == j ? Rational(k) : Rational(0)) - xv[i][j];
    CHECK(leibniz(mk, Rational(0), Rational(1)) == 0);
  }
  CHECK(leibniz(std::vector<std::vector<Rational>>{{4, -1, 0}, {-b, 4 - a, -1}, {-c, -b, 4}},
                Rational(0), Rational(1)) == 6);

  // At the origin the matrix is nilpotent.
  std::vector<Rational> origin{0, 0, 0, 2};
  CHECK(rf(rep.char_poly_source, src).evaluate(origin) == 8);
}

TEST_CASE("fluxes and Casimir structure") {
  const WdvvFixture& f = fixture();
  CHECK(flux_check(f));
  CHECK(monge_check(f));
  CHECK(casimir_form_check(f));

  // Component a: D_t(u1+u2+u3) = D_x(-1/2(u1 u2 + u2 u3 + u3 u1)).
  EvolutionField flow = hamiltonian_flow(f.system, *f.system.h);
  CHECK(flow[0] + flow[1] + flow[2] == total_x(dp("-1/2*(u1*u2+u2*u3+u3*u1)")));
  for (const auto& c : flow) {
    CHECK(is_total_divergence(c));
    // Constant states are stationary: every term carries a first jet.
    for (const auto& [mono, coeff] : c.terms()) CHECK(mono.size() == 1);
  }

  // A perturbed source operator loses the Casimir form and the Monge inverse.
  WdvvFixture bad = f;
  (*bad.system.A2_source)(0, 0) =
      (*bad.system.A2_source)(0, 0) + DiffOp::term(dp("a_x*b_x*c_x", f.source), 0);
  CHECK_FALSE(casimir_form_check(bad));
  WdvvFixture bad2 = f;
  (*bad2.system.A2_source)(0, 0) =
      (*bad2.system.A2_source)(0, 0) + DiffOp::term(dp("1", f.source), 3);
  CHECK_FALSE(monge_check(bad2));
}

TEST_CASE("derivation matches the stored tensors") {
  const WdvvFixture& f = fixture();
  Derivation d = derive(f.system);
  REQUIRE(d.pass());
  for (const auto& c : compare_with_expected(f, d)) {
    INFO(c.name << ": " << c.residual);
    CHECK(c.status == CheckResult::Status::pass);
  }
}
