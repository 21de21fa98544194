#include <doctest.h>

#include "lagrep/geometry.hpp"
#include "lagrep/io.hpp"
#include "support.hpp"

using namespace lagrep;
using namespace lagrep::testing;

namespace {

const Json& expected() {
  static const Json j = read_json_file(LAGREP_DATA_DIR "/wdvv3/system.json").at("expected");
  return j;
}

FMatrix matrix(const Json& rows, const Names& names = u3()) {
  return function_matrix_from_json(rows, names);
}

FMatrix diag2(const std::string& a, const std::string& b, const Names& x) {
  FMatrix g(2, 2, RatFn(2));
  g(0, 0) = rf(a, x);
  g(1, 1) = rf(b, x);
  return g;
}

FMatrix identity_f(std::size_t n, std::size_t nv) {
  return to_function_matrix(QMatrix::identity(n, Rational(0), Rational(1)), nv);
}

}  // namespace

TEST_CASE("WDVV metric: inverse, curvature, signature") {
  const FMatrix G = matrix(expected().at("G"));
  const FMatrix Gi = invert_metric(G);
  CHECK(Gi == matrix(expected().at("G_contravariant")));
  CHECK(G * Gi == identity_f(3, 3));
  CHECK(Gi.determinant() * G.determinant() == RatFn(3, Rational(1)));

  const FMatrix gc = matrix(expected().at("g_covariant"));
  const FMatrix gu = matrix(expected().at("g_contravariant"));
  CHECK(gc * gu == identity_f(3, 3));

  CurvatureReport rep = constant_curvature_test(G, u3());
  INFO(rep.residual);
  REQUIRE(rep.kappa);
  CHECK(*rep.kappa == parse_rational(expected().at("sectional_curvature").get<std::string>()));
  CHECK(*rep.kappa == Rational(-1, 16));
  CHECK(rep.symmetries);
  CHECK(rep.bianchi);

  const std::vector<Rational> p{Rational(0), Rational(1), Rational(3)};
  Signature s = signature_at(G, p);
  CHECK(s.positive == expected().at("signature")[0].get<std::size_t>());
  CHECK(s.negative == expected().at("signature")[1].get<std::size_t>());
  CHECK(s.zero == 0);
}

TEST_CASE("model surfaces") {
  const Names x{"x", "y"};
  // Stereographic round sphere and the Poincare half-plane.
  auto sphere = constant_curvature_test(
      diag2("4/(1+x^2+y^2)^2", "4/(1+x^2+y^2)^2", x), x);
  REQUIRE(sphere.kappa);
  CHECK(*sphere.kappa == 1);
  auto hyper = constant_curvature_test(diag2("1/y^2", "1/y^2", x), x);
  REQUIRE(hyper.kappa);
  CHECK(*hyper.kappa == -1);

  // Polar coordinates on the plane are flat.
  auto polar = constant_curvature_test(diag2("1", "x^2", x), x);
  REQUIRE(polar.kappa);
  CHECK(*polar.kappa == 0);
  CHECK(christoffel(diag2("1", "x^2", x))(0, 1, 1) == rf("-x", x));
  CHECK(christoffel(diag2("1", "x^2", x))(1, 0, 1) == rf("1/x", x));

  // dr^2 + r^4 dth^2: Gaussian curvature -(r^2)''/r^2 = -2/r^2, so R_1212 = -2 r^2.
  const FMatrix quartic = diag2("1", "x^4", x);
  CHECK(riemann(quartic)(0, 1, 0, 1) == rf("-2*x^2", x));
  auto rep = constant_curvature_test(quartic, x);
  CHECK_FALSE(rep.kappa);
  CHECK(rep.residual.find("R(1,2,1,2)") == 0);

  FMatrix singular(2, 2, rf("x", x));
  CHECK_THROWS_AS(invert_metric(singular), MathError);
}

TEST_CASE("curvature identities on random metrics") {
  Random r(31);
  const Names x{"x", "y"};
  int not_constant = 0;
  for (int trial = 0; trial < 200; ++trial) {
    FMatrix g(2, 2, RatFn(2));
    g(0, 0) = RatFn(r.poly(2, 2, 2) + MPoly(2, Rational(r.integer(1, 3))));
    g(1, 1) = RatFn(r.poly(2, 2, 2) + MPoly(2, Rational(r.integer(1, 3))));
    if (trial % 2) g(0, 1) = g(1, 0) = RatFn(r.poly(2, 1, 1));
    if (g.determinant().is_zero()) continue;
    CHECK(invert_metric(g).determinant() * g.determinant() == RatFn(2, Rational(1)));
    Tensor R = riemann(g);
    CHECK(riemann_symmetries(R));
    CHECK(first_bianchi(R));
    if (!constant_curvature_test(g, x).kappa) ++not_constant;
  }
  // Many samples have constant or single-variable entries, which are flat.
  CHECK(not_constant > 80);
  CHECK_FALSE(constant_curvature_test(diag2("1+x^2", "1+x+y^2", x), x).kappa);
}
