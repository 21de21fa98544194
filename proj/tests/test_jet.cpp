#include "doctest.h"
#include "support.hpp"

using namespace lagrep;
using namespace lagrep::testing;

namespace {

Covector cov(const std::vector<std::string>& parts) {
  std::vector<DiffPoly> c;
  for (const auto& p : parts) c.push_back(dp(p));
  return Covector(std::move(c));
}

}  // namespace

TEST_CASE("total derivative") {
  CHECK(total_x(dp("7")).is_zero());
  CHECK(total_x(dp("u1")) == dp("u1_x"));
  CHECK(total_x(dp("u1*u2_x")) == dp("u1_x*u2_x + u1*u2_xx"));
  CHECK(total_x(dp("1/(u1-u2)")) == dp("-(u1_x-u2_x)/(u1-u2)^2"));
  CHECK(total_x(dp("u1"), 3) == dp("u1_xxx"));
  CHECK_THROWS_AS(total_x(dp("u1_x6")), BoundError);
}

TEST_CASE("euler operator") {
  CHECK(euler(dp("u1_x*u2 + u1*u2_x")).is_zero());
  CHECK(euler(dp("1/2*u1_x^2")) == cov({"-u1_xx", "0", "0"}));
  CHECK(euler(dp("u1*u2*u3")) == cov({"u2*u3", "u1*u3", "u1*u2"}));
}

TEST_CASE("total divergence test") {
  CHECK(is_total_divergence(dp("u1_x")));
  CHECK(is_total_divergence(dp("u1*u1_x")));
  CHECK_FALSE(is_total_divergence(dp("u1_x^2")));
}

TEST_CASE("formal x-integration") {
  CHECK(formal_x_integral(dp("u1_x")) == dp("u1"));
  CHECK(formal_x_integral(dp("u1_x*u2_x + u1*u2_xx")) == dp("u1*u2_x"));
  CHECK(formal_x_integral(dp("0")).is_zero());
  const DiffPoly g = dp("u1_x*u2_xx/(u1-u3)^2 + u3*u2_x^3");
  CHECK(total_x(formal_x_integral(total_x(g))) == total_x(g));
  try {
    formal_x_integral(dp("u1_x^2"));
    FAIL("expected NotDivergenceError");
  } catch (const NotDivergenceError& e) {
    CHECK(e.fingerprint() == cov({"-2*u1_xx", "0", "0"}));
  }
  // A logarithmic primitive is not rational.
  CHECK_THROWS_AS(formal_x_integral(dp("u1_x/u1")), MathError);
}

TEST_CASE("homotopy operators") {
  CHECK(volterra_homotopy(cov({"u2*u3", "u1*u3", "u1*u2"})) == dp("u1*u2*u3"));
  CHECK(volterra_homotopy(cov({"0", "0", "0"})).is_zero());
  const DiffPoly l = volterra_homotopy(cov({"-u1_xx", "0", "0"}));
  CHECK(euler(l) == cov({"-u1_xx", "0", "0"}));
  // Equal to 1/2*u1_x^2 up to a total derivative.
  CHECK(is_total_divergence(l - dp("1/2*u1_x^2")));
  CHECK_THROWS_AS(volterra_homotopy(cov({"u2_x", "0", "0"})), NotVariationalError);
  CHECK_THROWS_AS(volterra_homotopy(cov({"1/u1", "0", "0"})), UnsupportedInputError);

  // Rational coefficients: the grading homotopy handles them.
  const DiffPoly rl = dp("u1_x*u2_x/(u1-u2)");
  const Covector psi = euler(rl);
  CHECK(euler(grade_homotopy(psi)) == psi);
}

TEST_CASE("grading") {
  CHECK(dp("u1_xx").grade() == 2u);
  CHECK(dp("u1_x*u2_x").grade() == 2u);
  CHECK_FALSE(dp("u1 + u1_x").grade().has_value());
}

TEST_CASE("rational integration") {
  const RatFn f = rf("1/(u1-u2)^2 + u3/(u1-u3)^3 + u1*u2");
  CHECK(integrate_rational(f, 0).partial(0) == f);
  CHECK_THROWS_AS(integrate_rational(rf("1/(u1-u2)"), 0), MathError);
  const RatFn pot = rf("u1*u2/(u1-u3) + u2^2*u3");
  CHECK((integrate_gradient({pot.partial(0), pot.partial(1), pot.partial(2)}) - pot).is_constant());
}

TEST_CASE("jet calculus properties on random samples") {
  Random rnd(2024);
  int checked = 0;
  for (int iter = 0; iter < 250; ++iter) {
    const bool rational = iter % 2 == 1;
    const DiffPoly f = rnd.diffpoly(3, 3, 3, 3, rational);
    const DiffPoly g = rnd.diffpoly(3, 2, 2, 2, rational);
    // euler o total_x = 0
    CHECK(euler(total_x(f)).is_zero());
    // total_x is a derivation
    CHECK(total_x(f * g) == total_x(f) * g + f * total_x(g));
    // formal integration inverts total_x up to constants
    const DiffPoly dfx = total_x(f);
    CHECK(total_x(formal_x_integral(dfx)) == dfx);
    // grade shifts by one
    if (auto w = f.grade(); w && !total_x(f).is_zero()) CHECK(total_x(f).grade() == *w + 1);
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("homotopy round trip on random polynomial densities") {
  Random rnd(99);
  for (int iter = 0; iter < 200; ++iter) {
    const DiffPoly l = rnd.diffpoly(3, 3, 2, 3, false);
    const Covector psi = euler(l);
    const DiffPoly back = volterra_homotopy(psi);
    CHECK(euler(back) == psi);
  }
}
