#include "lagrep/geometry.hpp"

namespace lagrep {

namespace {

RatFn zero_like(const FMatrix& g) { return RatFn(g(0, 0).nvars()); }

std::string idx4(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) +
         "," + std::to_string(l + 1) + ")";
}

}  // namespace

FMatrix invert_metric(const FMatrix& g) {
  auto inv = g.inverse();
  if (!inv) throw MathError("metric is singular");
  return *inv;
}

Tensor christoffel(const FMatrix& g) {
  const std::size_t n = g.rows(), nv = g(0, 0).nvars();
  const FMatrix gi = invert_metric(g);
  // Lowered symbols first: Gamma_{s,jk}.
  Tensor low(3, n, nv);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k)
        low(s, j, k) = low(s, k, j) =
            (g(s, j).partial(k) + g(s, k).partial(j) - g(j, k).partial(s)) * Rational(1, 2);
  Tensor gam(3, n, nv);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        RatFn v = zero_like(g);
        for (std::size_t s = 0; s < n; ++s)
          if (!gi(i, s).is_zero() && !low(s, j, k).is_zero()) v += gi(i, s) * low(s, j, k);
        gam(i, j, k) = gam(i, k, j) = v;
      }
  return gam;
}

Tensor riemann(const FMatrix& g) {
  const std::size_t n = g.rows(), nv = g(0, 0).nvars();
  const Tensor gam = christoffel(g);
  Tensor up(4, n, nv);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          RatFn v = gam(i, j, l).partial(k) - gam(i, j, k).partial(l);
          for (std::size_t p = 0; p < n; ++p)
            v += gam(i, k, p) * gam(p, j, l) - gam(i, l, p) * gam(p, j, k);
          up(i, j, k, l) = v;
          up(i, j, l, k) = -v;
        }
  Tensor r(4, n, nv);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          RatFn v = zero_like(g);
          for (std::size_t m = 0; m < n; ++m)
            if (!g(i, m).is_zero() && !up(m, j, k, l).is_zero()) v += g(i, m) * up(m, j, k, l);
          r(i, j, k, l) = v;
        }
  return r;
}

bool riemann_symmetries(const Tensor& r) {
  bool ok = true;
  r.for_each_index([&](const std::vector<std::size_t>& x) {
    if (!ok) return;
    const RatFn& v = r.at(x);
    ok = r(x[1], x[0], x[2], x[3]) == -v && r(x[0], x[1], x[3], x[2]) == -v &&
         r(x[2], x[3], x[0], x[1]) == v;
  });
  return ok;
}

bool first_bianchi(const Tensor& r) {
  bool ok = true;
  r.for_each_index([&](const std::vector<std::size_t>& x) {
    if (!ok) return;
    const std::size_t i = x[0], j = x[1], k = x[2], l = x[3];
    ok = (r(i, j, k, l) + r(i, k, l, j) + r(i, l, j, k)).is_zero();
  });
  return ok;
}

bool second_bianchi(const FMatrix& g, const Tensor& r) {
  const std::size_t n = g.rows();
  const Tensor gam = christoffel(g);
  // nabla_m R_{ijkl}
  auto cov = [&](std::size_t m, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    RatFn v = r(i, j, k, l).partial(m);
    for (std::size_t p = 0; p < n; ++p) {
      v -= gam(p, m, i) * r(p, j, k, l);
      v -= gam(p, m, j) * r(i, p, k, l);
      v -= gam(p, m, k) * r(i, j, p, l);
      v -= gam(p, m, l) * r(i, j, k, p);
    }
    return v;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t m = 0; m < n; ++m)
            if (!(cov(m, i, j, k, l) + cov(k, i, j, l, m) + cov(l, i, j, m, k)).is_zero())
              return false;
  return true;
}

CurvatureReport constant_curvature_test(const FMatrix& g, const Names& names) {
  const std::size_t n = g.rows();
  const Tensor r = riemann(g);
  CurvatureReport rep;
  rep.symmetries = riemann_symmetries(r);
  rep.bianchi = first_bianchi(r) && second_bianchi(g, r);

  std::optional<RatFn> kappa;
  for (std::size_t i = 0; i < n && rep.residual.empty(); ++i)
    for (std::size_t j = 0; j < n && rep.residual.empty(); ++j)
      for (std::size_t k = 0; k < n && rep.residual.empty(); ++k)
        for (std::size_t l = 0; l < n && rep.residual.empty(); ++l) {
          const RatFn form = g(i, k) * g(j, l) - g(i, l) * g(j, k);
          const RatFn& v = r(i, j, k, l);
          if (form.is_zero()) {
            if (!v.is_zero()) rep.residual = "R" + idx4(i, j, k, l) + " = " + to_string(v, names) +
                                             " where the model form vanishes";
            continue;
          }
          const RatFn ratio = v / form;
          if (!ratio.is_constant()) {
            rep.residual = "R" + idx4(i, j, k, l) + " / model form = " + to_string(ratio, names);
          } else if (!kappa) {
            kappa = ratio;
          } else if (!(ratio == *kappa)) {
            rep.residual = "R" + idx4(i, j, k, l) + " gives curvature " + to_string(ratio, names) +
                           " but an earlier component gives " + to_string(*kappa, names);
          }
        }
  if (rep.residual.empty()) rep.kappa = kappa ? kappa->constant_value() : Rational(0);
  return rep;
}

Signature signature_at(const FMatrix& g, std::span<const Rational> point) {
  QMatrix q(g.rows(), g.cols(), Rational(0));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) q(i, j) = g(i, j).evaluate(point);
  return signature(q);
}

}  // namespace lagrep
