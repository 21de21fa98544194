#include "lagrep/wdvv.hpp"

#include "lagrep/expr.hpp"

namespace lagrep {

namespace {

Json parse_fixture(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("embedded fixture is not valid JSON: ") + e.what());
  }
}

std::vector<std::string> string_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InputError(std::string("fixture: missing ") + key);
  return j.at(key).get<std::vector<std::string>>();
}

}  // namespace

Json fixture_json(const std::string& name) {
  if (name == "wdvv3") return parse_fixture(wdvv3_fixture_text());
  throw InputError("unknown fixture '" + name + "' (available: wdvv3)");
}

WdvvFixture load_wdvv3(int jet_bound) {
  WdvvFixture f;
  f.data = fixture_json("wdvv3");
  f.system = load_system(f.data, jet_bound);
  f.source = string_list(f.data, "source_coordinates");
  return f;
}

LaxReport lax_eigenvalue_check(const WdvvFixture& f) {
  const Json& lax = f.data.at("lax");
  const std::string lam = lax.value("spectral", "lambda");
  Names src = f.source;
  src.push_back(lam);
  const std::size_t n = f.source.size(), nv = src.size();

  FMatrix x = function_matrix_from_json(lax.at("Vx"), src);
  if (x.rows() != n) throw InputError("fixture: Lax matrix has the wrong size");
  const RatFn l(MPoly::variable(nv, n));
  FMatrix m(n, n, RatFn(nv));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? l : RatFn(nv)) - x(i, j);
  const RatFn cp = m.determinant();

  // Substitute a(u) and keep lambda.
  Names tgt = f.system.coordinates;
  tgt.push_back(lam);
  std::vector<RatFn> values;
  for (const auto& a : f.system.transform->inverse_map()) {
    std::vector<std::size_t> map(n);
    for (std::size_t i = 0; i < n; ++i) map[i] = i;
    values.push_back(RatFn(a.num().remap(nv, map), a.den().remap(nv, map)));
  }
  values.push_back(l);
  const RatFn cpu = cp.substitute(values);

  RatFn expect(nv, Rational(1));
  for (std::size_t k = 0; k < n; ++k) expect *= l - RatFn(MPoly::variable(nv, k));

  LaxReport rep;
  rep.char_poly_source = to_string(cp, src);
  rep.char_poly_u = to_string(cpu, tgt);
  rep.pass = cpu == expect;
  return rep;
}

bool flux_check(const WdvvFixture& f) {
  const BiHamiltonianSystem& sys = f.system;
  if (!sys.h || !sys.transform) return false;
  const std::size_t n = sys.dim();
  const int bound = sys.jet_bound;
  const PointTransform& t = *sys.transform;
  EvolutionField flow = hamiltonian_flow(sys, *sys.h);

  // D_t a^k(u) = D_x (flux^k pulled back).
  const auto fluxes = string_list(f.data, "flux_source");
  for (std::size_t k = 0; k < n; ++k) {
    DiffPoly lhs(n, bound);
    for (std::size_t i = 0; i < n; ++i)
      if (!t.da_du()(k, i).is_zero()) lhs += DiffPoly(t.da_du()(k, i), bound) * flow[i];
    DiffPoly rhs = total_x(t.pull_back(parse_diffpoly(fluxes[k], f.source, bound), bound));
    if (!(lhs == rhs)) return false;
  }

  // The same flow from A1 euler(h) in the source chart.
  if (sys.A1_source && f.data.contains("h_source")) {
    DiffPoly hs = parse_diffpoly(f.data.at("h_source").get<std::string>(), f.source, bound);
    std::vector<DiffPoly> src_flow = lagrep::apply(*sys.A1_source, euler(hs).components());
    for (std::size_t k = 0; k < n; ++k) {
      DiffPoly lhs(n, bound);
      for (std::size_t i = 0; i < n; ++i)
        if (!t.da_du()(k, i).is_zero()) lhs += DiffPoly(t.da_du()(k, i), bound) * flow[i];
      if (!(lhs == t.pull_back(src_flow[k], bound))) return false;
    }
  }
  return true;
}

bool monge_check(const WdvvFixture& f) {
  if (!f.system.A2_source) return false;
  HomogeneousTensors ht = leading_and_lower(*f.system.A2_source, 3);
  auto inv = ht.g.to_matrix().inverse();
  return inv && *inv == function_matrix_from_json(f.data.at("monge_metric"), f.source);
}

bool casimir_form_check(const WdvvFixture& f) {
  if (!f.system.A2_source) return false;
  auto q = strip_outer_dx(*f.system.A2_source);
  return q && q->order() <= 1 && is_homogeneous(*q, 1);
}

std::vector<CheckResult> compare_with_expected(const WdvvFixture& f, const Derivation& d) {
  using S = CheckResult::Status;
  const Json& e = f.data.at("expected");
  const Names& x = f.system.coordinates;
  const std::size_t n = f.system.dim();
  std::vector<CheckResult> out;
  auto push = [&](const std::string& name, bool ok, std::string residual = {}) {
    out.push_back({name, ok ? S::pass : S::fail, ok ? std::string() : std::move(residual)});
  };
  if (!d.rep) {
    out.push_back({"expected-values", S::skipped, "derivation did not reach the assemble stage"});
    return out;
  }
  const LagrangianRep& rep = *d.rep;

  Tensor g = Tensor::from_matrix(function_matrix_from_json(e.at("G"), x));
  push("expected-G", g == rep.G, "G differs from the stored metric");
  RatFn det = parse_ratfn(e.at("det_G").get<std::string>(), x);
  push("expected-det-G", rep.G.to_matrix().determinant() == det, "det G differs");

  bool l_ok = true;
  std::string l_res;
  const Json& lj = e.at("L");
  for (std::size_t a = 0; a < n && l_ok; ++a)
    for (std::size_t s = 0; s < n && l_ok; ++s)
      for (std::size_t m = 0; m < n && l_ok; ++m)
        if (!(rep.L(a, s, m) == parse_ratfn(lj[a][s][m].get<std::string>(), x))) {
          l_ok = false;
          l_res = "L(" + std::to_string(a + 1) + "," + std::to_string(s + 1) + "," +
                  std::to_string(m + 1) + ") = " + to_string(rep.L(a, s, m), x);
        }
  push("expected-L", l_ok, l_res);

  Tensor r0 = Tensor::from_matrix(function_matrix_from_json(e.at("R0"), x));
  push("expected-R0-gauge", exterior_derivative2(rep.R - r0).is_zero() && verify_R(r0, rep.T),
       "R - R0 is not closed");
  return out;
}

}  // namespace lagrep
