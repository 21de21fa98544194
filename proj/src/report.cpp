#include "lagrep/report.hpp"

#include "lagrep/geometry.hpp"
#include "lagrep/pipeline.hpp"
#include "lagrep/variational.hpp"
#include "lagrep/wdvv.hpp"

namespace lagrep {

namespace {

Json header(const std::string& command, const Json& input) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["system"] = input.value("name", std::string("input"));
  return j;
}

Json check_json(const CheckResult& r) {
  const char* s = r.status == CheckResult::Status::pass   ? "pass"
                  : r.status == CheckResult::Status::fail ? "fail"
                                                          : "skipped";
  return Json{{"name", r.name}, {"status", s}, {"residual", r.residual}};
}

std::string mark(bool ok) { return ok ? "  ok    " : "  FAIL  "; }

Names names_of(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InputError(std::string("input lacks \"") + key + "\"");
  return j.at(key).get<Names>();
}

RSolverOptions solver_options(const ReportOptions& o, const BiHamiltonianSystem& sys) {
  RSolverOptions s;
  s.denominator_degree = o.rden_bound;
  if (o.r_candidate) {
    FMatrix m = function_matrix_from_json(*o.r_candidate, sys.coordinates);
    if (m.rows() != sys.dim()) throw InputError("R candidate has the wrong size");
    s.candidate = Tensor::from_matrix(m);
  }
  return s;
}

Json artifacts(const LagrangianRep& rep, const Names& x) {
  Json a;
  a["G"] = to_json(rep.G, x);
  a["R"] = to_json(rep.R, x);
  a["L"] = to_json(rep.L, x);
  a["T"] = to_json(rep.T, x);
  a["Ln"] = to_json(rep.Ln.components(), x);
  a["tau"] = to_json(rep.tau.components(), x);
  return a;
}

Json evidence_json(const EvidenceReport& e) {
  Json f = Json::array();
  for (const auto& x : e.failures) f.push_back(x.description);
  return Json{{"checked", e.checked}, {"failed", e.failed}, {"failures", f}};
}

std::string stop_reason(const Derivation& d) {
  return "derivation stopped at " + d.stages.back().stage + ": " + d.stages.back().detail;
}

}  // namespace

Report transform_report(const Json& j, const ReportOptions& o) {
  const Names src = names_of(j, "source_coordinates");
  const Names tgt = names_of(j, "coordinates");
  if (!j.contains("transform")) throw InputError("input lacks \"transform\"");
  PointTransform t = transform_from_json(j.at("transform"), src, tgt);

  std::string which = o.op.empty() ? "A2" : o.op;
  const Json* opj = nullptr;
  if (j.contains("operator")) {
    opj = &j.at("operator");
    which = "operator";
  } else {
    if (which != "A1" && which != "A2") throw InputError("--operator must be A1 or A2");
    if (!j.contains(which)) throw InputError("input lacks \"" + which + "\"");
    opj = &j.at(which);
  }
  NamedOperator a = operator_from_json(*opj, o.jet_bound);
  if (a.coordinates != src) throw InputError("operator is not written in the source coordinates");
  OperatorMatrix u = change_coordinates(a.op, t);

  Report r;
  r.json = header("transform", j);
  r.json["operator_name"] = which;
  r.json["pass"] = r.pass = true;
  r.json["operator"] = operator_to_json(u, tgt);
  const std::uint32_t order = u.order();
  if (is_homogeneous(u, order)) {
    HomogeneousTensors ht = leading_and_lower(u, order);
    r.json["leading_metric"] = to_json(ht.g, tgt);
    r.summary.push_back("transform: " + which + " is homogeneous of order " + std::to_string(order) +
                        "; leading metric:");
    for (std::size_t i = 0; i < u.dim(); ++i)
      for (std::size_t k = 0; k < u.dim(); ++k)
        r.summary.push_back("  g(" + std::to_string(i + 1) + "," + std::to_string(k + 1) +
                            ") = " + to_string(ht.g(i, k), tgt));
  } else {
    r.summary.push_back("transform: " + which + " is not homogeneous");
  }
  return r;
}

Report derive_report(const Json& j, const ReportOptions& o) {
  BiHamiltonianSystem sys = load_system(j, o.jet_bound);
  Derivation d = derive(sys, solver_options(o, sys));

  Report r;
  r.json = header("derive", j);
  const StageResult& last = d.stages.back();
  r.json["stage"] = last.stage;
  r.json["pass"] = d.pass();
  r.json["residual"] = d.pass() ? "" : last.detail;
  Json stages = Json::array();
  for (const auto& s : d.stages) {
    stages.push_back({{"stage", s.stage}, {"pass", s.pass}, {"detail", s.detail}});
    r.summary.push_back(mark(s.pass) + s.stage + (s.detail.empty() ? "" : ": " + s.detail));
  }
  r.json["stages"] = stages;
  if (d.r_solution) r.json["r_solver"] = {{"method", d.r_solution->method}, {"log", d.r_solution->log}};
  if (d.certification) {
    Json certs = Json::array();
    for (const auto& ch : d.certification->checks) certs.push_back(check_json(ch));
    r.json["certification"] = certs;
  }
  if (d.rep) r.json["artifacts"] = artifacts(*d.rep, sys.coordinates);

  bool expected_ok = true;
  if (o.compare_expected && j.contains("expected") && d.rep && sys.source_coordinates) {
    WdvvFixture f{j, sys, *sys.source_coordinates};
    Json ex = Json::array();
    for (const auto& ch : compare_with_expected(f, d)) {
      ex.push_back(check_json(ch));
      expected_ok = expected_ok && ch.ok();
      r.summary.push_back(mark(ch.ok()) + ch.name + (ch.residual.empty() ? "" : ": " + ch.residual));
    }
    r.json["expected"] = ex;
  }
  r.pass = d.pass() && expected_ok;
  r.summary.push_back("derive: " + sys.name + (r.pass ? " certified" : " failed at " + last.stage));
  return r;
}

namespace {

struct OperatorSet {
  Names names;
  std::vector<std::pair<std::string, OperatorMatrix>> ops;
};

OperatorSet operators_for_check(const Json& j, const ReportOptions& o) {
  OperatorSet s;
  if (j.contains("entries")) {
    NamedOperator a = operator_from_json(j, o.jet_bound);
    s.names = a.coordinates;
    s.ops.push_back({"operator", a.op});
    return s;
  }
  BiHamiltonianSystem sys = load_system(j, o.jet_bound);
  // Use the chart the operators were written in.
  const bool source = sys.A1_source && sys.A2_source;
  s.names = source ? *sys.source_coordinates : sys.coordinates;
  const OperatorMatrix a1 = source ? *sys.A1_source : sys.A1();
  const OperatorMatrix a2 = source ? *sys.A2_source : sys.A2;
  if (o.op.empty() || o.op == "A1") s.ops.push_back({"A1", a1});
  if (o.op.empty() || o.op == "A2") s.ops.push_back({"A2", a2});
  if (s.ops.empty()) throw InputError("--operator must be A1 or A2");
  return s;
}

}  // namespace

Report check_report(const Json& j, const ReportOptions& o) {
  OperatorSet set = operators_for_check(j, o);
  Report r;
  r.json = header("check", j);
  r.json["coordinates"] = set.names;
  r.json["triple_order"] = o.triple_order;
  CovectorTriples triples = monomial_triples(set.names, o.triple_order, o.jet_bound);
  bool all = true;
  Json ops = Json::array();
  std::size_t hamiltonian = 0;
  for (const auto& [name, op] : set.ops) {
    Json e;
    e["operator"] = name;
    const std::string skew = skew_adjoint_residual(op, set.names);
    const bool homog = is_homogeneous(op, op.order());
    e["skew_adjoint"] = skew.empty();
    e["residual"] = skew;
    e["homogeneous_order"] = homog ? Json(op.order()) : Json(nullptr);
    bool pass = skew.empty();
    r.summary.push_back(name + ": skew-adjoint " + (skew.empty() ? "yes" : "NO (" + skew + ")") +
                        (homog ? "; homogeneous of order " + std::to_string(op.order()) : "; not homogeneous"));
    if (pass) {
      EvidenceReport ev = jacobi_evidence(op, triples);
      e["jacobi"] = evidence_json(ev);
      pass = ev.pass();
      hamiltonian += pass ? 1 : 0;
      r.summary.push_back(name + ": Jacobi evidence " + std::to_string(ev.checked - ev.failed) + "/" +
                          std::to_string(ev.checked) + " triples pass");
    }
    e["pass"] = pass;
    all = all && pass;
    ops.push_back(e);
  }
  r.json["operators"] = ops;
  if (set.ops.size() == 2 && hamiltonian == 2) {
    EvidenceReport ev = compatibility_evidence(set.ops[0].second, set.ops[1].second, triples);
    r.json["compatibility"] = evidence_json(ev);
    all = all && ev.pass();
    r.summary.push_back("compatibility evidence " + std::to_string(ev.checked - ev.failed) + "/" +
                        std::to_string(ev.checked) + " triples pass");
  }
  r.json["pass"] = r.pass = all;
  return r;
}

Report curvature_report(const Json& j, const ReportOptions& o) {
  BiHamiltonianSystem sys = load_system(j, o.jet_bound);
  const FMatrix G = symplectic_operator(sys).G.to_matrix();
  CurvatureReport cr = constant_curvature_test(G, sys.coordinates);
  if (o.point.size() != sys.dim())
    throw InputError("the signature point needs " + std::to_string(sys.dim()) + " coordinates");
  std::vector<Rational> point;
  std::string where;
  for (const auto& p : o.point) {
    point.push_back(parse_rational(p));
    where += (where.empty() ? "" : ",") + p;
  }
  Signature sg = signature_at(G, point);

  Report r;
  r.json = header("curvature", j);
  r.json["G"] = to_json(G, sys.coordinates);
  r.json["det_G"] = to_string(G.determinant(), sys.coordinates);
  r.json["constant_curvature"] = cr.kappa.has_value();
  r.json["kappa"] = cr.kappa ? Json(to_string(*cr.kappa)) : Json(nullptr);
  r.json["residual"] = cr.residual;
  r.json["riemann_symmetries"] = cr.symmetries;
  r.json["bianchi"] = cr.bianchi;
  r.json["signature_point"] = o.point;
  r.json["signature"] = {sg.positive, sg.negative};
  r.pass = cr.kappa && cr.symmetries && cr.bianchi;
  r.json["pass"] = r.pass;
  r.summary.push_back("curvature: " + (cr.kappa ? "constant, kappa = " + to_string(*cr.kappa)
                                                 : "not constant (" + cr.residual + ")"));
  r.summary.push_back(std::string("curvature: symmetries ") + (cr.symmetries ? "hold" : "FAIL") + ", Bianchi " +
                      (cr.bianchi ? "holds" : "FAILS") + ", signature (" + std::to_string(sg.positive) + "," +
                      std::to_string(sg.negative) + ") at (" + where + ")");
  return r;
}

Report recursion_report(const Json& j, const ReportOptions& o) {
  BiHamiltonianSystem sys = load_system(j, o.jet_bound);
  const Names& x = sys.coordinates;
  Report r;
  r.json = header("recursion", j);
  try {
    if (!o.density.empty()) {
      const DiffPoly h = parse_diffpoly(o.density, x, o.jet_bound);
      DiffPoly next = recursion_step(sys, h);
      r.json["density"] = to_string(h, x);
      r.json["next_density"] = to_string(next, x);
      r.json["fingerprint"] = to_json(euler(next).components(), x);
      r.json["pass"] = r.pass = true;
      r.json["residual"] = "";
      r.summary.push_back("recursion: h' = " + to_string(next, x));
      return r;
    }
    // From the Casimirs u^k of K D_x the first step must give K^{km} L_m.
    Derivation d = derive(sys, solver_options(o, sys));
    if (!d.rep) throw MathError(stop_reason(d));
    Json steps = Json::array();
    bool all = true;
    for (std::size_t k = 0; k < sys.dim(); ++k) {
      DiffPoly next = recursion_step(sys, DiffPoly::base(sys.dim(), k, o.jet_bound));
      DiffPoly klm(sys.dim(), next.jet_bound());
      for (std::size_t m = 0; m < sys.dim(); ++m)
        klm += d.rep->Ln[m].with_jet_bound(next.jet_bound()) * sys.K(k, m);
      const Covector fp = euler(next);
      const bool same = fp == euler(klm);
      all = all && same;
      steps.push_back({{"density", x[k]},
                       {"next_density", to_string(next, x)},
                       {"fingerprint", to_json(fp.components(), x)},
                       {"matches_KL", same}});
      r.summary.push_back("recursion: from " + x[k] + (same ? " matches" : " DIFFERS from") + " K^{km} L_m");
    }
    r.json["steps"] = steps;
    r.json["pass"] = r.pass = all;
    r.json["residual"] = all ? "" : "fingerprint differs from K^{km} L_m";
    return r;
  } catch (const NotDivergenceError& e) {
    r.json["residual"] = e.what();
  } catch (const NotVariationalError& e) {
    r.json["residual"] = e.what();
  }
  r.json["pass"] = false;
  r.summary.push_back("recursion: " + r.json["residual"].get<std::string>());
  return r;
}

Report conservation_report(const Json& j, const ReportOptions& o) {
  BiHamiltonianSystem sys = load_system(j, o.jet_bound);
  const Names& x = sys.coordinates;
  if (o.density.empty() && !sys.h) throw InputError("no density: pass one or give \"h\" in the input");
  const int wide = std::max(o.jet_bound, 12);
  const DiffPoly h = o.density.empty() ? sys.h->with_jet_bound(wide) : parse_diffpoly(o.density, x, wide);
  Derivation d = derive(sys, solver_options(o, sys));

  Report r;
  r.json = header("conservation", j);
  r.json["density"] = to_string(h, x);
  if (!d.rep) {
    r.json["pass"] = false;
    r.json["residual"] = stop_reason(d);
    r.summary.push_back("conservation: " + stop_reason(d));
    return r;
  }
  EvolutionField flow = hamiltonian_flow(sys, h);
  Json items = Json::array();
  bool all = true;
  for (std::size_t n = 0; n < sys.dim(); ++n) {
    const bool cons = is_total_divergence(time_derivative(d.rep->Ln[n].with_jet_bound(wide), flow));
    all = all && cons;
    items.push_back({{"density", "L" + std::to_string(n + 1)}, {"conserved", cons}});
    r.summary.push_back("conservation: L" + std::to_string(n + 1) + (cons ? " conserved" : " NOT conserved"));
  }
  DiffPoly ul(sys.dim(), sys.jet_bound);
  for (std::size_t i = 0; i < sys.dim(); ++i) ul += DiffPoly::base(sys.dim(), i, sys.jet_bound) * d.rep->Ln[i];
  const bool trivial = is_total_divergence(ul);
  r.summary.push_back(std::string("conservation: u^i L_i is ") +
                      (trivial ? "a total divergence" : "not a total divergence"));
  r.json["densities"] = items;
  r.json["uL_total_divergence"] = trivial;
  r.json["pass"] = r.pass = all;
  r.json["residual"] = all ? "" : "a density is not conserved";
  return r;
}

}  // namespace lagrep
