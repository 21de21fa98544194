#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lagrep/system.hpp"
#include "lagrep/tensor.hpp"
#include "lagrep/variational.hpp"

namespace lagrep {

/// The extracted lower-order tensors violate the degree-2 ansatz for L_n.
struct AnsatzError : MathError {
  using MathError::MathError;
};

/// dR = T has no solution in the searched basis and no valid candidate was given.
struct NoSolutionError : MathError {
  using MathError::MathError;
};

/// B = -M A2 M together with its leading coefficient G.
struct SymplecticData {
  OperatorMatrix B;
  Tensor G;
};
SymplecticData symplectic_operator(const BiHamiltonianSystem& sys);

/// G_{kn} = M g^{sp} M; L_{npm} from the u^m_xxx terms; F_{pmn} from the
/// u^m_xx part of the D_x coefficient. Throws AnsatzError when L_{npm} is
/// not symmetric in its last two indices.
struct StructureTensors {
  Tensor G;  // G(p, n)
  Tensor L;  // L(n, s, m), symmetric in (s, m)
  Tensor F;  // F(p, m, n)
};
StructureTensors extract_GLF(const BiHamiltonianSystem& sys);

/// T_{pmn} = F_{pmn} - 1/2 (G_{pm,n} + G_{np,m} - G_{nm,p} + 4 L_{npm}).
struct Obstruction {
  Tensor T;
  bool skew = false;
  /// dT = 0 (only meaningful when skew).
  bool closed = false;
  Tensor dT;
};
Obstruction obstruction_T(const Tensor& G, const Tensor& L, const Tensor& F);

/// Exterior derivative of a 2-form: (dR)_{pmn} = R_{pm,n} + R_{mn,p} + R_{np,m}.
Tensor exterior_derivative2(const Tensor& R);
/// Exterior derivative of a 1-form: (d theta)_{pm} = theta_{m,p} - theta_{p,m}.
Tensor exterior_derivative1(const std::vector<RatFn>& theta);

struct RSolverOptions {
  /// Maximum power of each pairwise-difference factor in the denominator basis.
  unsigned denominator_degree = 2;
  /// Checked when the built-in strategies fail.
  std::optional<Tensor> candidate;
};

struct RSolution {
  Tensor R;
  /// "zero", "symmetric-ansatz", "undetermined-coefficients" or "candidate".
  std::string method;
  /// One line per strategy attempted.
  std::vector<std::string> log;
};
/// Returns a skew R with dR = T, always verified exactly before returning.
RSolution solve_R(const Tensor& T, const RSolverOptions& opts = {});
bool verify_R(const Tensor& R, const Tensor& T);

/// L_n = (1/2 G_{nm} u^m_x + R_{nm} u^m_x)_x - 1/2 L_{nsm} u^s_x u^m_x.
Covector assemble_Ln(const Tensor& G, const Tensor& R, const Tensor& L,
                     int jet_bound = kDefaultJetBound);

/// F_{pmn} rebuilt from (G, R, L).
Tensor structure_F(const Tensor& G, const Tensor& R, const Tensor& L);
/// The operator of the structure formula in terms of (G, R, L).
OperatorMatrix reconstruct_A2(const QMatrix& K, const Tensor& G, const Tensor& R, const Tensor& L,
                              int jet_bound = kDefaultJetBound);
/// Generic third-order expansion from any L_n of order <= 2.
OperatorMatrix expand_A2(const QMatrix& K, const Covector& Ln);
/// A2 = -K (l_psi o D_x + D_x o l_psi^*) K for psi = -(L_n).
OperatorMatrix A2_from_potential(const QMatrix& K, const Covector& Ln);

struct LagrangianRep {
  Tensor G, R, L, F, T;
  Covector Ln;
  EvolutionField tau;
};
/// tau^i = -K^{in} L_n.
EvolutionField tau_field(const QMatrix& K, const Covector& Ln);
LagrangianRep make_rep(const BiHamiltonianSystem& sys, const StructureTensors& s,
                       const Obstruction& ob, const Tensor& R);

/// Outcome of a single exact check.
struct CheckResult {
  std::string name;
  enum class Status { pass, fail, skipped } status = Status::skipped;
  /// First nonzero residual, printed canonically; empty on pass.
  std::string residual;
  bool ok() const { return status != Status::fail; }
};

struct CertificationReport {
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.ok()) return false;
    return true;
  }
};

/// (a) lie_derivative(K D_x, tau) = A2; (b) presentation of B by -(L_n);
/// (c) each L_n conserved by the flow of h (skipped without h); (d) the
/// recursion from the Casimirs u^k reproduces K^{km} L_m.
CertificationReport certify(const BiHamiltonianSystem& sys, const LagrangianRep& rep);

/// Flow u_t = K D_x euler(h).
EvolutionField hamiltonian_flow(const BiHamiltonianSystem& sys, const DiffPoly& h);
/// D_t f along an evolutionary flow (t-jets eliminated through the flow).
DiffPoly time_derivative(const DiffPoly& f, const EvolutionField& flow);
/// Components of D_X Y - D_Y X.
EvolutionField flow_commutator(const EvolutionField& x, const EvolutionField& y);

/// h_{k+1} from h_k: the density whose K D_x-flow equals the A2-flow of h_k.
/// Throws NotDivergenceError / NotVariationalError naming the failing step.
DiffPoly recursion_step(const BiHamiltonianSystem& sys, const DiffPoly& h);

/// One named stage of the full derivation.
struct StageResult {
  std::string stage;
  bool pass = false;
  std::string detail;
};

struct Derivation {
  std::vector<StageResult> stages;
  std::optional<LagrangianRep> rep;
  std::optional<CertificationReport> certification;
  std::optional<RSolution> r_solution;
  std::optional<OperatorMatrix> reconstructed;
  bool pass() const {
    for (const auto& s : stages)
      if (!s.pass) return false;
    return !stages.empty();
  }
};

/// Runs symplectic_operator -> extract_GLF -> obstruction_T -> solve_R ->
/// assemble_Ln -> reconstruct_A2 -> certify, stopping at the first failing
/// stage. Input invariants (skew-adjointness, homogeneity) are checked first.
Derivation derive(const BiHamiltonianSystem& sys, const RSolverOptions& opts = {});

/// Names the first entry (i,j) with adjoint(A) + A != 0, or empty.
std::string skew_adjoint_residual(const OperatorMatrix& a, const Names& names);
/// Names the first entry where the operators differ, or empty.
std::string operator_difference(const OperatorMatrix& a, const OperatorMatrix& b,
                                const Names& names);

}  // namespace lagrep
