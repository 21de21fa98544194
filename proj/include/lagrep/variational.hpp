#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "lagrep/diffop.hpp"
#include "lagrep/expr.hpp"
#include "lagrep/jet.hpp"

namespace lagrep {

/// Linearization: entry (k,i) = sum_sigma (dF^k/du^i_sigma) D_x^sigma.
OperatorMatrix frechet(const std::vector<DiffPoly>& f);
inline OperatorMatrix frechet(const Covector& f) { return frechet(f.components()); }
inline OperatorMatrix frechet(const EvolutionField& f) { return frechet(f.components()); }

/// True iff frechet(psi) is self-adjoint, i.e. psi is locally an Euler-Lagrange expression.
bool helmholtz_symmetric(const Covector& psi);

/// The symplectic operator carried by a potential psi, written in flat
/// u-coordinates: l_psi o D_x + D_x o l_psi^*. This is the u-image of
/// l_psi - l_psi^* in potential variables phi (u = phi_x).
OperatorMatrix presentation_operator(const Covector& psi);
bool presentation_check(const OperatorMatrix& b, const Covector& psi);

/// Coefficients of A differentiated along the evolutionary field tau.
OperatorMatrix directional_derivative(const OperatorMatrix& a, const EvolutionField& tau);

/// L_tau A = D_tau(A) - l_tau o A - A o l_tau^*.
OperatorMatrix lie_derivative(const OperatorMatrix& a, const EvolutionField& tau);

inline bool skew_adjoint_check(const OperatorMatrix& a) { return is_skew_adjoint(a); }

/// Covector basis plus index triples into it.
struct CovectorTriples {
  std::vector<Covector> basis;
  std::vector<std::string> labels;
  std::vector<std::array<std::size_t, 3>> triples;
};

/// Every covector with a single entry u^i_sigma (sigma <= max_order) in one
/// component, and all triples of distinct basis elements. Since the Jacobi
/// trivector is totally skew, unordered triples cover all orderings.
CovectorTriples monomial_triples(const Names& names, std::uint32_t max_order,
                                 int jet_bound = kDefaultJetBound);

struct TripleFailure {
  std::array<std::size_t, 3> triple;
  std::string description;
};

struct EvidenceReport {
  std::size_t checked = 0;
  std::size_t failed = 0;
  /// First few failures, in input order.
  std::vector<TripleFailure> failures;
  bool pass() const { return failed == 0; }
};

/// For each triple, tests whether sum_cyc <psi1, D_{A psi3}(A)(psi2)> is a total
/// divergence. All passing is evidence (not proof) of the Jacobi identity.
/// The jet bound is widened internally to what the densities need.
EvidenceReport jacobi_evidence(const OperatorMatrix& a, const CovectorTriples& t);
/// As above with the polarized density
/// sum_cyc <psi1, D_{A psi3}(B)(psi2) + D_{B psi3}(A)(psi2)>.
EvidenceReport compatibility_evidence(const OperatorMatrix& a, const OperatorMatrix& b,
                                      const CovectorTriples& t);

}  // namespace lagrep
