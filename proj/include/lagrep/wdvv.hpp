#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lagrep/pipeline.hpp"
#include "lagrep/system.hpp"

namespace lagrep {

/// The built-in WDVV N=3 data set (compiled into the library).
std::string_view wdvv3_fixture_text();

struct WdvvFixture {
  Json data;
  BiHamiltonianSystem system;
  Names source;  // a, b, c
};

/// Parses the embedded data; throws InputError if it is malformed.
WdvvFixture load_wdvv3(int jet_bound = kDefaultJetBound);
/// Fixture JSON by name ("wdvv3"); InputError for unknown names.
Json fixture_json(const std::string& name);

struct LaxReport {
  bool pass = false;
  /// det(lambda I - X) in the source chart, X the x-part of the Lax pair
  /// without the spectral factor.
  std::string char_poly_source;
  /// The same after substituting the point transform.
  std::string char_poly_u;
};
/// Checks that the eigenvalues of the x-Lax matrix are the flat coordinates u^k.
LaxReport lax_eigenvalue_check(const WdvvFixture& f);

/// Pushes u_t = K D_x euler(h) through the transform and compares with the
/// source fluxes, and compares A1 euler(h) in both charts.
bool flux_check(const WdvvFixture& f);

/// Inverse of the leading matrix of A2 in the source chart equals the Monge metric.
bool monge_check(const WdvvFixture& f);

/// A2 = D_x (g D_x + c_k a^k_x) D_x in the source chart.
bool casimir_form_check(const WdvvFixture& f);

/// Compares a derivation with the stored expected tensors (G, det G, L with
/// the printed normalization, R up to a closed 2-form).
std::vector<CheckResult> compare_with_expected(const WdvvFixture& f, const Derivation& d);

}  // namespace lagrep
