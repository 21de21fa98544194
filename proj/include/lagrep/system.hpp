#pragma once

#include <optional>
#include <string>

#include "lagrep/diffop.hpp"
#include "lagrep/io.hpp"

namespace lagrep {

/// Bi-Hamiltonian pair in flat coordinates of the first operator:
/// A1 = K D_x with constant symmetric K, and a third-order operator A2.
struct BiHamiltonianSystem {
  std::string name;
  Names coordinates;
  QMatrix K;
  QMatrix M;  // inverse of K
  OperatorMatrix A2;
  int jet_bound = kDefaultJetBound;

  // Optional original chart and the data expressed there.
  std::optional<Names> source_coordinates;
  std::optional<PointTransform> transform;
  std::optional<OperatorMatrix> A1_source;
  std::optional<OperatorMatrix> A2_source;
  /// Hamiltonian density of the initial flow u_t = K D_x euler(h).
  std::optional<DiffPoly> h;

  std::size_t dim() const { return coordinates.size(); }
  OperatorMatrix A1() const { return OperatorMatrix::constant(K, 1, jet_bound); }
};

/// Builds a system from JSON. Keys: "coordinates", "K", "A2" (operator JSON
/// in either the flat or the source chart), optional "source_coordinates",
/// "transform": {"inverse": {a: "<expr in u>"}, "forward": {u: "<expr in a>"}},
/// "A1" (source chart), "h". A2 given in the source chart is transformed.
/// Throws InputError on malformed data (non-symmetric or singular K, ...).
BiHamiltonianSystem load_system(const Json& j, int jet_bound = kDefaultJetBound);

/// Parses the transform block against the given charts.
PointTransform transform_from_json(const Json& j, const Names& source, const Names& target);

}  // namespace lagrep
