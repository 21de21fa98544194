#pragma once

#include <string>

#include "json.hpp"
#include "lagrep/diffop.hpp"
#include "lagrep/expr.hpp"
#include "lagrep/linalg.hpp"
#include "lagrep/tensor.hpp"

namespace lagrep {

using Json = nlohmann::ordered_json;

/// Operator together with the names of its coordinates.
struct NamedOperator {
  Names coordinates;
  OperatorMatrix op;
};

/// Reads {"coordinates": [...], "entries": [[[{"coeff": "<expr>", "dx": k}, ...]]]}.
/// Errors are InputError naming the offending entry.
NamedOperator operator_from_json(const Json& j, int jet_bound = kDefaultJetBound);
/// Canonical form: terms within an entry sorted by descending power of D_x.
Json operator_to_json(const OperatorMatrix& p, const Names& names);
/// One entry as "(c3)*D^3 + (c1)*D + (c0)", highest power first; "0" when empty.
std::string to_string(const DiffOp& p, const Names& names);

QMatrix rational_matrix_from_json(const Json& j);
Json to_json(const QMatrix& m);
FMatrix function_matrix_from_json(const Json& j, const Names& names);
Json to_json(const FMatrix& m, const Names& names);
/// Nested arrays of canonical expression strings.
Json to_json(const Tensor& t, const Names& names);
Json to_json(const std::vector<DiffPoly>& v, const Names& names);

Json read_json_file(const std::string& path);

}  // namespace lagrep
