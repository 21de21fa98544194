#include "lagrep/io.hpp"

#include <fstream>
#include <set>

namespace lagrep {

namespace {

std::string entry_label(std::size_t i, std::size_t j) {
  return "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

std::string expect_string(const Json& j, const std::string& what) {
  if (!j.is_string()) throw InputError(what + ": expected an expression string");
  return j.get<std::string>();
}

Json tensor_level(const Tensor& t, const Names& names, std::vector<std::size_t>& idx) {
  if (idx.size() == t.rank()) return to_string(t.at(idx), names);
  Json arr = Json::array();
  for (std::size_t k = 0; k < t.dim(); ++k) {
    idx.push_back(k);
    arr.push_back(tensor_level(t, names, idx));
    idx.pop_back();
  }
  return arr;
}

}  // namespace

NamedOperator operator_from_json(const Json& j, int jet_bound) {
  if (!j.is_object() || !j.contains("coordinates") || !j.contains("entries")) {
    throw InputError("operator JSON needs \"coordinates\" and \"entries\"");
  }
  NamedOperator out;
  for (const auto& c : j.at("coordinates")) out.coordinates.push_back(expect_string(c, "coordinates"));
  const std::size_t n = out.coordinates.size();
  if (n == 0) throw InputError("operator has no coordinates");
  std::set<std::string> unique(out.coordinates.begin(), out.coordinates.end());
  if (unique.size() != n) throw InputError("duplicate coordinate names");
  const Json& rows = j.at("entries");
  if (!rows.is_array() || rows.size() != n) throw InputError("\"entries\" must be an n x n array");
  out.op = OperatorMatrix(n, n, jet_bound);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) {
      throw InputError("row " + std::to_string(i + 1) + " of \"entries\" must have length n");
    }
    for (std::size_t k = 0; k < n; ++k) {
      const Json& terms = rows[i][k];
      if (!terms.is_array()) throw InputError(entry_label(i, k) + " must be a list of terms");
      for (const auto& t : terms) {
        if (!t.is_object() || !t.contains("coeff") || !t.contains("dx")) {
          throw InputError(entry_label(i, k) + ": terms are {\"coeff\": ..., \"dx\": k}");
        }
        const Json& dxj = t.at("dx");
        if (!dxj.is_number_integer() || dxj.get<long>() < 0) {
          throw InputError(entry_label(i, k) + ": \"dx\" must be a non-negative integer");
        }
        DiffPoly c;
        try {
          c = parse_diffpoly(expect_string(t.at("coeff"), entry_label(i, k)), out.coordinates,
                             jet_bound);
        } catch (const BoundError&) {
          throw;
        } catch (const Error& e) {
          throw InputError(entry_label(i, k) + ": " + e.what());
        }
        out.op(i, k).add(static_cast<std::uint32_t>(dxj.get<long>()), c);
      }
    }
  }
  return out;
}

Json operator_to_json(const OperatorMatrix& p, const Names& names) {
  Json j;
  j["coordinates"] = names;
  Json rows = Json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < p.dim(); ++k) {
      Json terms = Json::array();
      const auto& cs = p(i, k).coefficients();
      for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
        terms.push_back({{"coeff", to_string(it->second, names)}, {"dx", it->first}});
      }
      row.push_back(std::move(terms));
    }
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

std::string to_string(const DiffOp& p, const Names& names) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& cs = p.coefficients();
  for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(it->second, names) + ")";
    if (it->first == 1) out += "*D";
    else if (it->first > 1) out += "*D^" + std::to_string(it->first);
  }
  return out;
}

QMatrix rational_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const std::size_t n = j.size();
  QMatrix m(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw InputError("matrix must be square");
    for (std::size_t k = 0; k < n; ++k) {
      const Json& e = j[i][k];
      if (e.is_number_integer()) {
        m(i, k) = Rational(e.get<long>());
      } else {
        m(i, k) = parse_rational(expect_string(e, "matrix entry"));
      }
    }
  }
  return m;
}

Json to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

FMatrix function_matrix_from_json(const Json& j, const Names& names) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const std::size_t n = j.size();
  FMatrix m(n, n, RatFn(names.size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw InputError("matrix must be square");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = parse_ratfn(expect_string(j[i][k], "matrix entry"), names);
  }
  return m;
}

Json to_json(const FMatrix& m, const Names& names) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k), names));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Tensor& t, const Names& names) {
  std::vector<std::size_t> idx;
  return tensor_level(t, names, idx);
}

Json to_json(const std::vector<DiffPoly>& v, const Names& names) {
  Json arr = Json::array();
  for (const auto& p : v) arr.push_back(to_string(p, names));
  return arr;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace lagrep
