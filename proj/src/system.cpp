#include "lagrep/system.hpp"

namespace lagrep {

namespace {

std::vector<RatFn> map_from_json(const Json& j, const Names& keys, const Names& vars,
                                 const std::string& what) {
  if (!j.is_object()) throw InputError(what + " must be an object keyed by coordinate name");
  std::vector<RatFn> out;
  for (const auto& k : keys) {
    if (!j.contains(k)) throw InputError(what + " lacks an expression for '" + k + "'");
    const Json& e = j.at(k);
    if (!e.is_string()) throw InputError(what + "['" + k + "'] must be a string");
    try {
      out.push_back(parse_ratfn(e.get<std::string>(), vars));
    } catch (const InputError& err) {
      throw InputError(what + "['" + k + "']: " + err.what());
    }
  }
  if (j.size() != keys.size()) throw InputError(what + " has unexpected extra keys");
  return out;
}

Names names_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array of names");
  Names n;
  for (const auto& x : j) {
    if (!x.is_string()) throw InputError(what + " must contain strings");
    n.push_back(x.get<std::string>());
  }
  return n;
}

}  // namespace

PointTransform transform_from_json(const Json& j, const Names& source, const Names& target) {
  if (!j.is_object() || !j.contains("inverse")) {
    throw InputError("transform needs an \"inverse\" map giving source coordinates in target ones");
  }
  std::vector<RatFn> inv = map_from_json(j.at("inverse"), source, target, "transform.inverse");
  std::optional<std::vector<RatFn>> fwd;
  if (j.contains("forward")) fwd = map_from_json(j.at("forward"), target, source, "transform.forward");
  return PointTransform(std::move(inv), std::move(fwd));
}

BiHamiltonianSystem load_system(const Json& j, int jet_bound) {
  if (!j.is_object()) throw InputError("system JSON must be an object");
  for (const char* key : {"coordinates", "K", "A2"}) {
    if (!j.contains(key)) throw InputError(std::string("system JSON lacks \"") + key + "\"");
  }
  BiHamiltonianSystem s;
  s.jet_bound = jet_bound;
  s.name = j.value("name", std::string("system"));
  s.coordinates = names_from_json(j.at("coordinates"), "coordinates");
  const std::size_t n = s.coordinates.size();
  s.K = rational_matrix_from_json(j.at("K"));
  if (s.K.rows() != n) throw InputError("K must be n x n");
  if (!s.K.is_symmetric()) throw InputError("K must be symmetric");
  auto m = s.K.inverse();
  if (!m) throw InputError("K is singular");
  s.M = *m;

  if (j.contains("source_coordinates")) {
    s.source_coordinates = names_from_json(j.at("source_coordinates"), "source_coordinates");
    if (s.source_coordinates->size() != n) throw InputError("source chart has the wrong dimension");
  }
  if (j.contains("transform")) {
    if (!s.source_coordinates) throw InputError("transform given without source_coordinates");
    s.transform = transform_from_json(j.at("transform"), *s.source_coordinates, s.coordinates);
  }

  NamedOperator a2 = operator_from_json(j.at("A2"), jet_bound);
  if (a2.coordinates == s.coordinates) {
    s.A2 = a2.op;
  } else if (s.source_coordinates && a2.coordinates == *s.source_coordinates) {
    if (!s.transform) throw InputError("A2 is given in the source chart but no transform is present");
    s.A2_source = a2.op;
    s.A2 = change_coordinates(a2.op, *s.transform);
  } else {
    throw InputError("A2 coordinates match neither the flat nor the source chart");
  }
  if (s.A2.dim() != n) throw InputError("A2 has the wrong dimension");

  if (j.contains("A1")) {
    NamedOperator a1 = operator_from_json(j.at("A1"), jet_bound);
    if (s.source_coordinates && a1.coordinates == *s.source_coordinates) {
      s.A1_source = a1.op;
    } else if (a1.coordinates == s.coordinates) {
      if (!(a1.op == s.A1())) throw InputError("A1 in flat coordinates must equal K D_x");
    } else {
      throw InputError("A1 coordinates match neither chart");
    }
  }
  if (j.contains("h")) {
    if (!j.at("h").is_string()) throw InputError("h must be an expression string");
    s.h = parse_diffpoly(j.at("h").get<std::string>(), s.coordinates, jet_bound);
  }
  return s;
}

}  // namespace lagrep
