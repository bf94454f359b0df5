#include "mahler/body_io.hpp"

#include <fstream>

#include "mahler/errors.hpp"
#include "mahler/simplex_flags.hpp"

namespace mahler {

Vec vec_from_json(const nlohmann::json& j, int expect_size) {
  if (!j.is_array()) throw IoError("expected a JSON array of numbers");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw IoError("expected a JSON array of numbers");
    v[i] = j[i].get<double>();
  }
  if (expect_size >= 0 && v.size() != expect_size)
    throw IoError("vector has " + std::to_string(v.size()) +
                  " entries, expected " + std::to_string(expect_size));
  return v;
}

Polytope body_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError("body JSON must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw IoError("body JSON needs an integer field 'n'");
  const int n = j["n"].get<int>();
  if (n < 1 || n > 6) throw IoError("body dimension must be between 1 and 6");

  if (j.contains("vertices")) {
    if (!j["vertices"].is_array() || j["vertices"].empty())
      throw IoError("'vertices' must be a nonempty array");
    std::vector<Vec> pts;
    for (const auto& row : j["vertices"]) pts.push_back(vec_from_json(row, n));
    return convex_hull(pts);
  }
  if (j.contains("halfspaces")) {
    if (!j["halfspaces"].is_array() || j["halfspaces"].empty())
      throw IoError("'halfspaces' must be a nonempty array");
    std::vector<Halfspace> hs;
    for (const auto& row : j["halfspaces"]) {
      if (!row.is_object() || !row.contains("a") || !row.contains("b") ||
          !row["b"].is_number())
        throw IoError("each halfspace needs fields 'a' (array) and 'b'");
      hs.push_back({vec_from_json(row["a"], n), row["b"].get<double>()});
    }
    if (!j.contains("witness"))
      throw IoError("halfspace bodies need an interior 'witness' point");
    return halfspace_intersection(hs, vec_from_json(j["witness"], n));
  }
  throw IoError("body JSON needs either 'vertices' or 'halfspaces'");
}

nlohmann::json body_to_json(const Polytope& p) {
  nlohmann::json j;
  j["n"] = p.dim();
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : p.vertices()) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) row.push_back(v[i]);
    verts.push_back(row);
  }
  j["vertices"] = verts;
  return j;
}

Polytope load_body(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("parse error in '" + path + "': " + e.what());
  }
  return body_from_json(j);
}

void save_body(const std::string& path, const Polytope& p) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << body_to_json(p).dump(2) << '\n';
  if (!f) throw IoError("write failed on '" + path + "'");
}

Polytope builtin_body(const std::string& spec) {
  const size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw IoError("builtin spec must look like 'simplex:3' or 'cube:3'");
  const std::string name = spec.substr(0, colon);
  int n = 0;
  try {
    size_t used = 0;
    n = std::stoi(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw IoError("bad dimension in builtin spec '" + spec + "'");
  }
  if (n < 2 || n > 6)
    throw IoError("builtin dimension must be between 2 and 6");

  if (name == "simplex") return build_regular_simplex(n).poly;
  if (name == "cube") {
    std::vector<Halfspace> hs;
    for (int i = 0; i < n; ++i) {
      Vec a = Vec::Zero(n);
      a[i] = 1.0;
      hs.push_back({a, 1.0});
      hs.push_back({-a, 1.0});
    }
    return halfspace_intersection(hs, Vec::Zero(n));
  }
  throw IoError("unknown builtin '" + name + "' (simplex or cube)");
}

}  // namespace mahler
