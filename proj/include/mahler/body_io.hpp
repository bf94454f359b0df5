#pragma once

// JSON body files and the builtin shorthand bodies. Two accepted layouts:
//   {"n": 2, "vertices": [[x, y], ...]}
//   {"n": 2, "halfspaces": [{"a": [...], "b": 1.0}, ...], "witness": [...]}
// Anything malformed raises IoError; geometry problems (degenerate hull,
// unbounded region) keep their usual error types.

#include <nlohmann/json.hpp>

#include <string>

#include "mahler/polytope.hpp"

namespace mahler {

Polytope body_from_json(const nlohmann::json& j);
nlohmann::json body_to_json(const Polytope& p);  // vertex layout

Polytope load_body(const std::string& path);
void save_body(const std::string& path, const Polytope& p);

// "simplex:n" (regular, centered) or "cube:n" ([-1,1]^n), n between 2 and 6.
Polytope builtin_body(const std::string& spec);

Vec vec_from_json(const nlohmann::json& j, int expect_size = -1);

}  // namespace mahler
