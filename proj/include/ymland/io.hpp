#pragma once

// JSON schemas for boundary specs and structured CLI output.
//
// Boundary-spec file layout (schema_version 1):
// {
//   "schema_version": 1,
//   "base": [ [ [ {"mono":[e1,e2,e3,e4], "coef": r}, ... ] x4 components ] x3 Lie components ],
//   "A": [[3x3]]
// }
// Harmonicity of the base is validated on load.

#include "ymland/boundary.hpp"
#include "ymland/core.hpp"

#include <string>

namespace ymland {

inline constexpr int kSchemaVersion = 1;

std::string boundary_spec_to_json(const BoundarySpec& spec, int indent = 2);
BoundarySpec boundary_spec_from_json(const std::string& text);

BoundarySpec load_boundary_spec(const std::string& path);
void save_boundary_spec(const BoundarySpec& spec, const std::string& path);

/// Parses "diag:a,b,c" or nine whitespace/comma-separated reals (row major).
Mat3 parse_matrix3(const std::string& text);

/// Parses four comma-separated reals.
Vec4 parse_vec4(const std::string& text);

}  // namespace ymland
