#pragma once

#include <map>
#include <string>

#include "sfrec/grid.hpp"
#include "sfrec/mesh.hpp"

namespace sfrec {

// Mesh files. Format chosen by extension: .obj, .stl (ASCII or binary
// auto-detected on read).
TriangleMesh load_mesh(const std::string& path);
void save_obj(const TriangleMesh& mesh, const std::string& path);
void save_stl(const TriangleMesh& mesh, const std::string& path, bool binary = true);

// Grid exchange: one-line JSON header ({resolution, origin, spacing, sign,
// dtype}) followed by resolution^3 little-endian float64 values, x-fastest.
void save_grid(const SignedDistanceGrid& grid, const std::string& path);
SignedDistanceGrid load_grid(const std::string& path);

// Flat "key = value" config text with '#' comments.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config(const std::string& path);
void save_config(const ConfigMap& config, const std::string& path);

}  // namespace sfrec
