#pragma once

#include "polyvem/mesh.hpp"

#include <iosfwd>
#include <string>

namespace polyvem {

/// Mesh file format: UTF-8 JSON with `dimension`, `nodes` (coordinate
/// arrays), `elements` (2D: node-id loops; 3D: {nodes, faces} objects) and
/// `boundary_sets` (name -> {nodes, facets}). Node ids are 0-based.
Mesh load_mesh(const std::string& path);
Mesh read_mesh(std::istream& in, const std::string& origin = "<stream>");

void save_mesh(const Mesh& mesh, const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);

} // namespace polyvem
