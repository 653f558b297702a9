#pragma once

#include <string>

#include "spinwright/mesh.hpp"

namespace spinwright {

// Reads a Wavefront OBJ file.  Accepts `v x y z` and triangular `f` records
// (with optional `/vt/vn` suffixes, which are ignored); other directives and
// comments are skipped.  Malformed records, non-triangular faces and
// out-of-range indices raise InputError with the 1-based line number.  The
// resulting mesh is validated by make_trimesh.
TriMesh load_obj(const std::string& path);

// Writes vertices (9 significant digits) and 1-based faces.  Output is
// bytewise deterministic for a given mesh.
void save_obj(const std::string& path, const TriMesh& m);

}  // namespace spinwright
