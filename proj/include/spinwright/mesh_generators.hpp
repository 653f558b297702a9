#pragma once

#include "spinwright/mesh.hpp"

namespace spinwright {

// Geodesic sphere of radius 1 centred at the origin: a regular icosahedron
// subdivided `level` times with vertices projected onto the unit sphere.
// Vertex count is 10 * 4^level + 2.  level must lie in [0, 7]; the output is
// bitwise deterministic.
TriMesh make_icosphere(int level);

// Icosphere stretched to semi-axes (a, b, c) along x, y, z.  All semi-axes
// must be positive; make_ellipsoid(1, 1, 1, level) reproduces
// make_icosphere(level) exactly.
TriMesh make_ellipsoid(double a, double b, double c, int level);

// Torus of revolution around the z axis with tube centreline radius
// `major_radius` and tube radius `minor_radius` (0 < minor < major), sampled
// on a regular nu x nv grid (nu, nv >= 3) and triangulated with a consistent
// diagonal.  Genus 1, outward normals.
TriMesh make_torus(double major_radius, double minor_radius, int nu, int nv);

// One step of midpoint (1-to-4) subdivision.  New vertices are edge
// midpoints appended after the original vertices in edge-id order, so the
// result is deterministic.  Preserves topology.
TriMesh subdivide_midpoint(const TriMesh& m);

}  // namespace spinwright
