#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <map>
#include <string>
#include <vector>

#include "spinwright/quaternion.hpp"

namespace spinwright {

// Closed, oriented, manifold, connected triangle mesh with halfedge
// connectivity.
//
// Halfedge h = 3*f + s runs from faces[f][s] to faces[f][(s + 1) % 3] inside
// face f.  Faces are listed counterclockwise as seen from outside, so face
// normals of an embedded surface point away from the enclosed volume.
//
// Instances are produced by make_trimesh (or the generators / OBJ loader,
// which all funnel through it); the connectivity arrays below are filled
// there and stay consistent with `positions` and `faces`.
struct TriMesh {
    std::vector<Eigen::Vector3d> positions;
    std::vector<std::array<int, 3>> faces;

    // Connectivity, indexed by halfedge or undirected edge.
    std::vector<int> twin;                  // opposite halfedge
    std::vector<int> edge_of_halfedge;      // undirected edge id per halfedge
    std::vector<std::array<int, 2>> edges;  // endpoints, lo < hi
    std::vector<int> edge_halfedge;         // the halfedge running lo -> hi
    // One-ring neighbours in counterclockwise order; ring_faces[v][k] is the
    // face spanned by v, ring_vertices[v][k] and ring_vertices[v][(k+1)%deg].
    std::vector<std::vector<int>> ring_vertices;
    std::vector<std::vector<int>> ring_faces;

    int vertex_count() const { return static_cast<int>(positions.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int euler_characteristic() const {
        return vertex_count() - edge_count() + face_count();
    }
    int genus() const { return (2 - euler_characteristic()) / 2; }

    int halfedge_origin(int h) const { return faces[h / 3][h % 3]; }
    int halfedge_dest(int h) const { return faces[h / 3][(h % 3 + 1) % 3]; }
    static int halfedge_next(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
    static int halfedge_prev(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }

    Eigen::Vector3d edge_vector(int h) const {
        return positions[halfedge_dest(h)] - positions[halfedge_origin(h)];
    }

    // Undirected edge id for a vertex pair; throws InputError if the
    // vertices are not adjacent.
    int edge_index(int i, int j) const;

    // The two vertices across an undirected edge, one per incident face,
    // ordered as (apex of the lo->hi face, apex of the hi->lo face).
    std::array<int, 2> edge_opposite_vertices(int e) const;

    double face_area(int f) const;
    Eigen::Vector3d face_normal(int f) const;  // unit
    // Interior angle at corner s of face f, in (0, pi).
    double corner_angle(int f, int s) const;

    double total_area() const;
    Eigen::Vector3d area_centroid() const;
    // Largest distance from the area centroid to a vertex; the natural
    // length scale for relative tolerances.
    double bounding_radius() const;
    double mean_edge_length() const;

  private:
    friend TriMesh make_trimesh(std::vector<Eigen::Vector3d>,
                                std::vector<std::array<int, 3>>, bool);
    std::map<std::pair<int, int>, int> edge_lookup_;
};

// Validates the input and builds connectivity.  Rejects (with InputError and
// a specific message): out-of-range or repeated vertex indices, duplicated
// directed edges (non-manifold edges or inconsistent orientation), boundary
// edges (surface not closed), multi-fan vertex links, isolated vertices and
// disconnected meshes.  Zero-area faces are rejected too unless
// require_nondegenerate_faces is false (used for transform outputs, which
// must be representable even when the immersion degenerates).
TriMesh make_trimesh(std::vector<Eigen::Vector3d> positions,
                     std::vector<std::array<int, 3>> faces,
                     bool require_nondegenerate_faces = true);

// Same connectivity, new vertex positions.  Geometric degeneracy is allowed;
// topology is revalidated cheaply by construction.
TriMesh with_positions(const TriMesh& m, std::vector<Eigen::Vector3d> p);

// Throws GeometryError unless the two meshes share vertex count and an
// identical face list (orderings included).
void require_same_connectivity(const TriMesh& a, const TriMesh& b);

// Bridges between 3-vectors and purely imaginary quaternions.
inline Quaternion to_pure(const Eigen::Vector3d& v) {
    return {0.0, v.x(), v.y(), v.z()};
}
inline Eigen::Vector3d to_vector(const Quaternion& q) {
    return {q.x, q.y, q.z};
}

}  // namespace spinwright
