#include "spinwright/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

std::string describe_edge(int i, int j) {
    std::ostringstream os;
    os << "{" << i << ", " << j << "}";
    return os.str();
}

}  // namespace

int TriMesh::edge_index(int i, int j) const {
    const auto it = edge_lookup_.find({std::min(i, j), std::max(i, j)});
    if (it == edge_lookup_.end())
        throw InputError("no edge between vertices " + std::to_string(i) +
                         " and " + std::to_string(j));
    return it->second;
}

std::array<int, 2> TriMesh::edge_opposite_vertices(int e) const {
    const int h = edge_halfedge[e];
    const int t = twin[h];
    return {faces[h / 3][(h % 3 + 2) % 3], faces[t / 3][(t % 3 + 2) % 3]};
}

double TriMesh::face_area(int f) const {
    const Eigen::Vector3d a = positions[faces[f][1]] - positions[faces[f][0]];
    const Eigen::Vector3d b = positions[faces[f][2]] - positions[faces[f][0]];
    return 0.5 * a.cross(b).norm();
}

Eigen::Vector3d TriMesh::face_normal(int f) const {
    const Eigen::Vector3d a = positions[faces[f][1]] - positions[faces[f][0]];
    const Eigen::Vector3d b = positions[faces[f][2]] - positions[faces[f][0]];
    const Eigen::Vector3d n = a.cross(b);
    const double len = n.norm();
    if (len == 0.0) return Eigen::Vector3d::Zero();
    return n / len;
}

double TriMesh::corner_angle(int f, int s) const {
    const Eigen::Vector3d& p = positions[faces[f][s]];
    const Eigen::Vector3d u = positions[faces[f][(s + 1) % 3]] - p;
    const Eigen::Vector3d v = positions[faces[f][(s + 2) % 3]] - p;
    const double d = u.dot(v) / (u.norm() * v.norm());
    return std::acos(std::clamp(d, -1.0, 1.0));
}

double TriMesh::total_area() const {
    double a = 0.0;
    for (int f = 0; f < face_count(); ++f) a += face_area(f);
    return a;
}

Eigen::Vector3d TriMesh::area_centroid() const {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    double a = 0.0;
    for (int f = 0; f < face_count(); ++f) {
        const double af = face_area(f);
        const Eigen::Vector3d fc = (positions[faces[f][0]] +
                                    positions[faces[f][1]] +
                                    positions[faces[f][2]]) /
                                   3.0;
        c += af * fc;
        a += af;
    }
    if (a == 0.0) return Eigen::Vector3d::Zero();
    return c / a;
}

double TriMesh::bounding_radius() const {
    const Eigen::Vector3d c = area_centroid();
    double r = 0.0;
    for (const auto& p : positions) r = std::max(r, (p - c).norm());
    return r;
}

double TriMesh::mean_edge_length() const {
    double s = 0.0;
    for (const auto& e : edges)
        s += (positions[e[1]] - positions[e[0]]).norm();
    return s / static_cast<double>(edge_count());
}

TriMesh make_trimesh(std::vector<Eigen::Vector3d> positions,
                     std::vector<std::array<int, 3>> faces,
                     bool require_nondegenerate_faces) {
    TriMesh m;
    m.positions = std::move(positions);
    m.faces = std::move(faces);

    const int nv = m.vertex_count();
    const int nf = m.face_count();
    if (nv == 0) throw InputError("mesh has no vertices");
    if (nf == 0) throw InputError("mesh has no faces");

    for (int f = 0; f < nf; ++f) {
        for (int s = 0; s < 3; ++s) {
            const int v = m.faces[f][s];
            if (v < 0 || v >= nv)
                throw InputError("face " + std::to_string(f) +
                                 " references vertex " + std::to_string(v) +
                                 " outside [0, " + std::to_string(nv) + ")");
        }
        const auto& fv = m.faces[f];
        if (fv[0] == fv[1] || fv[1] == fv[2] || fv[0] == fv[2])
            throw InputError("face " + std::to_string(f) +
                             " repeats a vertex index");
    }

    // Directed-edge table.  A duplicate directed edge means the mesh is
    // either non-manifold along that edge or inconsistently oriented.
    const int nh = 3 * nf;
    std::unordered_map<std::int64_t, int> directed;
    directed.reserve(static_cast<std::size_t>(nh) * 2);
    auto key = [nv](int a, int b) {
        return static_cast<std::int64_t>(a) * nv + b;
    };
    for (int h = 0; h < nh; ++h) {
        const int a = m.halfedge_origin(h), b = m.halfedge_dest(h);
        const auto [it, fresh] = directed.try_emplace(key(a, b), h);
        if (!fresh)
            throw InputError(
                "directed edge " + std::to_string(a) + " -> " +
                std::to_string(b) + " appears in faces " +
                std::to_string(it->second / 3) + " and " + std::to_string(h / 3) +
                "; the mesh is non-manifold or inconsistently oriented");
    }

    m.twin.assign(nh, -1);
    m.edge_of_halfedge.assign(nh, -1);
    for (int h = 0; h < nh; ++h) {
        const int a = m.halfedge_origin(h), b = m.halfedge_dest(h);
        const auto it = directed.find(key(b, a));
        if (it == directed.end())
            throw InputError("edge " + describe_edge(a, b) +
                             " borders only one face; the surface is not closed");
        m.twin[h] = it->second;
        if (m.edge_of_halfedge[h] < 0) {
            const int e = static_cast<int>(m.edges.size());
            m.edge_of_halfedge[h] = e;
            m.edge_of_halfedge[it->second] = e;
            m.edges.push_back({std::min(a, b), std::max(a, b)});
            m.edge_halfedge.push_back(a < b ? h : it->second);
        }
    }
    for (std::size_t e = 0; e < m.edges.size(); ++e)
        m.edge_lookup_[{m.edges[e][0], m.edges[e][1]}] =
            static_cast<int>(e);

    // Vertex links: walk each fan counterclockwise and require that a single
    // cycle covers every outgoing halfedge.
    std::vector<int> out_degree(nv, 0), some_out(nv, -1);
    for (int h = 0; h < nh; ++h) {
        const int v = m.halfedge_origin(h);
        ++out_degree[v];
        some_out[v] = h;
    }
    m.ring_vertices.assign(nv, {});
    m.ring_faces.assign(nv, {});
    for (int v = 0; v < nv; ++v) {
        if (out_degree[v] == 0)
            throw InputError("vertex " + std::to_string(v) +
                             " is isolated (no incident face)");
        const int start = some_out[v];
        int h = start;
        int steps = 0;
        do {
            m.ring_vertices[v].push_back(m.halfedge_dest(h));
            m.ring_faces[v].push_back(h / 3);
            h = m.twin[TriMesh::halfedge_prev(h)];
            if (++steps > out_degree[v])
                throw InputError("vertex " + std::to_string(v) +
                                 " has a non-manifold link");
        } while (h != start);
        if (steps != out_degree[v])
            throw InputError("vertex " + std::to_string(v) +
                             " has a non-manifold link (multiple fans)");
    }

    // Connectedness via face adjacency.
    std::vector<char> seen(nf, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int reached = 0;
    while (!stack.empty()) {
        const int f = stack.back();
        stack.pop_back();
        ++reached;
        for (int s = 0; s < 3; ++s) {
            const int g = m.twin[3 * f + s] / 3;
            if (!seen[g]) {
                seen[g] = 1;
                stack.push_back(g);
            }
        }
    }
    if (reached != nf)
        throw InputError("mesh is disconnected (" + std::to_string(reached) +
                         " of " + std::to_string(nf) +
                         " faces reachable from face 0)");

    if (require_nondegenerate_faces) {
        for (int f = 0; f < nf; ++f) {
            double longest = 0.0;
            for (int s = 0; s < 3; ++s)
                longest = std::max(longest, m.edge_vector(3 * f + s).norm());
            if (m.face_area(f) <= 1e-12 * longest * longest)
                throw InputError("face " + std::to_string(f) +
                                 " has zero area");
        }
    }

    return m;
}

TriMesh with_positions(const TriMesh& m, std::vector<Eigen::Vector3d> p) {
    if (p.size() != m.positions.size())
        throw InputError("position count " + std::to_string(p.size()) +
                         " does not match vertex count " +
                         std::to_string(m.positions.size()));
    return make_trimesh(std::move(p), m.faces,
                        /*require_nondegenerate_faces=*/false);
}

void require_same_connectivity(const TriMesh& a, const TriMesh& b) {
    if (a.vertex_count() != b.vertex_count())
        throw GeometryError("meshes differ in vertex count: " +
                            std::to_string(a.vertex_count()) + " vs " +
                            std::to_string(b.vertex_count()));
    if (a.faces != b.faces)
        throw GeometryError(
            "meshes differ in connectivity (face lists are not identical)");
}

}  // namespace spinwright
