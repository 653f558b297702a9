#include "spinwright/mesh_generators.hpp"

#include <cmath>
#include <string>

#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

TriMesh base_icosahedron() {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> p = {
        {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1},
    };
    for (auto& v : p) v.normalize();
    std::vector<std::array<int, 3>> f = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    return make_trimesh(std::move(p), std::move(f));
}

}  // namespace

TriMesh subdivide_midpoint(const TriMesh& m) {
    std::vector<Eigen::Vector3d> p = m.positions;
    p.reserve(p.size() + m.edges.size());
    for (const auto& e : m.edges)
        p.push_back(0.5 * (m.positions[e[0]] + m.positions[e[1]]));

    const int nv = m.vertex_count();
    std::vector<std::array<int, 3>> f;
    f.reserve(4 * m.faces.size());
    for (int fi = 0; fi < m.face_count(); ++fi) {
        const auto& v = m.faces[fi];
        const int mab = nv + m.edge_of_halfedge[3 * fi];
        const int mbc = nv + m.edge_of_halfedge[3 * fi + 1];
        const int mca = nv + m.edge_of_halfedge[3 * fi + 2];
        f.push_back({v[0], mab, mca});
        f.push_back({v[1], mbc, mab});
        f.push_back({v[2], mca, mbc});
        f.push_back({mab, mbc, mca});
    }
    return make_trimesh(std::move(p), std::move(f),
                        /*require_nondegenerate_faces=*/false);
}

TriMesh make_icosphere(int level) {
    if (level < 0 || level > 7)
        throw InputError("icosphere level " + std::to_string(level) +
                         " outside supported range [0, 7]");
    TriMesh m = base_icosahedron();
    for (int l = 0; l < level; ++l) {
        m = subdivide_midpoint(m);
        std::vector<Eigen::Vector3d> p = m.positions;
        for (auto& v : p) v.normalize();
        m = with_positions(m, std::move(p));
    }
    return m;
}

TriMesh make_ellipsoid(double a, double b, double c, int level) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw InputError("ellipsoid semi-axes must be positive");
    TriMesh m = make_icosphere(level);
    std::vector<Eigen::Vector3d> p = m.positions;
    for (auto& v : p) v = Eigen::Vector3d(a * v.x(), b * v.y(), c * v.z());
    return with_positions(m, std::move(p));
}

TriMesh make_torus(double major_radius, double minor_radius, int nu, int nv) {
    if (!(minor_radius > 0.0) || !(major_radius > minor_radius))
        throw InputError("torus radii must satisfy 0 < minor < major");
    if (nu < 3 || nv < 3)
        throw InputError("torus resolution must be at least 3 x 3");

    const double pi = std::acos(-1.0);
    std::vector<Eigen::Vector3d> p;
    p.reserve(static_cast<std::size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        const double th = 2.0 * pi * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double ph = 2.0 * pi * j / nv;
            const double ring = major_radius + minor_radius * std::cos(ph);
            p.emplace_back(ring * std::cos(th), ring * std::sin(th),
                           minor_radius * std::sin(ph));
        }
    }

    auto vid = [nu, nv](int i, int j) {
        return ((i % nu + nu) % nu) * nv + ((j % nv + nv) % nv);
    };
    std::vector<std::array<int, 3>> f;
    f.reserve(2 * static_cast<std::size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            f.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            f.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    return make_trimesh(std::move(p), std::move(f));
}

}  // namespace spinwright
