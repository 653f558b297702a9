#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "spinwright/errors.hpp"
#include "spinwright/mesh.hpp"
#include "spinwright/mesh_generators.hpp"
#include "spinwright/obj_io.hpp"

using namespace spinwright;

namespace {

const double pi = std::acos(-1.0);

TriMesh tetrahedron() {
    std::vector<Eigen::Vector3d> p = {
        {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<std::array<int, 3>> f = {
        {0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    return make_trimesh(p, f);
}

// Sum of angle defects 2*pi - (angle sum) over all vertices.
double total_angle_defect(const TriMesh& m) {
    std::vector<double> sum(m.vertex_count(), 0.0);
    for (int f = 0; f < m.face_count(); ++f)
        for (int s = 0; s < 3; ++s) sum[m.faces[f][s]] += m.corner_angle(f, s);
    double total = 0.0;
    for (double a : sum) total += 2.0 * pi - a;
    return total;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("icosphere counts and geometry") {
    for (int level = 0; level <= 3; ++level) {
        const TriMesh m = make_icosphere(level);
        // 10 * 4^level + 2
        CHECK(m.vertex_count() == 10 * (1 << (2 * level)) + 2);
        CHECK(m.face_count() == 20 * (1 << (2 * level)));
        CHECK(m.edge_count() == 30 * (1 << (2 * level)));
        CHECK(m.euler_characteristic() == 2);
        CHECK(m.genus() == 0);

        for (const auto& p : m.positions)
            CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));

        // outward orientation: normals point away from the centre
        for (int f = 0; f < m.face_count(); ++f) {
            const Eigen::Vector3d c = (m.positions[m.faces[f][0]] +
                                       m.positions[m.faces[f][1]] +
                                       m.positions[m.faces[f][2]]) /
                                      3.0;
            CHECK(m.face_normal(f).dot(c) > 0.0);
        }
    }
    const TriMesh fine = make_icosphere(4);
    CHECK(fine.vertex_count() == 2562);
    CHECK(fine.total_area() == doctest::Approx(4.0 * pi).epsilon(0.01));
    CHECK(fine.bounding_radius() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gauss-bonnet holds combinatorially") {
    CHECK(total_angle_defect(make_icosphere(2)) ==
          doctest::Approx(4.0 * pi).epsilon(1e-9));
    CHECK(total_angle_defect(make_ellipsoid(1.3, 1.0, 0.7, 2)) ==
          doctest::Approx(4.0 * pi).epsilon(1e-9));
    const TriMesh t = make_torus(2.0, 0.7, 24, 12);
    CHECK(std::abs(total_angle_defect(t)) <= 1e-9);
    CHECK(t.euler_characteristic() == 0);
    CHECK(t.genus() == 1);
}

TEST_CASE("generators are deterministic") {
    const TriMesh a = make_icosphere(3), b = make_icosphere(3);
    REQUIRE(a.vertex_count() == b.vertex_count());
    for (int v = 0; v < a.vertex_count(); ++v)
        CHECK(a.positions[v] == b.positions[v]);
    CHECK(a.faces == b.faces);

    const TriMesh t1 = make_torus(2, 0.5, 16, 8), t2 = make_torus(2, 0.5, 16, 8);
    CHECK(t1.faces == t2.faces);
    for (int v = 0; v < t1.vertex_count(); ++v)
        CHECK(t1.positions[v] == t2.positions[v]);
}

TEST_CASE("unit ellipsoid reproduces the icosphere") {
    const TriMesh s = make_icosphere(3), e = make_ellipsoid(1, 1, 1, 3);
    REQUIRE(s.vertex_count() == e.vertex_count());
    CHECK(s.faces == e.faces);
    for (int v = 0; v < s.vertex_count(); ++v)
        CHECK((s.positions[v] - e.positions[v]).norm() <= 1e-12);

    const TriMesh g = make_ellipsoid(2.0, 1.5, 1.0, 2);
    for (const auto& p : g.positions) {
        const double q = p.x() * p.x() / 4.0 + p.y() * p.y() / 2.25 +
                         p.z() * p.z();
        CHECK(q == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("torus counts and area") {
    const int nu = 32, nv = 16;
    const TriMesh t = make_torus(2.0, 0.5, nu, nv);
    CHECK(t.vertex_count() == nu * nv);
    CHECK(t.face_count() == 2 * nu * nv);
    CHECK(t.edge_count() == 3 * nu * nv);
    // area of the smooth torus is 4 pi^2 R r
    CHECK(t.total_area() ==
          doctest::Approx(4.0 * pi * pi * 2.0 * 0.5).epsilon(0.02));
    // outward normals: the normal at the outer equator points away from z axis
    for (int f = 0; f < t.face_count(); ++f) {
        const Eigen::Vector3d c = (t.positions[t.faces[f][0]] +
                                   t.positions[t.faces[f][1]] +
                                   t.positions[t.faces[f][2]]) /
                                  3.0;
        // compare against the analytic outward direction of the tube
        const Eigen::Vector3d axis_point =
            2.0 * Eigen::Vector3d(c.x(), c.y(), 0).normalized();
        CHECK(t.face_normal(f).dot(c - axis_point) > 0.0);
    }
}

TEST_CASE("generator parameter validation") {
    CHECK_THROWS_AS(make_icosphere(-1), InputError);
    CHECK_THROWS_AS(make_icosphere(8), InputError);
    CHECK_THROWS_AS(make_ellipsoid(0.0, 1, 1, 2), InputError);
    CHECK_THROWS_AS(make_ellipsoid(1, -2, 1, 2), InputError);
    CHECK_THROWS_AS(make_torus(1.0, 1.0, 8, 8), InputError);
    CHECK_THROWS_AS(make_torus(2.0, 0.5, 2, 8), InputError);
    CHECK_THROWS_AS(make_torus(2.0, -0.5, 8, 8), InputError);
}

TEST_CASE("midpoint subdivision") {
    const TriMesh t = make_torus(2.0, 0.6, 8, 6);
    const TriMesh s = subdivide_midpoint(t);
    CHECK(s.vertex_count() == t.vertex_count() + t.edge_count());
    CHECK(s.face_count() == 4 * t.face_count());
    CHECK(s.euler_characteristic() == 0);
    // original vertices keep their positions and ids
    for (int v = 0; v < t.vertex_count(); ++v)
        CHECK(s.positions[v] == t.positions[v]);
    // midpoints follow in edge order
    for (int e = 0; e < t.edge_count(); ++e) {
        const Eigen::Vector3d mid = 0.5 * (t.positions[t.edges[e][0]] +
                                           t.positions[t.edges[e][1]]);
        CHECK((s.positions[t.vertex_count() + e] - mid).norm() == 0.0);
    }
}

TEST_CASE("connectivity structures are mutually consistent") {
    const TriMesh m = make_ellipsoid(1.5, 1.0, 0.8, 2);
    // twins invert and swap endpoints
    for (int h = 0; h < 3 * m.face_count(); ++h) {
        CHECK(m.twin[m.twin[h]] == h);
        CHECK(m.halfedge_origin(m.twin[h]) == m.halfedge_dest(h));
        CHECK(m.edge_of_halfedge[m.twin[h]] == m.edge_of_halfedge[h]);
    }
    // canonical edge halfedge runs lo -> hi
    for (int e = 0; e < m.edge_count(); ++e) {
        CHECK(m.halfedge_origin(m.edge_halfedge[e]) == m.edges[e][0]);
        CHECK(m.halfedge_dest(m.edge_halfedge[e]) == m.edges[e][1]);
        CHECK(m.edge_index(m.edges[e][1], m.edges[e][0]) == e);
        const auto opp = m.edge_opposite_vertices(e);
        CHECK(opp[0] != opp[1]);
        // each apex belongs to a face containing the edge
        for (int side = 0; side < 2; ++side) {
            const int h = side == 0 ? m.edge_halfedge[e]
                                    : m.twin[m.edge_halfedge[e]];
            CHECK(m.faces[h / 3][(h % 3 + 2) % 3] == opp[side]);
        }
    }
    CHECK_THROWS_AS(m.edge_index(0, m.vertex_count() - 1), InputError);

    // rings: sizes sum to 2E, faces in rings touch the centre vertex,
    // consecutive ring vertices share the recorded face
    std::size_t ring_total = 0;
    for (int v = 0; v < m.vertex_count(); ++v) {
        const auto& ring = m.ring_vertices[v];
        const auto& rf = m.ring_faces[v];
        REQUIRE(ring.size() == rf.size());
        ring_total += ring.size();
        for (std::size_t k = 0; k < ring.size(); ++k) {
            const auto& fv = m.faces[rf[k]];
            const int a = ring[k], b = ring[(k + 1) % ring.size()];
            CHECK((fv[0] == v || fv[1] == v || fv[2] == v));
            CHECK((fv[0] == a || fv[1] == a || fv[2] == a));
            CHECK((fv[0] == b || fv[1] == b || fv[2] == b));
        }
    }
    CHECK(ring_total == 2 * static_cast<std::size_t>(m.edge_count()));

    // ring order is counterclockwise with respect to the outward normal:
    // the signed volume of consecutive ring edges along the normal is > 0
    for (int v = 0; v < m.vertex_count(); ++v) {
        const auto& ring = m.ring_vertices[v];
        Eigen::Vector3d n = Eigen::Vector3d::Zero();
        for (int f : m.ring_faces[v]) n += m.face_normal(f);
        n.normalize();
        for (std::size_t k = 0; k < ring.size(); ++k) {
            const Eigen::Vector3d u =
                m.positions[ring[k]] - m.positions[v];
            const Eigen::Vector3d w =
                m.positions[ring[(k + 1) % ring.size()]] - m.positions[v];
            CHECK(u.cross(w).dot(n) > 0.0);
        }
    }
}

TEST_CASE("mesh validation rejects broken input") {
    std::vector<Eigen::Vector3d> p = {
        {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};

    // open surface
    CHECK_THROWS_WITH_AS(make_trimesh(p, {{0, 1, 2}}, true),
                         doctest::Contains("not closed"), InputError);

    // inconsistent orientation (one face flipped)
    CHECK_THROWS_AS(
        make_trimesh(p, {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 2, 3}}, true),
        InputError);

    // out-of-range index
    CHECK_THROWS_WITH_AS(
        make_trimesh(p, {{0, 1, 9}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}}, true),
        doctest::Contains("outside"), InputError);

    // repeated index inside a face
    CHECK_THROWS_WITH_AS(
        make_trimesh(p, {{0, 1, 1}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}}, true),
        doctest::Contains("repeats"), InputError);

    // isolated vertex
    {
        auto p2 = p;
        p2.emplace_back(0, 0, 0);
        CHECK_THROWS_WITH_AS(
            make_trimesh(p2, {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}},
                         true),
            doctest::Contains("isolated"), InputError);
    }

    // two tetrahedra joined at a single vertex: non-manifold link
    {
        std::vector<Eigen::Vector3d> q = p;
        q.emplace_back(3, 1, 1);   // 4
        q.emplace_back(3, -1, -1); // 5
        q.emplace_back(5, 0, 0);   // 6, apex shared is vertex 0
        std::vector<std::array<int, 3>> f = {
            {0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2},
            {0, 4, 5}, {0, 5, 6}, {0, 6, 4}, {4, 6, 5}};
        CHECK_THROWS_WITH_AS(make_trimesh(q, f, true),
                             doctest::Contains("link"), InputError);
    }

    // two disjoint tetrahedra: disconnected
    {
        std::vector<Eigen::Vector3d> q = p;
        for (const auto& v : p) q.emplace_back(v + Eigen::Vector3d(10, 0, 0));
        std::vector<std::array<int, 3>> f = {
            {0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2},
            {4, 5, 6}, {4, 7, 5}, {4, 6, 7}, {5, 7, 6}};
        CHECK_THROWS_WITH_AS(make_trimesh(q, f, true),
                             doctest::Contains("disconnected"), InputError);
    }

    // zero-area face: coincident positions
    {
        auto q = p;
        q[3] = q[0];
        std::vector<std::array<int, 3>> f = {
            {0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
        CHECK_THROWS_WITH_AS(make_trimesh(q, f, true),
                             doctest::Contains("zero area"), InputError);
        // the relaxed mode accepts the same geometry
        CHECK_NOTHROW(make_trimesh(q, f, false));
    }
}

TEST_CASE("with_positions and connectivity comparison") {
    const TriMesh t = tetrahedron();
    std::vector<Eigen::Vector3d> p = t.positions;
    for (auto& v : p) v *= 2.0;
    const TriMesh scaled = with_positions(t, p);
    CHECK(scaled.faces == t.faces);
    CHECK(scaled.total_area() == doctest::Approx(4.0 * t.total_area()));
    CHECK_NOTHROW(require_same_connectivity(t, scaled));
    CHECK_THROWS_AS(require_same_connectivity(t, make_icosphere(1)),
                    GeometryError);
    CHECK_THROWS_AS(with_positions(t, std::vector<Eigen::Vector3d>(3)),
                    InputError);
}

TEST_CASE("obj round trip") {
    const TriMesh m = make_ellipsoid(1.2, 1.0, 0.8, 2);
    const auto path = temp_file("spinwright_roundtrip.obj");
    save_obj(path.string(), m);
    const TriMesh r = load_obj(path.string());
    REQUIRE(r.vertex_count() == m.vertex_count());
    CHECK(r.faces == m.faces);
    for (int v = 0; v < m.vertex_count(); ++v)
        CHECK((r.positions[v] - m.positions[v]).norm() <= 1e-8);
    std::filesystem::remove(path);

    // saving twice produces identical bytes
    const auto p1 = temp_file("spinwright_det1.obj");
    const auto p2 = temp_file("spinwright_det2.obj");
    save_obj(p1.string(), m);
    save_obj(p2.string(), m);
    std::ifstream f1(p1), f2(p2);
    const std::string s1((std::istreambuf_iterator<char>(f1)),
                         std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)),
                         std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("obj loader reports line numbers") {
    auto write_and_expect = [](const std::string& body,
                               const std::string& needle) {
        const auto path = temp_file("spinwright_bad.obj");
        {
            std::ofstream out(path);
            out << body;
        }
        bool threw = false;
        try {
            load_obj(path.string());
        } catch (const InputError& e) {
            threw = true;
            const std::string msg = e.what();
            INFO(msg);
            CHECK(msg.find(needle) != std::string::npos);
        }
        CHECK(threw);
        std::filesystem::remove(path);
    };

    CHECK_THROWS_AS(load_obj("/nonexistent/path/mesh.obj"), InputError);

    // malformed vertex on line 2
    write_and_expect("# header\nv 1 2\nv 0 0 0\n", "line 2");
    // quad face on line 5
    write_and_expect(
        "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 2 3 4\n", "line 5");
    // face index out of range on line 4
    write_and_expect("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 7\n", "line 4");
    // non-positive index
    write_and_expect("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 -1\n", "positive");
    // garbage corner token
    write_and_expect("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 x\n", "line 4");

    // a structurally bad but parseable file mentions the path
    write_and_expect("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n", "not closed");
}

TEST_CASE("obj loader tolerates common extras") {
    const auto path = temp_file("spinwright_extras.obj");
    {
        std::ofstream out(path);
        out << "# comment\n"
            << "mtllib nope.mtl\n"
            << "o tetra\n"
            << "v 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\n"
            << "vn 0 0 1\n"
            << "s off\n"
            << "f 1/1/1 2/2/1 3/3/1\n"
            << "f 1 4 2\n"
            << "f 1 3 4\n"
            << "f 2 4 3\n"
            << "\n";
    }
    const TriMesh m = load_obj(path.string());
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 4);
    CHECK(m.euler_characteristic() == 2);
    std::filesystem::remove(path);
}
