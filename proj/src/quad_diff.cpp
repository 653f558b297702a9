#include "spinwright/quad_diff.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "spinwright/curvature.hpp"
#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> rotor(double angle) {
    return {std::cos(angle), std::sin(angle)};
}

double snap_half_integer(double x) { return 0.5 * std::round(2.0 * x); }

// Angle defect at v from the incident corner angles.
double vertex_angle_defect(const TriMesh& m, int v) {
    double total = 0.0;
    for (int f : m.ring_faces[v]) {
        for (int s = 0; s < 3; ++s) {
            if (m.faces[f][s] == v) {
                total += m.corner_angle(f, s);
                break;
            }
        }
    }
    return 2.0 * kPi - total;
}

// Unsnapped index: (2 K_v - sum of increments) / 4 pi.  The increment from
// ring face f to its successor g is the principal argument of the
// transported ratio q_g->f / q_f; around the full link the sum is congruent
// to 2 K_v modulo 2 pi, which makes the quotient a half-integer.
double raw_vertex_index(const TriMesh& m, const QuadDiffField& q, int v) {
    const auto& ring_f = m.ring_faces[v];
    const auto& ring_v = m.ring_vertices[v];
    const int deg = static_cast<int>(ring_f.size());
    double increment_sum = 0.0;
    for (int k = 0; k < deg; ++k) {
        const int f = ring_f[k];
        const int g = ring_f[(k + 1) % deg];
        if (std::abs(q.values[f]) == 0.0 || std::abs(q.values[g]) == 0.0) {
            throw GeometryError(
                "foliation index undefined: the quadratic differential "
                "vanishes on a link face of vertex " + std::to_string(v));
        }
        // Shared edge of f and g runs from v to the next ring vertex.
        const Eigen::Vector3d dir =
            m.positions[ring_v[(k + 1) % deg]] - m.positions[v];
        const FaceChart cf = face_chart(m, f);
        const FaceChart cg = face_chart(m, g);
        const std::complex<double> moved =
            q.values[g] * rotor(2.0 * (cg.angle_of(dir) - cf.angle_of(dir)));
        increment_sum += std::arg(moved / q.values[f]);
    }
    return (2.0 * vertex_angle_defect(m, v) - increment_sum) / (4.0 * kPi);
}

}  // namespace

FaceChart face_chart(const TriMesh& m, int f) {
    FaceChart chart;
    chart.t1 = m.edge_vector(3 * f).normalized();
    chart.normal = m.face_normal(f);
    chart.t2 = chart.normal.cross(chart.t1);
    return chart;
}

FaceII face_second_fundamental(const TriMesh& m,
                               const std::vector<Eigen::Vector3d>& normals,
                               int f) {
    if (static_cast<int>(normals.size()) != m.vertex_count()) {
        throw InputError("face_second_fundamental: normal field size " +
                         std::to_string(normals.size()) + " != vertex count " +
                         std::to_string(m.vertex_count()));
    }
    const FaceChart chart = face_chart(m, f);
    const auto& [v0, v1, v2] = m.faces[f];
    const Eigen::Vector3d e1 = m.positions[v1] - m.positions[v0];
    const Eigen::Vector3d e2 = m.positions[v2] - m.positions[v0];
    Eigen::Matrix2d u;  // columns: edge vectors in the chart
    u << e1.dot(chart.t1), e2.dot(chart.t1),
         e1.dot(chart.t2), e2.dot(chart.t2);
    const Eigen::Vector3d g1 = normals[v1] - normals[v0];
    const Eigen::Vector3d g2 = normals[v2] - normals[v0];
    Eigen::Matrix2d w;  // columns: normal differences in the chart
    w << g1.dot(chart.t1), g2.dot(chart.t1),
         g1.dot(chart.t2), g2.dot(chart.t2);
    const double det = u.determinant();
    const double scale = e1.squaredNorm() + e2.squaredNorm();
    if (std::abs(det) <= 1e-14 * scale) {
        throw GeometryError("face_second_fundamental: face " +
                            std::to_string(f) + " is degenerate");
    }
    const Eigen::Matrix2d s = w * u.inverse();  // dn = S df
    FaceII ii;
    ii.a = s(0, 0);
    ii.b = 0.5 * (s(0, 1) + s(1, 0));
    ii.c = s(1, 1);
    return ii;
}

QuadDiffField hopf_differential(const TriMesh& m) {
    const std::vector<Eigen::Vector3d> normals = vertex_normals(m);
    QuadDiffField q;
    q.values.resize(m.face_count());
    for (int f = 0; f < m.face_count(); ++f) {
        q.values[f] = face_second_fundamental(m, normals, f).deviator();
    }
    return q;
}

std::complex<double> transport_across_edge(const TriMesh& m,
                                           const QuadDiffField& q, int g,
                                           int f, int e) {
    const auto& [lo, hi] = m.edges[e];
    const Eigen::Vector3d dir = m.positions[hi] - m.positions[lo];
    const FaceChart cf = face_chart(m, f);
    const FaceChart cg = face_chart(m, g);
    return q.values[g] * rotor(2.0 * (cg.angle_of(dir) - cf.angle_of(dir)));
}

namespace {

// Squared fraction of the ring's first-order variation at v that the
// holomorphic affine model cannot explain; 0 for an unmeasurable ring.
double ring_ratio_sq(const TriMesh& m, const QuadDiffField& q, int v) {
    const auto& ring_f = m.ring_faces[v];
    const auto& ring_v = m.ring_vertices[v];
    const int deg = static_cast<int>(ring_f.size());

    // Lay the one-ring out flat: ring directions at cumulative corner
    // angles normalized to a full turn, ring vertices at their true
    // edge lengths.
    std::vector<double> cumulative(deg + 1, 0.0);
    for (int k = 0; k < deg; ++k) {
        int s = 0;
        while (m.faces[ring_f[k]][s] != v) ++s;
        cumulative[k + 1] = cumulative[k] + m.corner_angle(ring_f[k], s);
    }
    const double total_angle = cumulative[deg];
    if (total_angle <= 0.0) return 0.0;
    const double normalize = 2.0 * kPi / total_angle;

    std::vector<std::complex<double>> corner(deg + 1);
    for (int k = 0; k <= deg; ++k) {
        const int u = ring_v[k % deg];
        const double len = (m.positions[u] - m.positions[v]).norm();
        corner[k] = len * rotor(cumulative[k] * normalize);
    }

    // Transport each face sample into the vertex chart and place it at
    // the laid-out face centroid.
    Eigen::Matrix2cd gram = Eigen::Matrix2cd::Zero();
    Eigen::Vector2cd rhs = Eigen::Vector2cd::Zero();
    std::vector<std::complex<double>> sample(deg), position(deg);
    std::vector<double> weight(deg);
    std::complex<double> mean_num = 0.0;
    double area_sum = 0.0;
    for (int k = 0; k < deg; ++k) {
        const int f = ring_f[k];
        const Eigen::Vector3d dir = m.positions[ring_v[k]] - m.positions[v];
        const FaceChart cf = face_chart(m, f);
        const double face_angle = cf.angle_of(dir);
        const double vertex_angle = cumulative[k] * normalize;
        sample[k] = q.values[f] * rotor(2.0 * (face_angle - vertex_angle));
        position[k] = (corner[k] + corner[k + 1]) / 3.0;
        weight[k] = m.face_area(f);
        area_sum += weight[k];
        mean_num += weight[k] * sample[k];
        gram(0, 0) += weight[k];
        gram(0, 1) += weight[k] * position[k];
        gram(1, 0) += weight[k] * std::conj(position[k]);
        gram(1, 1) += weight[k] * std::norm(position[k]);
        rhs(0) += weight[k] * sample[k];
        rhs(1) += weight[k] * std::conj(position[k]) * sample[k];
    }
    if (area_sum <= 0.0) return 0.0;

    const Eigen::Vector2cd fit = gram.ldlt().solve(rhs);
    const std::complex<double> mean = mean_num / area_sum;
    double dev_sq = 0.0, var_sq = 0.0, mag_sq = 0.0;
    for (int k = 0; k < deg; ++k) {
        dev_sq += weight[k] *
                  std::norm(sample[k] - fit(0) - fit(1) * position[k]);
        var_sq += weight[k] * std::norm(sample[k] - mean);
        mag_sq += weight[k] * std::norm(sample[k]);
    }
    // A ring constant to machine precision carries no signal: both
    // residuals are pure roundoff and their quotient is meaningless.
    if (var_sq <= 1e-24 * mag_sq) return 0.0;
    return std::min(1.0, dev_sq / var_sq);
}

// Area-weighted RMS of the per-ring ratios over a vertex set.
double residual_over(const TriMesh& m, const QuadDiffField& q,
                     const std::vector<int>& vertices) {
    const std::vector<double> vertex_weight = vertex_areas(m);
    double weighted_sq = 0.0;
    double weight_total = 0.0;
    for (int v : vertices) {
        weighted_sq += vertex_weight[v] * ring_ratio_sq(m, q, v);
        weight_total += vertex_weight[v];
    }
    if (weight_total <= 0.0) return 0.0;
    return std::sqrt(weighted_sq / weight_total);
}

void check_field_size(const TriMesh& m, const QuadDiffField& q) {
    if (q.size() != m.face_count()) {
        throw InputError("holomorphicity_residual: field size " +
                         std::to_string(q.size()) + " != face count " +
                         std::to_string(m.face_count()));
    }
}

}  // namespace

double holomorphicity_residual(const TriMesh& m, const QuadDiffField& q) {
    check_field_size(m, q);
    std::vector<int> all(m.vertex_count());
    for (int v = 0; v < m.vertex_count(); ++v) all[v] = v;
    return residual_over(m, q, all);
}

double holomorphicity_residual(const TriMesh& m, const QuadDiffField& q,
                               const std::vector<int>& vertices) {
    check_field_size(m, q);
    for (int v : vertices) {
        if (v < 0 || v >= m.vertex_count()) {
            throw InputError("holomorphicity_residual: vertex " +
                             std::to_string(v) + " out of range");
        }
    }
    return residual_over(m, q, vertices);
}

double foliation_index(const TriMesh& m, const QuadDiffField& q, int vertex) {
    if (q.size() != m.face_count()) {
        throw InputError("foliation_index: field size " +
                         std::to_string(q.size()) + " != face count " +
                         std::to_string(m.face_count()));
    }
    if (vertex < 0 || vertex >= m.vertex_count()) {
        throw InputError("foliation_index: vertex " + std::to_string(vertex) +
                         " out of range");
    }
    return snap_half_integer(raw_vertex_index(m, q, vertex));
}

double foliation_index_region(const TriMesh& m, const QuadDiffField& q,
                              const std::vector<int>& vertices) {
    if (q.size() != m.face_count()) {
        throw InputError("foliation_index_region: field size " +
                         std::to_string(q.size()) + " != face count " +
                         std::to_string(m.face_count()));
    }
    double total = 0.0;
    for (int v : vertices) {
        if (v < 0 || v >= m.vertex_count()) {
            throw InputError("foliation_index_region: vertex " +
                             std::to_string(v) + " out of range");
        }
        total += raw_vertex_index(m, q, v);
    }
    return snap_half_integer(total);
}

}  // namespace spinwright
