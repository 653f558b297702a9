#include "spinwright/curvature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace spinwright {

namespace {

const double pi = std::acos(-1.0);

// cot of the angle opposite halfedge h inside its face.
double opposite_cotan(const TriMesh& m, int h) {
    const int f = h / 3, s = h % 3;
    const Eigen::Vector3d& apex = m.positions[m.faces[f][(s + 2) % 3]];
    const Eigen::Vector3d u = m.positions[m.faces[f][s]] - apex;
    const Eigen::Vector3d v = m.positions[m.faces[f][(s + 1) % 3]] - apex;
    const double cross = u.cross(v).norm();
    if (cross == 0.0) return 0.0;
    return u.dot(v) / cross;
}

}  // namespace

std::vector<double> vertex_areas(const TriMesh& m) {
    std::vector<double> a(m.vertex_count(), 0.0);
    for (int f = 0; f < m.face_count(); ++f) {
        const double third = m.face_area(f) / 3.0;
        for (int s = 0; s < 3; ++s) a[m.faces[f][s]] += third;
    }
    return a;
}

std::vector<Eigen::Vector3d> vertex_normals(const TriMesh& m) {
    std::vector<Eigen::Vector3d> n(m.vertex_count(),
                                   Eigen::Vector3d::Zero());
    for (int f = 0; f < m.face_count(); ++f) {
        const Eigen::Vector3d fn = m.face_normal(f);
        for (int s = 0; s < 3; ++s)
            n[m.faces[f][s]] += m.corner_angle(f, s) * fn;
    }
    for (auto& v : n) {
        const double len = v.norm();
        if (len > 0.0) v /= len;
    }
    return n;
}

std::vector<double> angle_defects(const TriMesh& m) {
    std::vector<double> d(m.vertex_count(), 2.0 * pi);
    for (int f = 0; f < m.face_count(); ++f)
        for (int s = 0; s < 3; ++s) d[m.faces[f][s]] -= m.corner_angle(f, s);
    return d;
}

std::vector<double> cotan_weights(const TriMesh& m) {
    std::vector<double> w(m.edge_count(), 0.0);
    for (int h = 0; h < 3 * m.face_count(); ++h)
        w[m.edge_of_halfedge[h]] += 0.5 * opposite_cotan(m, h);
    return w;
}

std::vector<double> dihedral_angles(const TriMesh& m) {
    std::vector<double> theta(m.edge_count(), 0.0);
    for (int e = 0; e < m.edge_count(); ++e) {
        const int h = m.edge_halfedge[e];
        const Eigen::Vector3d n1 = m.face_normal(h / 3);
        const Eigen::Vector3d n2 = m.face_normal(m.twin[h] / 3);
        const Eigen::Vector3d dir = m.edge_vector(h).normalized();
        theta[e] = std::atan2(n1.cross(n2).dot(dir), n1.dot(n2));
    }
    return theta;
}

std::vector<double> mean_curvature_cotan(const TriMesh& m) {
    const std::vector<double> w = cotan_weights(m);
    const std::vector<double> area = vertex_areas(m);
    const std::vector<Eigen::Vector3d> normal = vertex_normals(m);

    std::vector<Eigen::Vector3d> lap(m.vertex_count(),
                                     Eigen::Vector3d::Zero());
    for (int e = 0; e < m.edge_count(); ++e) {
        const int i = m.edges[e][0], j = m.edges[e][1];
        const Eigen::Vector3d d = m.positions[j] - m.positions[i];
        lap[i] += w[e] * d;
        lap[j] -= w[e] * d;
    }
    std::vector<double> h(m.vertex_count());
    for (int v = 0; v < m.vertex_count(); ++v)
        h[v] = -lap[v].dot(normal[v]) / (2.0 * area[v]);
    return h;
}

std::vector<double> mean_curvature_dihedral(const TriMesh& m) {
    const std::vector<double> theta = dihedral_angles(m);
    const std::vector<double> area = vertex_areas(m);
    std::vector<double> h(m.vertex_count(), 0.0);
    for (int e = 0; e < m.edge_count(); ++e) {
        const double contrib =
            (m.positions[m.edges[e][1]] - m.positions[m.edges[e][0]]).norm() *
            theta[e] / 4.0;
        h[m.edges[e][0]] += contrib;
        h[m.edges[e][1]] += contrib;
    }
    for (int v = 0; v < m.vertex_count(); ++v) h[v] /= area[v];
    return h;
}

void principal_curvatures(const TriMesh& m, std::vector<double>& kappa1,
                          std::vector<double>& kappa2) {
    const std::vector<Eigen::Vector3d> normal = vertex_normals(m);
    const int nv = m.vertex_count();
    kappa1.assign(nv, 0.0);
    kappa2.assign(nv, 0.0);

    for (int v = 0; v < nv; ++v) {
        const Eigen::Vector3d n = normal[v];
        // tangent frame: start from the coordinate axis least aligned with n
        int axis = 0;
        for (int c = 1; c < 3; ++c)
            if (std::abs(n[c]) < std::abs(n[axis])) axis = c;
        Eigen::Vector3d e1 = Eigen::Vector3d::Unit(axis);
        e1 = (e1 - e1.dot(n) * n).normalized();
        const Eigen::Vector3d e2 = n.cross(e1);

        // sample set: one-ring, extended by the two-ring when too small for
        // the five fit coefficients
        std::set<int> samples(m.ring_vertices[v].begin(),
                              m.ring_vertices[v].end());
        if (samples.size() < 5)
            for (int u : m.ring_vertices[v])
                for (int t : m.ring_vertices[u])
                    if (t != v) samples.insert(t);

        Eigen::MatrixXd A(static_cast<int>(samples.size()), 5);
        Eigen::VectorXd b(static_cast<int>(samples.size()));
        int row = 0;
        for (int j : samples) {
            const Eigen::Vector3d d = m.positions[j] - m.positions[v];
            const double u = d.dot(e1), w = d.dot(e2);
            A.row(row) << 0.5 * u * u, u * w, 0.5 * w * w, u, w;
            b[row] = d.dot(n);
            ++row;
        }
        const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);

        // height Hessian [[a, b], [b, c]]; curvature is its negative
        Eigen::Matrix2d hess;
        hess << x[0], x[1], x[1], x[2];
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess);
        kappa1[v] = -es.eigenvalues()[0];
        kappa2[v] = -es.eigenvalues()[1];
        if (kappa1[v] < kappa2[v]) std::swap(kappa1[v], kappa2[v]);
    }
}

CurvatureReport curvature_report(const TriMesh& m) {
    CurvatureReport r;
    r.vertex_area = vertex_areas(m);
    r.vertex_normal = vertex_normals(m);
    r.mean_h_cotan = mean_curvature_cotan(m);
    r.mean_h_dihedral = mean_curvature_dihedral(m);
    principal_curvatures(m, r.kappa1, r.kappa2);
    r.angle_defect = angle_defects(m);
    r.total_area = m.total_area();
    for (int v = 0; v < m.vertex_count(); ++v)
        r.willmore_energy +=
            r.mean_h_cotan[v] * r.mean_h_cotan[v] * r.vertex_area[v];
    return r;
}

}  // namespace spinwright
