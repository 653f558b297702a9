#include "spinwright/one_form.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <string>
#include <vector>

#include "spinwright/curvature.hpp"
#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

void require_edge_count(const TriMesh& m, const EdgeOneForm& omega,
                        const char* who) {
    if (omega.size() != m.edge_count())
        throw InputError(std::string(who) + ": form has " +
                         std::to_string(omega.size()) + " values for " +
                         std::to_string(m.edge_count()) + " edges");
}

double rms_edge_value(const EdgeOneForm& omega) {
    double sum = 0.0;
    for (const Quaternion& q : omega.values) sum += q.norm2();
    return std::sqrt(sum / std::max<std::size_t>(omega.values.size(), 1));
}

}  // namespace

Quaternion EdgeOneForm::along(const TriMesh& m, int from, int to) const {
    const int e = m.edge_index(from, to);
    const Quaternion v = values[e];
    return from < to ? v : -v;
}

EdgeOneForm spinor_one_form(const TriMesh& m, const QuatVector& psi) {
    if (static_cast<int>(psi.size()) != m.vertex_count())
        throw InputError("spinor_one_form: spinor has " +
                         std::to_string(psi.size()) + " samples for " +
                         std::to_string(m.vertex_count()) + " vertices");
    EdgeOneForm omega;
    omega.values.resize(m.edge_count());
    for (int e = 0; e < m.edge_count(); ++e) {
        const int i = m.edges[e][0], j = m.edges[e][1];
        const Quaternion ev = to_pure(m.positions[j] - m.positions[i]);
        const Quaternion& pi = psi[i];
        const Quaternion& pj = psi[j];
        omega.values[e] = (pi.conj() * ev * pi) * (1.0 / 3.0) +
                          (pi.conj() * ev * pj + pj.conj() * ev * pi) *
                              (1.0 / 6.0) +
                          (pj.conj() * ev * pj) * (1.0 / 3.0);
    }
    return omega;
}

double closedness_rms(const TriMesh& m, const EdgeOneForm& omega) {
    require_edge_count(m, omega, "closedness_rms");
    double sum = 0.0;
    for (int f = 0; f < m.face_count(); ++f) {
        Quaternion loop = Quaternion::zero();
        for (int s = 0; s < 3; ++s) {
            const int h = 3 * f + s;
            const int e = m.edge_of_halfedge[h];
            const bool forward = m.edge_halfedge[e] == h;
            loop += forward ? omega.values[e] : -omega.values[e];
        }
        sum += loop.norm2();
    }
    const double scale = rms_edge_value(omega);
    if (scale == 0.0) return 0.0;
    return std::sqrt(sum / m.face_count()) / scale;
}

std::vector<Eigen::Vector3d> integrate_one_form(const TriMesh& m,
                                                const EdgeOneForm& omega) {
    require_edge_count(m, omega, "integrate_one_form");
    const int n = m.vertex_count();
    const std::vector<double> w = cotan_weights(m);

    // Grounded normal equations: vertex 0 is pinned, the rest solve
    // L F = b with the cotan Laplacian L and b the weighted divergence of
    // the form.  The resulting potential is the least-squares primitive up
    // to the constant fixed afterwards by centering.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * m.edge_count());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n - 1, 3);
    for (int e = 0; e < m.edge_count(); ++e) {
        const int i = m.edges[e][0], j = m.edges[e][1];
        const Eigen::Vector3d rhs = to_vector(omega.values[e]) * w[e];
        if (i > 0) {
            trip.emplace_back(i - 1, i - 1, w[e]);
            b.row(i - 1) -= rhs;
        }
        if (j > 0) {
            trip.emplace_back(j - 1, j - 1, w[e]);
            b.row(j - 1) += rhs;
        }
        if (i > 0 && j > 0) {
            trip.emplace_back(i - 1, j - 1, -w[e]);
            trip.emplace_back(j - 1, i - 1, -w[e]);
        }
    }
    Eigen::SparseMatrix<double> L(n - 1, n - 1);
    L.setFromTriplets(trip.begin(), trip.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
    if (solver.info() != Eigen::Success)
        throw SolveError("integrate_one_form: factorization failed", 0.0);
    const Eigen::MatrixXd x = solver.solve(b);
    if (solver.info() != Eigen::Success)
        throw SolveError("integrate_one_form: back substitution failed", 0.0);

    std::vector<Eigen::Vector3d> F(n);
    F[0].setZero();
    for (int i = 1; i < n; ++i) F[i] = x.row(i - 1);

    // Center the area centroid of the integrated surface at the origin,
    // falling back to the vertex mean if the image is fully degenerate.
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    double total = 0.0;
    for (const auto& face : m.faces) {
        const Eigen::Vector3d &a = F[face[0]], &bb = F[face[1]],
                              &c = F[face[2]];
        const double area = 0.5 * (bb - a).cross(c - a).norm();
        centroid += area * (a + bb + c) / 3.0;
        total += area;
    }
    if (total > 0.0) {
        centroid /= total;
    } else {
        centroid.setZero();
        for (const auto& p : F) centroid += p;
        centroid /= n;
    }
    for (auto& p : F) p -= centroid;
    return F;
}

double exactness_rms(const TriMesh& m, const EdgeOneForm& omega,
                     const std::vector<Eigen::Vector3d>& positions) {
    require_edge_count(m, omega, "exactness_rms");
    if (static_cast<int>(positions.size()) != m.vertex_count())
        throw InputError("exactness_rms: position count mismatch");
    double sum = 0.0;
    for (int e = 0; e < m.edge_count(); ++e) {
        const Eigen::Vector3d d =
            positions[m.edges[e][1]] - positions[m.edges[e][0]];
        sum += (d - to_vector(omega.values[e])).squaredNorm();
    }
    const double scale = rms_edge_value(omega);
    if (scale == 0.0) return 0.0;
    return std::sqrt(sum / m.edge_count()) / scale;
}

std::vector<double> homology_period_norms(const TriMesh& m,
                                          const EdgeOneForm& omega) {
    require_edge_count(m, omega, "homology_period_norms");
    const int n = m.vertex_count();

    // Spanning tree of vertices with the integral of omega accumulated
    // from the root along tree paths.
    std::vector<char> in_tree(m.edge_count(), 0);
    std::vector<char> seen(n, 0);
    std::vector<Quaternion> potential(n, Quaternion::zero());
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (int u : m.ring_vertices[v]) {
            if (seen[u]) continue;
            seen[u] = 1;
            const int e = m.edge_index(v, u);
            in_tree[e] = 1;
            potential[u] = potential[v] + omega.along(m, v, u);
            queue.push_back(u);
        }
    }

    // Spanning cotree of faces avoiding tree edges; the untouched edges
    // generate the homology.
    std::vector<char> in_cotree(m.edge_count(), 0);
    std::vector<char> face_seen(m.face_count(), 0);
    std::vector<int> fqueue{0};
    face_seen[0] = 1;
    for (std::size_t head = 0; head < fqueue.size(); ++head) {
        const int f = fqueue[head];
        for (int s = 0; s < 3; ++s) {
            const int h = 3 * f + s;
            const int e = m.edge_of_halfedge[h];
            if (in_tree[e] || in_cotree[e]) continue;
            const int g = m.twin[h] / 3;
            if (face_seen[g]) continue;
            face_seen[g] = 1;
            in_cotree[e] = 1;
            fqueue.push_back(g);
        }
    }

    std::vector<double> norms;
    for (int e = 0; e < m.edge_count(); ++e) {
        if (in_tree[e] || in_cotree[e]) continue;
        const int i = m.edges[e][0], j = m.edges[e][1];
        const Quaternion period =
            omega.values[e] - (potential[j] - potential[i]);
        norms.push_back(period.norm());
    }
    return norms;
}

}  // namespace spinwright
