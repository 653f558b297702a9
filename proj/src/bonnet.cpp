#include "spinwright/bonnet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

// Unit quaternion of a proper rotation matrix (Shepperd's branch choice).
Quaternion quaternion_from_matrix(const Eigen::Matrix3d& r) {
    const double trace = r.trace();
    Quaternion q;
    if (trace > 0.0) {
        double s = std::sqrt(trace + 1.0) * 2.0;
        q = {0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s,
             (r(1, 0) - r(0, 1)) / s};
    } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
        double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
        q = {(r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s,
             (r(0, 2) + r(2, 0)) / s};
    } else if (r(1, 1) > r(2, 2)) {
        double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
        q = {(r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s,
             (r(1, 2) + r(2, 1)) / s};
    } else {
        double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
        q = {(r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s,
             (r(1, 2) + r(2, 1)) / s, 0.25 * s};
    }
    return normalized(q);
}

// Quaternion a with rotate(a, v) = r v.  Shepperd's formulas produce the
// quaternion of the a v conj(a) convention; rotate() conjugates the other
// way around, so the result is conjugated once.
Quaternion rotation_quaternion(const Eigen::Matrix3d& r) {
    return quaternion_from_matrix(r).conj();
}

}  // namespace

Eigen::Vector3d RigidMotion::apply(const Eigen::Vector3d& p) const {
    const Eigen::Vector3d source = reflection ? Eigen::Vector3d(-p) : p;
    return to_vector(rotate(rotation, to_pure(source))) +
           to_vector(translation);
}

ShapeDistortion shape_distortion(const TriMesh& m1, const TriMesh& m2,
                                 double iso_tol) {
    require_same_connectivity(m1, m2);
    if (iso_tol <= 0.0) {
        throw InputError("shape_distortion: iso_tol must be positive");
    }

    double worst = 0.0;
    int worst_edge = -1;
    for (int e = 0; e < m1.edge_count(); ++e) {
        const auto& [i, j] = m1.edges[e];
        const double l1 = (m1.positions[i] - m1.positions[j]).norm();
        const double l2 = (m2.positions[i] - m2.positions[j]).norm();
        const double strain = std::abs(l1 - l2) / std::max({l1, l2, 1e-300});
        if (strain > worst) {
            worst = strain;
            worst_edge = e;
        }
    }
    if (worst > iso_tol) {
        const auto& [i, j] = m1.edges[worst_edge];
        throw GeometryError(
            "shape_distortion: meshes are not isometric; worst edge " +
            std::to_string(worst_edge) + " (" + std::to_string(i) + ", " +
            std::to_string(j) + ") has relative strain " +
            std::to_string(worst) + " > iso_tol " + std::to_string(iso_tol));
    }

    const std::vector<Eigen::Vector3d> normals1 = vertex_normals(m1);
    const std::vector<Eigen::Vector3d> normals2 = vertex_normals(m2);

    ShapeDistortion result;
    result.max_edge_strain = worst;
    result.d20.values.resize(m1.face_count());
    double mismatch_sq = 0.0, scale1_sq = 0.0, scale2_sq = 0.0;
    double area_sum = 0.0;
    for (int f = 0; f < m1.face_count(); ++f) {
        const FaceII ii1 = face_second_fundamental(m1, normals1, f);
        const FaceII ii2 = face_second_fundamental(m2, normals2, f);
        result.d20.values[f] = ii1.deviator() - ii2.deviator();
        const double area = m1.face_area(f);
        area_sum += area;
        mismatch_sq += area * (ii1.mean() - ii2.mean()) *
                       (ii1.mean() - ii2.mean());
        scale1_sq += area * ii1.mean() * ii1.mean();
        scale2_sq += area * ii2.mean() * ii2.mean();
    }
    const double floor =
        1.0 / std::max(m1.bounding_radius(), m2.bounding_radius());
    result.trace_residual =
        std::sqrt(mismatch_sq / area_sum) /
        (std::sqrt(scale1_sq / area_sum) + std::sqrt(scale2_sq / area_sum) +
         floor);
    return result;
}

CongruenceResult congruence_check(const TriMesh& m1, const TriMesh& m2,
                                  bool allow_reflection) {
    if (m1.vertex_count() != m2.vertex_count()) {
        throw GeometryError("congruence_check: vertex counts differ (" +
                            std::to_string(m1.vertex_count()) + " vs " +
                            std::to_string(m2.vertex_count()) + ")");
    }
    const int n = m1.vertex_count();

    Eigen::Vector3d c1 = Eigen::Vector3d::Zero(), c2 = Eigen::Vector3d::Zero();
    for (int i = 0; i < n; ++i) {
        c1 += m1.positions[i];
        c2 += m2.positions[i];
    }
    c1 /= n;
    c2 /= n;

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int i = 0; i < n; ++i) {
        cov += (m2.positions[i] - c2) * (m1.positions[i] - c1).transpose();
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(
        cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d sv = svd.singularValues();
    if (sv(1) <= 1e-12 * std::max(sv(0), 1e-300)) {
        throw GeometryError(
            "congruence_check: degenerate covariance (points collinear)");
    }

    const double parity =
        (svd.matrixU() * svd.matrixV().transpose()).determinant();
    CongruenceResult best;
    best.rms = -1.0;
    for (int use_reflection = 0; use_reflection <= 1; ++use_reflection) {
        if (use_reflection && !allow_reflection) continue;
        // Orthogonal factor with the requested parity; reflections are
        // represented as a central inversion followed by a proper rotation.
        const double target = use_reflection ? -1.0 : 1.0;
        Eigen::Vector3d signs(1.0, 1.0, parity * target < 0.0 ? -1.0 : 1.0);
        const Eigen::Matrix3d ortho = svd.matrixU() * signs.asDiagonal() *
                                      svd.matrixV().transpose();
        const Eigen::Matrix3d proper = use_reflection ? (-ortho).eval()
                                                      : ortho;

        double sq = 0.0;
        for (int i = 0; i < n; ++i) {
            sq += (ortho * (m1.positions[i] - c1) -
                   (m2.positions[i] - c2)).squaredNorm();
        }
        const double rms = std::sqrt(sq / n);
        if (best.rms < 0.0 || rms < best.rms) {
            best.rms = rms;
            best.motion.reflection = use_reflection != 0;
            best.motion.rotation = rotation_quaternion(proper);
            const Eigen::Vector3d t = c2 - ortho * c1;
            best.motion.translation = to_pure(t);
        }
    }

    const double radius =
        std::max(m1.bounding_radius(), m2.bounding_radius());
    best.congruent = best.rms <= 1e-6 * radius;
    return best;
}

std::vector<int> find_umbilics(const CurvatureReport& report, double tol) {
    if (tol <= 0.0) {
        throw InputError("find_umbilics: tol must be positive");
    }
    if (report.total_area <= 0.0) {
        throw InputError("find_umbilics: report has no area");
    }
    const double floor = std::sqrt(4.0 * std::numbers::pi / report.total_area);
    std::vector<int> umbilics;
    for (std::size_t v = 0; v < report.kappa1.size(); ++v) {
        const double gap = std::abs(report.kappa1[v] - report.kappa2[v]);
        const double scale =
            std::abs(report.kappa1[v]) + std::abs(report.kappa2[v]) + floor;
        if (gap <= tol * scale) {
            umbilics.push_back(static_cast<int>(v));
        }
    }
    return umbilics;
}

UmbilicReport umbilic_analysis(const TriMesh& m, const CurvatureReport& report,
                               double tol) {
    UmbilicReport result;
    result.euler_characteristic = m.euler_characteristic();
    result.umbilic_vertices = find_umbilics(report, tol);

    std::vector<char> is_umbilic(m.vertex_count(), 0);
    for (int v : result.umbilic_vertices) is_umbilic[v] = 1;

    // Connected components over mesh edges.
    std::vector<int> component(m.vertex_count(), -1);
    QuadDiffField hopf;  // computed lazily, only when a cluster needs it
    for (int seed : result.umbilic_vertices) {
        if (component[seed] >= 0) continue;
        const int id = static_cast<int>(result.clusters.size());
        UmbilicCluster cluster;
        std::vector<int> stack = {seed};
        component[seed] = id;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            cluster.vertices.push_back(v);
            for (int u : m.ring_vertices[v]) {
                if (is_umbilic[u] && component[u] < 0) {
                    component[u] = id;
                    stack.push_back(u);
                }
            }
        }
        std::sort(cluster.vertices.begin(), cluster.vertices.end());
        result.clusters.push_back(std::move(cluster));
    }

    for (auto& cluster : result.clusters) {
        if (static_cast<int>(cluster.vertices.size()) == m.vertex_count()) {
            // Total umbilicity: the cluster has no boundary link and its
            // index is the whole Euler characteristic.
            cluster.index = static_cast<double>(result.euler_characteristic);
        } else {
            if (hopf.size() == 0) hopf = hopf_differential(m);
            cluster.index = foliation_index_region(m, hopf, cluster.vertices);
        }
        result.index_sum += cluster.index;
    }
    result.poincare_hopf_ok =
        result.index_sum == static_cast<double>(result.euler_characteristic);
    return result;
}

}  // namespace spinwright
