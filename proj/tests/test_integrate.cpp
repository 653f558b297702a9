#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "spinwright/curvature.hpp"
#include "spinwright/dirac.hpp"
#include "spinwright/errors.hpp"
#include "spinwright/mesh.hpp"
#include "spinwright/mesh_generators.hpp"
#include "spinwright/one_form.hpp"
#include "spinwright/spin_transform.hpp"

using namespace spinwright;

namespace {

QuatVector constant_spinor(int n, const Quaternion& q) {
    QuatVector v(n);
    for (int i = 0; i < n; ++i) v[i] = q;
    return v;
}

std::vector<Eigen::Vector3d> random_positions(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<Eigen::Vector3d> p(n);
    for (auto& v : p) v = {d(rng), d(rng), d(rng)};
    return p;
}

Eigen::Vector3d area_centroid_of(const TriMesh& m,
                                 const std::vector<Eigen::Vector3d>& p) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    double total = 0.0;
    for (const auto& f : m.faces) {
        const double a = 0.5 * (p[f[1]] - p[f[0]]).cross(p[f[2]] - p[f[0]]).norm();
        c += a * (p[f[0]] + p[f[1]] + p[f[2]]) / 3.0;
        total += a;
    }
    return c / total;
}

double rms_gap(const std::vector<Eigen::Vector3d>& a,
               const std::vector<Eigen::Vector3d>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += (a[i] - b[i]).squaredNorm();
    return std::sqrt(sum / a.size());
}

// Gaussian bump of the prescription around an axis direction, measured from
// the area centroid.
HalfDensityField lobe_field(const TriMesh& m, const Eigen::Vector3d& axis,
                            double amplitude, double width) {
    const Eigen::Vector3d c = m.area_centroid();
    const Eigen::Vector3d a = axis.normalized();
    HalfDensityField f = HalfDensityField::zero(m.vertex_count());
    for (int i = 0; i < m.vertex_count(); ++i) {
        const Eigen::Vector3d d = (m.positions[i] - c).normalized();
        const double theta = std::acos(std::clamp(d.dot(a), -1.0, 1.0));
        f.values[i] = amplitude * std::exp(-theta * theta / (2.0 * width * width));
    }
    return f;
}

}  // namespace

TEST_CASE("constant unit spinor reproduces the mesh edges") {
    const TriMesh m = make_icosphere(2);
    const EdgeOneForm omega =
        spinor_one_form(m, constant_spinor(m.vertex_count(), Quaternion::one()));
    REQUIRE(omega.size() == m.edge_count());
    for (int e = 0; e < m.edge_count(); ++e) {
        const Eigen::Vector3d ev = m.positions[m.edges[e][1]] - m.positions[m.edges[e][0]];
        CHECK((omega.values[e] - to_pure(ev)).norm() <= 1e-15);
    }
    CHECK(closedness_rms(m, omega) <= 1e-13);

    const auto F = integrate_one_form(m, omega);
    std::vector<Eigen::Vector3d> centered = m.positions;
    const Eigen::Vector3d c = area_centroid_of(m, centered);
    for (auto& p : centered) p -= c;
    CHECK(rms_gap(F, centered) <= 1e-10 * m.bounding_radius());
    CHECK(exactness_rms(m, omega, F) <= 1e-12);
}

TEST_CASE("constant spinors act by rotation and scaling") {
    const TriMesh m = make_icosphere(1);
    const Quaternion a{0.5, -0.3, 0.8, 0.1};
    const EdgeOneForm omega =
        spinor_one_form(m, constant_spinor(m.vertex_count(), a));

    for (int e = 0; e < m.edge_count(); ++e) {
        const Eigen::Vector3d ev = m.positions[m.edges[e][1]] - m.positions[m.edges[e][0]];
        const Quaternion expected = a.conj() * to_pure(ev) * a;
        CHECK((omega.values[e] - expected).norm() <= 1e-14);
    }

    // Integration recovers the rotated, |a|^2-scaled surface.
    const auto F = integrate_one_form(m, omega);
    std::vector<Eigen::Vector3d> expected(m.vertex_count());
    for (int i = 0; i < m.vertex_count(); ++i)
        expected[i] = to_vector(a.conj() * to_pure(m.positions[i]) * a);
    const Eigen::Vector3d c = area_centroid_of(m, expected);
    for (auto& p : expected) p -= c;
    CHECK(rms_gap(F, expected) <= 1e-9 * m.bounding_radius());

    // Doubling the spinor quadruples the form.
    const EdgeOneForm twice =
        spinor_one_form(m, constant_spinor(m.vertex_count(), Quaternion::one() * 2.0));
    for (int e = 0; e < m.edge_count(); ++e) {
        const Eigen::Vector3d ev = m.positions[m.edges[e][1]] - m.positions[m.edges[e][0]];
        CHECK((twice.values[e] - to_pure(ev) * 4.0).norm() <= 1e-13);
    }
}

TEST_CASE("one form values are purely imaginary") {
    const TriMesh m = make_torus(1.7, 0.5, 12, 8);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    QuatVector psi(m.vertex_count());
    for (int i = 0; i < m.vertex_count(); ++i)
        psi[i] = {d(rng), d(rng), d(rng), d(rng)};
    const EdgeOneForm omega = spinor_one_form(m, psi);
    for (const Quaternion& q : omega.values)
        CHECK(std::abs(q.w) <= 1e-13 * std::max(q.norm(), 1.0));
}

TEST_CASE("directed access flips the sign") {
    const TriMesh m = make_icosphere(1);
    const EdgeOneForm omega =
        spinor_one_form(m, constant_spinor(m.vertex_count(), Quaternion::one()));
    const int i = m.edges[5][0], j = m.edges[5][1];
    CHECK((omega.along(m, i, j) + omega.along(m, j, i)).norm() == 0.0);
    CHECK((omega.along(m, i, j) - omega.values[5]).norm() == 0.0);
    // after one subdivision the original vertices are no longer adjacent
    CHECK_THROWS_AS(omega.along(m, 0, 1), InputError);
}

TEST_CASE("integration matches a dense least-squares oracle") {
    const TriMesh m = make_torus(2.0, 0.6, 8, 4);
    const int n = m.vertex_count();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    QuatVector psi(n);
    for (int i = 0; i < n; ++i)
        psi[i] = Quaternion{1.0, 0.2 * d(rng), 0.2 * d(rng), 0.2 * d(rng)};
    const EdgeOneForm omega = spinor_one_form(m, psi);
    const auto F = integrate_one_form(m, omega);

    // Oracle: minimum-norm solution of the full singular normal system via
    // a dense complete orthogonal decomposition.
    const std::vector<double> w = cotan_weights(m);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 3);
    for (int e = 0; e < m.edge_count(); ++e) {
        const int i = m.edges[e][0], j = m.edges[e][1];
        L(i, i) += w[e];
        L(j, j) += w[e];
        L(i, j) -= w[e];
        L(j, i) -= w[e];
        const Eigen::Vector3d rhs = to_vector(omega.values[e]) * w[e];
        b.row(i) -= rhs;
        b.row(j) += rhs;
    }
    const Eigen::MatrixXd x =
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(L).solve(b);
    std::vector<Eigen::Vector3d> oracle(n);
    for (int i = 0; i < n; ++i) oracle[i] = x.row(i);
    const Eigen::Vector3d c = area_centroid_of(m, oracle);
    for (auto& p : oracle) p -= c;

    CHECK(rms_gap(F, oracle) <= 1e-9 * m.bounding_radius());
}

TEST_CASE("exact forms integrate back to their potential") {
    const TriMesh m = make_torus(2.0, 0.6, 10, 5);
    const auto target = random_positions(m.vertex_count(), 23);
    EdgeOneForm omega;
    omega.values.resize(m.edge_count());
    for (int e = 0; e < m.edge_count(); ++e)
        omega.values[e] =
            to_pure(target[m.edges[e][1]] - target[m.edges[e][0]]);

    CHECK(closedness_rms(m, omega) <= 1e-13);
    const auto periods = homology_period_norms(m, omega);
    REQUIRE(periods.size() == 2);
    CHECK(periods[0] <= 1e-12);
    CHECK(periods[1] <= 1e-12);

    const auto F = integrate_one_form(m, omega);
    std::vector<Eigen::Vector3d> centered = target;
    const Eigen::Vector3d c = area_centroid_of(m, centered);
    for (auto& p : centered) p -= c;
    CHECK(rms_gap(F, centered) <= 1e-10);
    CHECK(exactness_rms(m, omega, F) <= 1e-12);
}

TEST_CASE("random forms are detected as non integrable") {
    const TriMesh m = make_icosphere(1);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    EdgeOneForm omega;
    omega.values.resize(m.edge_count());
    for (auto& q : omega.values) q = Quaternion::pure(d(rng), d(rng), d(rng));
    CHECK(closedness_rms(m, omega) >= 0.1);
    const auto F = integrate_one_form(m, omega);
    CHECK(exactness_rms(m, omega, F) >= 0.1);
}

TEST_CASE("mismatched sizes are rejected") {
    const TriMesh m = make_icosphere(1);
    CHECK_THROWS_AS(spinor_one_form(m, QuatVector(5)), InputError);
    EdgeOneForm omega;
    omega.values.resize(m.edge_count() - 1);
    CHECK_THROWS_AS(closedness_rms(m, omega), InputError);
    CHECK_THROWS_AS(integrate_one_form(m, omega), InputError);
    CHECK_THROWS_AS(
        exactness_rms(m, omega, std::vector<Eigen::Vector3d>(m.vertex_count())),
        InputError);
    CHECK_THROWS_AS(homology_period_norms(m, omega), InputError);
    CHECK_THROWS_AS(
        spin_transform(m, HalfDensityField::zero(m.vertex_count() - 1)),
        InputError);
}

TEST_CASE("zero prescription returns the surface itself") {
    for (const TriMesh& m : {make_icosphere(3), make_torus(2.0, 0.7, 32, 16)}) {
        const auto t =
            spin_transform(m, HalfDensityField::zero(m.vertex_count()));
        CHECK(rms_gap(t.mesh.positions, m.positions) <=
              1e-10 * m.bounding_radius());
        CHECK(t.report.qc_max <= 1.0 + 1e-9);
        CHECK(t.report.qc_mean <= 1.0 + 1e-9);
        CHECK(t.report.halfdensity_l2_error <= 1e-9);
        CHECK(std::abs(t.report.dilation - 1.0) <= 1e-10);
        CHECK(std::abs(t.report.solvability_shift) <= 1e-9);
        CHECK(t.report.closedness_rms <= 1e-12);
        CHECK(t.report.exactness_rms <= 1e-12);
        CHECK(t.report.min_abs_psi >= 0.999);
        CHECK(t.report.nonvanishing);
        for (double p : t.report.period_norms) CHECK(p <= 1e-10);
        CHECK(static_cast<int>(t.report.period_norms.size()) == 2 * m.genus());
    }
}

TEST_CASE("constant prescription dilates the sphere") {
    const TriMesh m = make_icosphere(3);
    const auto t = spin_transform(
        m, {std::vector<double>(m.vertex_count(), 0.2)});

    // The prescribed curvature change must turn the unit sphere into the
    // sphere of curvature 1.2, i.e. radius 5/6, realized via the dilation.
    double rmin = 1e300, rmax = 0.0;
    for (const auto& p : t.mesh.positions) {
        rmin = std::min(rmin, p.norm());
        rmax = std::max(rmax, p.norm());
    }
    CHECK(rmin >= 5.0 / 6.0 - 0.01);
    CHECK(rmax <= 5.0 / 6.0 + 0.01);
    CHECK(rmax - rmin <= 1e-3);

    CHECK(t.report.dilation == doctest::Approx(5.0 / 6.0).epsilon(0.01));
    CHECK(t.report.solvability_shift == doctest::Approx(-0.2).epsilon(0.01));
    CHECK(t.report.halfdensity_l2_error <= 0.03);
    CHECK(t.report.qc_max <= 1.001);
    CHECK(t.report.min_abs_psi >= 0.99);
    CHECK(t.report.nonvanishing);
}

TEST_CASE("lobe prescription realizes the density within tolerance") {
    const TriMesh m = make_icosphere(3);
    const auto rho = lobe_field(m, {0.0, 0.0, 1.0}, 0.3, 0.6);
    const auto t = spin_transform(m, rho);

    CHECK(t.report.halfdensity_l2_error <= 0.03);
    CHECK(t.report.qc_mean <= 1.01);
    CHECK(t.report.qc_max <= 1.02);
    CHECK(t.report.min_abs_psi >= 0.9);
    CHECK(t.report.nonvanishing);
    CHECK(t.report.eigen_residual <= 1e-8);
    CHECK(t.report.closedness_rms <= 1e-2);

    // The bump flattens one pole: the surface is no longer round.
    double rmin = 1e300, rmax = 0.0;
    for (const auto& p : t.mesh.positions) {
        rmin = std::min(rmin, p.norm());
        rmax = std::max(rmax, p.norm());
    }
    CHECK(rmax - rmin >= 0.01);
    CHECK(rmax <= 1.0);
    CHECK(rmin >= 0.8);
}

TEST_CASE("torus prescriptions report honest homology defects") {
    const TriMesh m = make_torus(2.0, 0.7, 32, 16);
    const auto rho = lobe_field(m, {0.0, 0.0, 1.0}, 0.2, 0.9);
    const auto t = spin_transform(m, rho);
    REQUIRE(t.report.period_norms.size() == 2);
    // A generic prescription on a torus has nonvanishing periods; they are
    // part of the report rather than silently dropped.
    CHECK(t.report.period_norms[0] + t.report.period_norms[1] >= 1e-4);
    CHECK(t.report.halfdensity_l2_error <= 0.35);
    CHECK(t.report.qc_max <= 1.1);
    CHECK(t.report.nonvanishing);
}

TEST_CASE("transforms are equivariant under rotations") {
    const TriMesh m = make_icosphere(2);
    const Quaternion a = normalized({0.8, 0.1, -0.5, 0.3});
    std::vector<Eigen::Vector3d> rotated(m.vertex_count());
    for (int i = 0; i < m.vertex_count(); ++i)
        rotated[i] = to_vector(rotate(a, to_pure(m.positions[i])));
    const TriMesh mr = with_positions(m, std::move(rotated));

    const Eigen::Vector3d axis(0.0, 0.0, 1.0);
    const Eigen::Vector3d axis_r = to_vector(rotate(a, to_pure(axis)));
    const auto t = spin_transform(m, lobe_field(m, axis, 0.3, 0.6));
    const auto tr = spin_transform(mr, lobe_field(mr, axis_r, 0.3, 0.6));

    CHECK(std::abs(t.report.lambda - tr.report.lambda) <= 1e-6);
    CHECK(std::abs(t.report.halfdensity_l2_error -
                   tr.report.halfdensity_l2_error) <= 1e-6);
    CHECK(std::abs(t.report.qc_max - tr.report.qc_max) <= 1e-6);
    CHECK(std::abs(t.report.dilation - tr.report.dilation) <= 1e-6);
    // Vertexwise distances from the centroid are rotation invariants of the
    // realized geometry (the gauge only spins the image rigidly).
    for (int i = 0; i < m.vertex_count(); ++i)
        CHECK(std::abs(t.mesh.positions[i].norm() -
                       tr.mesh.positions[i].norm()) <= 1e-6);
}

TEST_CASE("transform output is deterministic") {
    const TriMesh m = make_icosphere(2);
    const auto rho = lobe_field(m, {0.0, 0.0, 1.0}, 0.3, 0.6);
    const auto t1 = spin_transform(m, rho);
    const auto t2 = spin_transform(m, rho);
    CHECK(rms_gap(t1.mesh.positions, t2.mesh.positions) == 0.0);
    CHECK(t1.report.lambda == t2.report.lambda);
    CHECK(t1.report.halfdensity_l2_error == t2.report.halfdensity_l2_error);
    CHECK(t1.report.refinements_used == t2.report.refinements_used);
}

TEST_CASE("conformal distortion measures anisotropic stretch") {
    const TriMesh m = make_icosphere(2);
    // Uniform scaling is conformal.
    std::vector<Eigen::Vector3d> scaled = m.positions;
    for (auto& p : scaled) p *= 2.3;
    const auto qc_scale = face_conformal_distortion(m, with_positions(m, scaled));
    for (double q : qc_scale) CHECK(q == doctest::Approx(1.0).epsilon(1e-12));

    // Squashing one axis is not; the worst face sees the full ratio.
    std::vector<Eigen::Vector3d> squashed = m.positions;
    for (auto& p : squashed) p.z() *= 0.5;
    const auto qc_squash =
        face_conformal_distortion(m, with_positions(m, squashed));
    const double worst = *std::max_element(qc_squash.begin(), qc_squash.end());
    CHECK(worst >= 1.8);
    CHECK(worst <= 2.0 + 1e-9);

    // A collapsed face reports an unbounded ratio.
    std::vector<Eigen::Vector3d> collapsed = m.positions;
    collapsed[m.faces[0][1]] = collapsed[m.faces[0][0]];
    const auto qc_degen =
        face_conformal_distortion(m, with_positions(m, collapsed));
    CHECK(std::isinf(qc_degen[0]));

    const TriMesh other = make_icosphere(1);
    CHECK_THROWS_AS(face_conformal_distortion(m, other), GeometryError);
}
