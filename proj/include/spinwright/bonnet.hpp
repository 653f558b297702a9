#pragma once

#include <vector>

#include "spinwright/curvature.hpp"
#include "spinwright/mesh.hpp"
#include "spinwright/quad_diff.hpp"
#include "spinwright/quaternion.hpp"

namespace spinwright {

// Difference of second fundamental forms of two isometric meshes with the
// same connectivity, face by face in the shared first-edge chart.  Two
// congruent surfaces have d20 identically zero; two isometric surfaces
// with equal mean curvature have trace_residual near zero and a
// holomorphic d20.
struct ShapeDistortion {
    QuadDiffField d20;      // (2,0) part of II_1 - II_2 per face
    // Area-weighted RMS of the per-face mean-curvature mismatch, relative
    // to the pair's curvature scale (RMS curvatures plus a bounding-radius
    // floor).
    double trace_residual = 0.0;
    // Worst relative edge-length disagreement found by the isometry check.
    double max_edge_strain = 0.0;
};

// Throws GeometryError on connectivity mismatch, and on isometry violation
// beyond iso_tol (relative edge strain), reporting the worst edge.  The
// default tolerance suits independently generated pairs; exact copies can
// be held to 1e-6.
ShapeDistortion shape_distortion(const TriMesh& m1, const TriMesh& m2,
                                 double iso_tol = 1e-3);

// Orientation-preserving part of a Euclidean motion, plus an optional
// central inversion.  Maps p to rotate(rotation, s * p) + translation with
// s = -1 when reflection is set; rotation is unit to 1e-12 and translation
// purely imaginary.
struct RigidMotion {
    Quaternion rotation = Quaternion::one();
    Quaternion translation = Quaternion::zero();
    bool reflection = false;

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const;
};

struct CongruenceResult {
    bool congruent = false;
    RigidMotion motion;  // best-fit map from the first mesh onto the second
    double rms = 0.0;    // post-alignment RMS vertex distance
};

// Best rigid alignment of corresponding vertices (cross-covariance SVD with
// centroid alignment); improper motions are considered only when
// allow_reflection is set.  congruent is rms <= 1e-6 times the larger
// bounding radius.  Throws GeometryError on vertex-count mismatch or when
// the covariance is degenerate (all points collinear).
CongruenceResult congruence_check(const TriMesh& m1, const TriMesh& m2,
                                  bool allow_reflection = false);

// Vertices whose principal curvatures coincide within
// tol * (|kappa1| + |kappa2| + floor), where the curvature floor
// sqrt(4 pi / total_area) is the curvature of the sphere with the mesh's
// area.  tol must be positive.
std::vector<int> find_umbilics(const CurvatureReport& report, double tol);

struct UmbilicCluster {
    std::vector<int> vertices;  // one connected component, ascending ids
    double index = 0.0;         // half-integer boundary-link index
};

// Umbilic detection plus the Poincare-Hopf ledger: umbilic vertices are
// clustered into connected components and each cluster gets the foliation
// index of the mesh's Hopf differential around its boundary link.  A
// cluster that swallows the whole mesh (a discrete sphere) carries the
// whole Euler characteristic.  poincare_hopf_ok records whether the index
// sum equals the Euler characteristic exactly (both are half-integers, so
// the comparison is exact).
struct UmbilicReport {
    std::vector<int> umbilic_vertices;
    std::vector<UmbilicCluster> clusters;
    double index_sum = 0.0;
    int euler_characteristic = 0;
    bool poincare_hopf_ok = false;
};

UmbilicReport umbilic_analysis(const TriMesh& m, const CurvatureReport& report,
                               double tol);

// Decision of the closed half-space condition: does some unit vector v have
// v . (n1_i - n2_i) >= 0 for every i?  Equivalently, the origin does not
// lie in the interior of the convex hull of the differences.  Solved as a
// min-norm-point feasibility problem over the normalized nonzero
// differences, recursing on the orthogonal complement when the origin sits
// on the hull boundary.  Both verdicts carry certificates: a witness vector
// with its worst inner product, or a convex combination of differences that
// vanishes.
struct HalfspaceResult {
    bool in_halfspace = false;
    Eigen::Vector3d witness = Eigen::Vector3d::Zero();  // unit when true
    // Smallest witness . difference over the nonzero differences (true
    // verdicts only; >= 0 up to rounding).
    double min_support = 0.0;
    // Vanishing convex combination of normalized differences (false
    // verdicts only): indices, weights >= 0 summing to 1, and the norm of
    // the combination (near zero).
    std::vector<int> certificate_indices;
    std::vector<double> certificate_weights;
    double certificate_norm = 0.0;
};

HalfspaceResult gauss_map_halfspace_test(
    const std::vector<Eigen::Vector3d>& n1,
    const std::vector<Eigen::Vector3d>& n2);

}  // namespace spinwright
