#pragma once

#include <complex>
#include <vector>

#include "spinwright/mesh.hpp"

namespace spinwright {

// Deterministic orthonormal tangent frame of a face: the real axis is the
// direction of the face's first halfedge, the imaginary axis is
// normal x real.  In-plane vectors get complex coordinates through
// coordinate(); quadratic-differential coefficients below are always stated
// in this chart.
struct FaceChart {
    Eigen::Vector3d t1 = Eigen::Vector3d::UnitX();
    Eigen::Vector3d t2 = Eigen::Vector3d::UnitY();
    Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();

    std::complex<double> coordinate(const Eigen::Vector3d& v) const {
        return {v.dot(t1), v.dot(t2)};
    }
    // Angle of an (approximately tangent) direction in the chart.
    double angle_of(const Eigen::Vector3d& v) const {
        return std::atan2(v.dot(t2), v.dot(t1));
    }
};

FaceChart face_chart(const TriMesh& m, int f);

// Per-face second fundamental form in the face chart, as the symmetric
// matrix (a b; b c) of the linear fit  dn = S df  to the vertex positions
// and unit vertex normals of the face.  With outward normals the unit
// sphere measures a = c = 1, b = 0.
struct FaceII {
    double a = 0.0, b = 0.0, c = 0.0;

    double mean() const { return 0.5 * (a + c); }
    // Complex coefficient of the trace-free part in the chart:
    // (a - c)/2 - i b.  Its modulus is half the principal-curvature gap,
    // and it rotates with weight two under chart rotations.
    std::complex<double> deviator() const { return {0.5 * (a - c), -b}; }
};

FaceII face_second_fundamental(const TriMesh& m,
                               const std::vector<Eigen::Vector3d>& normals,
                               int f);

// A quadratic differential sampled per face: values[f] is the coefficient
// of dz^2 in the chart of face f.  |values[f]| is chart-independent;
// rotating the chart by an angle rotates the argument by twice that angle,
// which is what the transport between neighbouring charts implements.
struct QuadDiffField {
    std::vector<std::complex<double>> values;

    int size() const { return static_cast<int>(values.size()); }
};

// The Hopf differential: trace-free part of the second fundamental form,
// per face in the face chart.  Zeros mark umbilic regions.
QuadDiffField hopf_differential(const TriMesh& m);

// Coefficient of face g's value re-expressed in the chart of face f, where
// g and f share undirected edge e.  The shared edge direction is read in
// both charts and the coefficient is rotated by twice the mismatch (the
// hinge map of a weight-two tensor).
std::complex<double> transport_across_edge(const TriMesh& m,
                                           const QuadDiffField& q, int g,
                                           int f, int e);

// Scale-free non-holomorphy measure in [0, 1].  For every vertex the ring
// of face samples is transported to a common vertex chart (one-ring laid
// out by normalized corner angles, samples at face centroids) and fit by a
// holomorphic linear model c0 + c1 z in the area-weighted least-squares
// sense.  The per-vertex defect is the residual of that fit relative to the
// residual of the best constant fit -- the fraction of the field's
// first-order variation that holomorphy cannot explain.  Returns the
// area-weighted RMS over vertices; rings with no measurable variation
// contribute zero (constants are holomorphic).  Parallel fields measure 0,
// anti-holomorphic fields measure near 1.
double holomorphicity_residual(const TriMesh& m, const QuadDiffField& q);

// Same measure restricted to the rings of the given vertices, for probing a
// chart-like region of a larger mesh (the global version averages over
// every vertex, including any closure scaffolding a synthetic patch needs).
double holomorphicity_residual(const TriMesh& m, const QuadDiffField& q,
                               const std::vector<int>& vertices);

// Index of the horizontal foliation of q at a vertex: minus half the
// winding number of arg(q) around the vertex link, computed by summing
// chart-corrected argument increments between consecutive ring faces and
// removing the angle-defect holonomy.  The raw sum is a half-integer up to
// rounding noise for any nonvanishing field; the returned value is snapped
// to the nearest half-integer.  A simple zero measures -1/2, a constant
// field measures 0.  Increments assume the field turns less than a half
// turn of argument between neighbouring faces (the discrete sampling
// limit).  Throws GeometryError when q vanishes on a link face.
double foliation_index(const TriMesh& m, const QuadDiffField& q, int vertex);

// Sum of the unsnapped vertex indices over a set of vertices, snapped to a
// half-integer once at the end.  Increments across edges interior to the
// set cancel in pairs, so this is the winding of q around the boundary link
// of the region -- the natural index of an umbilic cluster.  Throws
// GeometryError when q vanishes on a face incident to the set.
double foliation_index_region(const TriMesh& m, const QuadDiffField& q,
                              const std::vector<int>& vertices);

}  // namespace spinwright
