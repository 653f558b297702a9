#pragma once

#include <vector>

#include "spinwright/mesh.hpp"
#include "spinwright/quat_operator.hpp"

namespace spinwright {

// Per-vertex samples of a mean-curvature half-density, expressed against the
// surface's own conformal factor -- i.e. in curvature units.  Used both for
// the surface's measured density and for prescribed changes of it.
struct HalfDensityField {
    std::vector<double> values;

    static HalfDensityField zero(int n) {
        return {std::vector<double>(n, 0.0)};
    }
    int size() const { return static_cast<int>(values.size()); }
};

// The surface's own half-density, measured with the dihedral (Steiner)
// estimator.  Kept deliberately distinct from the cotangent estimator so the
// two can cross-check each other.
HalfDensityField own_half_density(const TriMesh& m);

// Integrated first-order operator with one quaternionic row per face and
// columns over vertex spinors:
//
//   (D psi)_f = -1/2 sum_l e_l psi_l  -  integral over f of rho * psi
//
// where e_l is the edge vector opposite corner l and the potential integral
// uses exact piecewise-linear quadrature.  Row f approximates the integral
// over the face of (first-order part - rho) applied to psi; a spinor in its
// kernel generates a conformal transform changing the surface's
// half-density by rho.  Placing rows on faces and unknowns on vertices is
// deliberate: a square vertex-to-vertex pairing of a first-order operator
// admits spurious oscillatory near-kernels, while this staggered form does
// not.
struct FaceRowOperator {
    int n_vertices = 0;
    std::vector<std::array<int, 3>> corner;          // per face: vertex ids
    std::vector<std::array<Quaternion, 3>> coeff;    // per face: coefficients
    std::vector<double> face_area;

    int face_count() const { return static_cast<int>(corner.size()); }
    // Face-indexed image of a vertex spinor field.
    QuatVector apply(const QuatVector& psi) const;
};

FaceRowOperator face_dirac_rows(const TriMesh& m,
                                const HalfDensityField& rho);

// Hermitian positive semidefinite normal operator K = D^* M^{-1} D with
// M = diag(face areas).  Its near-kernel spinors minimise the integrability
// defect of the transform, and the natural pencil is K psi = sigma W psi
// with W the vertex areas; sigma carries squared-curvature units.
QuatSparseOperator assemble_dirac(const TriMesh& m,
                                  const HalfDensityField& rho);

// Lumped mass for the pencil: barycentric vertex areas.
std::vector<double> dirac_mass(const TriMesh& m);

struct DiracSolution {
    // Gauge-fixed eigenspinor: the vertex with the largest |psi| is rotated
    // to be a positive real multiple of 1, and |psi|^2 integrates to the
    // surface area.
    QuatVector psi;
    double sigma = 0.0;    // pencil eigenvalue of K; squared curvature units
    // Least-squares constant curvature offset of psi: the uniform shift the
    // transform realises on top of rho (curvature units).
    double solvability_shift = 0.0;
    // Reported dimensionless eigenvalue: sign(solvability_shift) *
    // sqrt(max(sigma, 0)) * bounding radius.
    double lambda = 0.0;
    double residual = 0.0;  // mass-weighted relative eigenresidual
    int iterations = 0;
    // min |psi_i| relative to the area-weighted rms of |psi|; a transform
    // degenerates where psi vanishes.
    double min_abs_psi = 0.0;
    bool nonvanishing = false;  // min_abs_psi >= 1e-6
};

// Smallest-sigma eigenpair of (assemble_dirac(m, rho), vertex areas).
DiracSolution solve_dirac(const TriMesh& m, const HalfDensityField& rho,
                          const EigenOptions& opts = {});

// The k lowest eigenpairs, ordered by sigma.
std::vector<DiracSolution> dirac_low_spectrum(const TriMesh& m,
                                              const HalfDensityField& rho,
                                              int k,
                                              const EigenOptions& opts = {});

// Quaternionic count of reported eigenvalues with |lambda| < zero_tol among
// the lowest max_count.
int kernel_dimension(const TriMesh& m, const HalfDensityField& rho,
                     double zero_tol = 0.05, int max_count = 6,
                     const EigenOptions& opts = {});

}  // namespace spinwright
