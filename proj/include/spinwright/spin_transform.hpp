#pragma once

#include <vector>

#include "spinwright/dirac.hpp"
#include "spinwright/mesh.hpp"
#include "spinwright/one_form.hpp"

namespace spinwright {

struct TransformOptions {
    EigenOptions eigen;
    // Correction re-solves after the first: each one re-prescribes the
    // density with the measured shortfall and keeps the result only if the
    // realized density improves.
    int refinements = 2;
    // Absorb the solvability offset by a global dilation so that the mean
    // curvature (not just its density) meets the prescription on average.
    bool reinject_mean = true;
};

struct TransformReport {
    // Eigenproblem diagnostics of the solve that produced the surface.
    double sigma = 0.0;
    double lambda = 0.0;
    double solvability_shift = 0.0;
    double eigen_residual = 0.0;
    int eigen_iterations = 0;
    double min_abs_psi = 0.0;
    bool nonvanishing = false;

    // Integrability of the transformed edge form (before dilation).
    double closedness_rms = 0.0;
    double exactness_rms = 0.0;
    std::vector<double> period_norms;  // homology periods, 2 * genus entries

    // Geometry of the realized transform.
    double dilation = 1.0;       // global scale applied to the potential
    int refinements_used = 0;
    // Area-weighted relative L2 gap between the re-measured change of the
    // output's curvature density and the prescription.
    double halfdensity_l2_error = 0.0;
    double qc_mean = 1.0;  // area-weighted quasi-conformal distortion
    double qc_max = 1.0;
};

struct SpinTransform {
    TriMesh mesh;
    QuatVector psi;
    TransformReport report;
};

// Per-face quasi-conformal distortion of the map between two meshes with
// identical connectivity: ratio of the singular values of the affine tangent
// map, 1 exactly where the map is conformal.  Degenerate image faces report
// a huge ratio.
std::vector<double> face_conformal_distortion(const TriMesh& domain,
                                              const TriMesh& image);

// Synthesize the conformal transform of m whose mean-curvature half-density
// changes by rho (sampled per vertex, in curvature units of m): solve the
// spinor problem, integrate the transformed edge form, reinject the
// unrealizable constant offset as a global dilation and refine.  The output
// mesh keeps the connectivity of m.
SpinTransform spin_transform(const TriMesh& m, const HalfDensityField& rho,
                             const TransformOptions& opts = {});

}  // namespace spinwright
