#pragma once

#include <Eigen/Core>

#include <vector>

#include "spinwright/mesh.hpp"
#include "spinwright/quat_operator.hpp"

namespace spinwright {

// Quaternion-valued discrete one-form: one value per undirected edge,
// stored along the canonical lo -> hi orientation.
struct EdgeOneForm {
    std::vector<Quaternion> values;

    int size() const { return static_cast<int>(values.size()); }

    // Value along the directed edge from -> to; the sign flips when the
    // direction opposes the canonical orientation.  Throws InputError for
    // non-adjacent vertices.
    Quaternion along(const TriMesh& m, int from, int to) const;
};

// Exact edge integral of conj(psi) df psi for piecewise-linear spinor and
// position.  On the edge (i, j) with e the lo -> hi edge vector,
//
//   omega = 1/3 conj(p_i) e p_i + 1/6 (conj(p_i) e p_j + conj(p_j) e p_i)
//         + 1/3 conj(p_j) e p_j,
//
// the edge of the transformed surface.  The value is purely imaginary up to
// rounding.
EdgeOneForm spinor_one_form(const TriMesh& m, const QuatVector& psi);

// RMS over faces of the oriented boundary sum, relative to the RMS edge
// value; zero exactly when the form is closed.
double closedness_rms(const TriMesh& m, const EdgeOneForm& omega);

// Least-squares potential of the form: minimizes the cotan-weighted defect
// sum_e w_e |dF_e - omega_e|^2 through its normal (Poisson) equations,
// solved per coordinate with a grounded sparse Cholesky factorization.
// Only the imaginary parts of omega enter.  The area centroid of the
// result sits at the origin.
std::vector<Eigen::Vector3d> integrate_one_form(const TriMesh& m,
                                                const EdgeOneForm& omega);

// RMS over edges of |dF - omega| relative to the RMS edge value.
double exactness_rms(const TriMesh& m, const EdgeOneForm& omega,
                     const std::vector<Eigen::Vector3d>& positions);

// Norms of the integrals of omega around a homology basis (2 * genus
// cycles from a tree-cotree split); empty on genus-zero meshes.
std::vector<double> homology_period_norms(const TriMesh& m,
                                          const EdgeOneForm& omega);

}  // namespace spinwright
