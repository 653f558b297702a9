#include "spinwright/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spinwright/curvature.hpp"
#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

void require_field_size(const TriMesh& m, const HalfDensityField& rho,
                        const char* who) {
    if (rho.size() != m.vertex_count())
        throw InputError(std::string(who) + ": field has " +
                         std::to_string(rho.size()) + " samples for " +
                         std::to_string(m.vertex_count()) + " vertices");
}

// Least-squares constant curvature offset realised by psi: the scalar c
// minimising || M^{-1/2} (D psi - c G psi) || with G the potential rows of a
// unit half-density.
double solvability_shift(const TriMesh& m, const HalfDensityField& rho,
                         const QuatVector& psi) {
    const FaceRowOperator rows = face_dirac_rows(m, rho);
    const QuatVector d = rows.apply(psi);

    double num = 0.0, den = 0.0;
    for (int f = 0; f < rows.face_count(); ++f) {
        // potential row action of a unit half-density: area * face average
        const Quaternion g = (psi[rows.corner[f][0]] +
                              psi[rows.corner[f][1]] +
                              psi[rows.corner[f][2]]) *
                             (rows.face_area[f] / 3.0);
        num += dot(g, d[f]) / rows.face_area[f];
        den += dot(g, g) / rows.face_area[f];
    }
    if (den <= 0.0) return 0.0;
    return num / den;
}

DiracSolution finish_solution(const TriMesh& m, const HalfDensityField& rho,
                              EigenPair&& pair) {
    DiracSolution s;
    s.sigma = pair.value;
    s.residual = pair.residual;
    s.iterations = pair.iterations;
    s.psi = std::move(pair.vector);

    // Gauge: rotate the largest sample to a positive real multiple of 1.
    int pivot = 0;
    double best = -1.0;
    for (int i = 0; i < static_cast<int>(s.psi.size()); ++i) {
        const double a = s.psi[i].norm();
        if (a > best) {
            best = a;
            pivot = i;
        }
    }
    if (best > 0.0) {
        const Quaternion mu = s.psi[pivot] / best;  // unit
        s.psi = s.psi.right_scaled(mu.conj());
    }

    s.solvability_shift = solvability_shift(m, rho, s.psi);
    const double root = std::sqrt(std::max(s.sigma, 0.0));
    s.lambda = (s.solvability_shift < 0.0 ? -root : root) *
               m.bounding_radius();

    const std::vector<double> area = vertex_areas(m);
    double total = 0.0, weighted = 0.0,
           least = std::numeric_limits<double>::max();
    for (int i = 0; i < m.vertex_count(); ++i) {
        const double a = s.psi[i].norm();
        least = std::min(least, a);
        weighted += a * a * area[i];
        total += area[i];
    }
    const double rms = std::sqrt(weighted / total);
    s.min_abs_psi = rms > 0.0 ? least / rms : 0.0;
    s.nonvanishing = s.min_abs_psi >= 1e-6;
    return s;
}

}  // namespace

HalfDensityField own_half_density(const TriMesh& m) {
    return {mean_curvature_dihedral(m)};
}

QuatVector FaceRowOperator::apply(const QuatVector& psi) const {
    if (static_cast<int>(psi.size()) != n_vertices)
        throw InputError("FaceRowOperator::apply: spinor has wrong size");
    QuatVector out(corner.size());
    for (std::size_t f = 0; f < corner.size(); ++f) {
        Quaternion acc = Quaternion::zero();
        for (int l = 0; l < 3; ++l) acc += coeff[f][l] * psi[corner[f][l]];
        out[f] = acc;
    }
    return out;
}

FaceRowOperator face_dirac_rows(const TriMesh& m,
                                const HalfDensityField& rho) {
    require_field_size(m, rho, "face_dirac_rows");
    FaceRowOperator op;
    op.n_vertices = m.vertex_count();
    op.corner = m.faces;
    op.coeff.resize(m.face_count());
    op.face_area.resize(m.face_count());

    for (int f = 0; f < m.face_count(); ++f) {
        const double area = m.face_area(f);
        op.face_area[f] = area;
        const double rho_sum = rho.values[m.faces[f][0]] +
                               rho.values[m.faces[f][1]] +
                               rho.values[m.faces[f][2]];
        for (int l = 0; l < 3; ++l) {
            // edge opposite corner l, following the face orientation
            const Eigen::Vector3d e =
                m.positions[m.faces[f][(l + 2) % 3]] -
                m.positions[m.faces[f][(l + 1) % 3]];
            Quaternion c = to_pure(e) * (-0.5);
            // exact PL quadrature of -rho * psi over the face
            c.w -= area / 12.0 * (rho_sum + rho.values[m.faces[f][l]]);
            op.coeff[f][l] = c;
        }
    }
    return op;
}

QuatSparseOperator assemble_dirac(const TriMesh& m,
                                  const HalfDensityField& rho) {
    const FaceRowOperator rows = face_dirac_rows(m, rho);
    QuatSparseOperator K(m.vertex_count(), /*hermitian=*/true);
    for (int f = 0; f < rows.face_count(); ++f) {
        const double inv_area = 1.0 / rows.face_area[f];
        for (int a = 0; a < 3; ++a) {
            const int va = rows.corner[f][a];
            // diagonal contribution: |coeff|^2 / area, exactly real
            const Quaternion& ca = rows.coeff[f][a];
            K.add(va, va, Quaternion(ca.norm2() * inv_area, 0, 0, 0));
            for (int b = a + 1; b < 3; ++b) {
                const int vb = rows.corner[f][b];
                const Quaternion q =
                    (ca.conj() * rows.coeff[f][b]) * inv_area;
                K.add(va, vb, q);
            }
        }
    }
    return K;
}

std::vector<double> dirac_mass(const TriMesh& m) { return vertex_areas(m); }

DiracSolution solve_dirac(const TriMesh& m, const HalfDensityField& rho,
                          const EigenOptions& opts) {
    EigenPair pair =
        smallest_eigenpair(assemble_dirac(m, rho), dirac_mass(m), opts);
    return finish_solution(m, rho, std::move(pair));
}

std::vector<DiracSolution> dirac_low_spectrum(const TriMesh& m,
                                              const HalfDensityField& rho,
                                              int k,
                                              const EigenOptions& opts) {
    auto pairs = low_spectrum(assemble_dirac(m, rho), dirac_mass(m), k, opts);
    std::vector<DiracSolution> out;
    out.reserve(pairs.size());
    for (auto& p : pairs)
        out.push_back(finish_solution(m, rho, std::move(p)));
    return out;
}

int kernel_dimension(const TriMesh& m, const HalfDensityField& rho,
                     double zero_tol, int max_count,
                     const EigenOptions& opts) {
    const int k = std::min(max_count, m.vertex_count());
    const auto sols = dirac_low_spectrum(m, rho, k, opts);
    int dim = 0;
    for (const auto& s : sols)
        if (std::abs(s.lambda) < zero_tol) ++dim;
    return dim;
}

}  // namespace spinwright
