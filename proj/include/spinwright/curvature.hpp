#pragma once

#include <vector>

#include "spinwright/mesh.hpp"

namespace spinwright {

// Barycentric dual areas: one third of the incident face areas.
std::vector<double> vertex_areas(const TriMesh& m);

// Unit vertex normals, weighted by the incident corner angles.
std::vector<Eigen::Vector3d> vertex_normals(const TriMesh& m);

// Angle defect 2*pi - (sum of incident corner angles); sums to
// 2*pi*chi over the mesh.
std::vector<double> angle_defects(const TriMesh& m);

// Cotangent weight per undirected edge: (cot(alpha) + cot(beta)) / 2 with
// alpha, beta the angles opposite the edge.  May be negative for obtuse
// configurations.
std::vector<double> cotan_weights(const TriMesh& m);

// Signed dihedral angle per undirected edge, positive where the surface is
// convex with respect to the outward orientation (a sphere is positive
// everywhere).
std::vector<double> dihedral_angles(const TriMesh& m);

// Pointwise mean curvature via the cotangent Laplacian of the position,
// signed against the outward vertex normal.  The unit sphere with outward
// orientation measures +1.
std::vector<double> mean_curvature_cotan(const TriMesh& m);

// Steiner-type pointwise mean curvature: sum of edge_length * dihedral / 4
// over incident edges, divided by the vertex area.  Same sign convention as
// the cotangent estimate but built from entirely different measurements.
std::vector<double> mean_curvature_dihedral(const TriMesh& m);

// Principal curvatures from a least-squares quadratic height fit over the
// tangent plane (one-ring, extended to the two-ring at low valence),
// returned with kappa1 >= kappa2.  The unit sphere measures +1, +1.
void principal_curvatures(const TriMesh& m, std::vector<double>& kappa1,
                          std::vector<double>& kappa2);

struct CurvatureReport {
    std::vector<double> vertex_area;
    std::vector<Eigen::Vector3d> vertex_normal;
    std::vector<double> mean_h_cotan;
    std::vector<double> mean_h_dihedral;
    std::vector<double> kappa1, kappa2;
    std::vector<double> angle_defect;
    double total_area = 0.0;
    double willmore_energy = 0.0;  // sum of H^2 * A with the cotan estimate
};

CurvatureReport curvature_report(const TriMesh& m);

}  // namespace spinwright
