#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "spinwright/bonnet.hpp"
#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

// Min-norm point in the convex hull of a finite point set (Wolfe's method).
// Points here are unit vectors, so absolute tolerances are scale-free.
struct MinNormPoint {
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    std::vector<int> support;      // indices into the point list
    std::vector<double> weights;   // convex weights, aligned with support
};

MinNormPoint min_norm_point(const std::vector<Eigen::Vector3d>& pts) {
    MinNormPoint state;
    int start = 0;
    for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
        if (pts[i].squaredNorm() < pts[start].squaredNorm()) start = i;
    }
    state.support = {start};
    state.weights = {1.0};
    state.point = pts[start];

    for (int iter = 0; iter < 1000; ++iter) {
        // Optimality: the support function of the hull in direction -x must
        // not improve on x itself.
        int next = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            const double d = state.point.dot(pts[i]);
            if (d < best - 1e-15) {
                best = d;
                next = i;
            }
        }
        if (next < 0 || best >= state.point.squaredNorm() - 1e-12) break;
        if (std::find(state.support.begin(), state.support.end(), next) !=
            state.support.end()) {
            break;
        }
        state.support.push_back(next);
        state.weights.push_back(0.0);

        // Minor cycles: pull the affine minimizer back into the simplex.
        while (true) {
            const int m = static_cast<int>(state.support.size());
            Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) {
                    kkt(r, c) =
                        pts[state.support[r]].dot(pts[state.support[c]]);
                }
                kkt(r, m) = 1.0;
                kkt(m, r) = 1.0;
            }
            rhs(m) = 1.0;
            const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
            if (!sol.allFinite()) break;

            bool convex = true;
            for (int k = 0; k < m; ++k) {
                if (sol(k) < -1e-14) convex = false;
            }
            if (convex) {
                for (int k = 0; k < m; ++k) {
                    state.weights[k] = std::max(0.0, sol(k));
                }
                break;
            }
            double theta = 1.0;
            for (int k = 0; k < m; ++k) {
                if (sol(k) < state.weights[k]) {
                    theta = std::min(
                        theta, state.weights[k] / (state.weights[k] - sol(k)));
                }
            }
            std::vector<int> kept_support;
            std::vector<double> kept_weights;
            for (int k = 0; k < m; ++k) {
                const double w =
                    (1.0 - theta) * state.weights[k] + theta * sol(k);
                if (w > 1e-14) {
                    kept_support.push_back(state.support[k]);
                    kept_weights.push_back(w);
                }
            }
            if (kept_support.empty()) {
                kept_support.push_back(state.support[0]);
                kept_weights.push_back(1.0);
            }
            state.support = std::move(kept_support);
            state.weights = std::move(kept_weights);
        }

        double mass = 0.0;
        for (double w : state.weights) mass += w;
        Eigen::Vector3d updated = Eigen::Vector3d::Zero();
        for (int k = 0; k < static_cast<int>(state.support.size()); ++k) {
            state.weights[k] /= mass;
            updated += state.weights[k] * pts[state.support[k]];
        }
        if ((updated - state.point).norm() <= 1e-15) {
            state.point = updated;
            break;
        }
        state.point = updated;
    }
    return state;
}

struct ConeCertificate {
    std::vector<int> indices;      // indices into the point list
    std::vector<double> weights;   // convex weights
};

struct ConeDecision {
    bool feasible = false;
    Eigen::Vector3d witness = Eigen::Vector3d::Zero();
    ConeCertificate certificate;  // vanishing convex combination when not
};

// Nonnegative combination of base points (known to admit a strictly
// positive vanishing combination `positive`) realizing the vector -w; used
// to stitch certificates across recursion levels.
std::vector<double> cone_solve(const std::vector<Eigen::Vector3d>& pts,
                               const std::vector<int>& indices,
                               const std::vector<double>& positive,
                               const Eigen::Vector3d& w) {
    const int m = static_cast<int>(indices.size());
    Eigen::MatrixXd a(3, m);
    for (int k = 0; k < m; ++k) a.col(k) = pts[indices[k]];
    Eigen::VectorXd nu =
        a.completeOrthogonalDecomposition().solve(Eigen::Vector3d(-w));
    // Shift along the strictly positive null combination until nonnegative.
    double shift = 0.0;
    for (int k = 0; k < m; ++k) {
        if (nu(k) < 0.0) shift = std::max(shift, -nu(k) / positive[k]);
    }
    std::vector<double> out(m);
    for (int k = 0; k < m; ++k) out[k] = nu(k) + shift * positive[k];
    return out;
}

// Feasibility of { v in span(basis), v != 0 : v . p >= 0 for all p } where
// the points lie in span(basis).  Returns a unit witness or a vanishing
// convex combination of the points (indices into pts).
ConeDecision cone_feasible(const std::vector<Eigen::Vector3d>& pts,
                           const Eigen::MatrixXd& basis) {
    ConeDecision decision;
    if (basis.cols() == 0) return decision;  // only v = 0 remains
    if (pts.empty()) {
        decision.feasible = true;
        decision.witness = basis.col(0);
        return decision;
    }

    const MinNormPoint mn = min_norm_point(pts);
    if (mn.point.norm() > 1e-8) {
        decision.feasible = true;
        decision.witness = mn.point.normalized();
        return decision;
    }

    // The origin lies in the hull: any feasible v is orthogonal to every
    // support point with positive weight.
    std::vector<int> active;
    std::vector<double> active_weights;
    Eigen::MatrixXd span(3, 0);
    for (int k = 0; k < static_cast<int>(mn.support.size()); ++k) {
        if (mn.weights[k] > 1e-12) {
            active.push_back(mn.support[k]);
            active_weights.push_back(mn.weights[k]);
            span.conservativeResize(Eigen::NoChange, span.cols() + 1);
            span.col(span.cols() - 1) = pts[mn.support[k]];
        }
    }

    // Orthonormal split of the current subspace into span(active) and its
    // complement.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(span, Eigen::ComputeFullU);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k) {
        if (svd.singularValues()(k) > 1e-10) ++rank;
    }
    // Complement basis within span(basis): columns of U beyond the rank,
    // intersected with the ambient subspace.
    Eigen::MatrixXd complement(3, 0);
    for (int k = rank; k < 3; ++k) {
        const Eigen::Vector3d dir = svd.matrixU().col(k);
        // Keep only directions inside span(basis).
        const Eigen::VectorXd coords = basis.transpose() * dir;
        if ((basis * coords - dir).norm() < 1e-9 && coords.norm() > 1e-9) {
            complement.conservativeResize(Eigen::NoChange,
                                          complement.cols() + 1);
            complement.col(complement.cols() - 1) = dir;
        }
    }

    if (complement.cols() == 0) {
        decision.certificate.indices = active;
        decision.certificate.weights = active_weights;
        return decision;  // infeasible; weights certify the hull point
    }

    // Project the remaining constraints onto the complement.
    std::vector<Eigen::Vector3d> projected;
    std::vector<int> projected_ids;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        Eigen::Vector3d residual = pts[i];
        residual -= svd.matrixU().leftCols(rank) *
                    (svd.matrixU().leftCols(rank).transpose() * pts[i]);
        if (residual.norm() > 1e-10) {
            projected.push_back(residual.normalized());
            projected_ids.push_back(i);
        }
    }

    ConeDecision sub = cone_feasible(projected, complement);
    if (sub.feasible) {
        decision.feasible = true;
        decision.witness = sub.witness;
        return decision;
    }

    // Stitch the two certificates: the sub-level combination of original
    // points lands in span(active), which the active combination can cancel.
    Eigen::Vector3d drift = Eigen::Vector3d::Zero();
    std::vector<int> merged = active;
    std::vector<double> merged_weights = active_weights;
    for (int k = 0; k < static_cast<int>(sub.certificate.indices.size());
         ++k) {
        const int original = projected_ids[sub.certificate.indices[k]];
        const double w = sub.certificate.weights[k];
        drift += w * pts[original];
        merged.push_back(original);
        merged_weights.push_back(w);
    }
    const std::vector<double> cancel =
        cone_solve(pts, active, active_weights, drift);
    for (int k = 0; k < static_cast<int>(active.size()); ++k) {
        merged_weights[k] = cancel[k];
    }
    double mass = 0.0;
    for (double w : merged_weights) mass += w;
    for (double& w : merged_weights) w /= mass;
    decision.certificate.indices = std::move(merged);
    decision.certificate.weights = std::move(merged_weights);
    return decision;
}

}  // namespace

HalfspaceResult gauss_map_halfspace_test(
    const std::vector<Eigen::Vector3d>& n1,
    const std::vector<Eigen::Vector3d>& n2) {
    if (n1.size() != n2.size()) {
        throw InputError("gauss_map_halfspace_test: field sizes differ (" +
                         std::to_string(n1.size()) + " vs " +
                         std::to_string(n2.size()) + ")");
    }

    std::vector<Eigen::Vector3d> diffs(n1.size());
    double largest = 0.0;
    for (std::size_t i = 0; i < n1.size(); ++i) {
        diffs[i] = n1[i] - n2[i];
        largest = std::max(largest, diffs[i].norm());
    }

    HalfspaceResult result;
    if (largest <= 1e-14) {
        // All differences vanish; every direction is a witness.
        result.in_halfspace = true;
        result.witness = Eigen::Vector3d::UnitZ();
        result.min_support = 0.0;
        return result;
    }

    std::vector<Eigen::Vector3d> unit;
    std::vector<int> ids;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i].norm() > 1e-12 * largest) {
            unit.push_back(diffs[i].normalized());
            ids.push_back(static_cast<int>(i));
        }
    }

    const ConeDecision decision =
        cone_feasible(unit, Eigen::MatrixXd::Identity(3, 3));
    if (decision.feasible) {
        result.in_halfspace = true;
        result.witness = decision.witness.normalized();
        double min_support = std::numeric_limits<double>::infinity();
        for (const Eigen::Vector3d& u : unit) {
            min_support = std::min(min_support, result.witness.dot(u));
        }
        result.min_support = unit.empty() ? 0.0 : min_support;
        return result;
    }

    result.in_halfspace = false;
    // Clamp roundoff-negative weights and renormalize so the certificate is
    // a genuine convex combination.
    double mass = 0.0;
    for (std::size_t k = 0; k < decision.certificate.indices.size(); ++k) {
        const double w = std::max(0.0, decision.certificate.weights[k]);
        result.certificate_indices.push_back(
            ids[decision.certificate.indices[k]]);
        result.certificate_weights.push_back(w);
        mass += w;
    }
    Eigen::Vector3d combo = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < result.certificate_weights.size(); ++k) {
        if (mass > 0.0) result.certificate_weights[k] /= mass;
        combo += result.certificate_weights[k] *
                 unit[decision.certificate.indices[k]];
    }
    result.certificate_norm = combo.norm();
    return result;
}

}  // namespace spinwright
