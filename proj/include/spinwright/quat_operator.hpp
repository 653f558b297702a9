#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "spinwright/quaternion.hpp"

namespace spinwright {

/// Dense vector of quaternion coefficients (a right H-module element).
struct QuatVector {
    std::vector<Quaternion> data;

    QuatVector() = default;
    explicit QuatVector(std::size_t n) : data(n) {}

    std::size_t size() const { return data.size(); }
    Quaternion& operator[](std::size_t i) { return data[i]; }
    const Quaternion& operator[](std::size_t i) const { return data[i]; }

    /// Right scalar action: (v * a)_i = v_i * a.
    QuatVector right_scaled(const Quaternion& a) const;
};

/// Quaternion-valued hermitian inner product sum_i conj(u_i) w_i v_i with
/// positive real weights w.  It is conjugate-symmetric and right-linear in
/// its second argument.
Quaternion inner(const QuatVector& u, const QuatVector& v,
                 const std::vector<double>& weights);

/// Weighted norm squared, the real part of inner(v, v, w).
double norm2(const QuatVector& v, const std::vector<double>& weights);

/// Sparse square operator with quaternion entries acting on the left of
/// coefficient vectors: (A v)_i = sum_j A_ij * v_j.
///
/// Hermitian operators store both triangles so that entry(j, i) equals
/// conj(entry(i, j)) exactly; exact zero entries are never stored.
class QuatSparseOperator {
public:
    explicit QuatSparseOperator(int n, bool hermitian = false)
        : n_(n), hermitian_(hermitian) {}

    int size() const { return n_; }
    bool hermitian() const { return hermitian_; }
    std::size_t entry_count() const { return entries_.size(); }

    /// Accumulate q into entry (i, j).  For hermitian operators the mirror
    /// entry (j, i) += conj(q) is maintained automatically; diagonal
    /// accumulations must be real in that case.
    void add(int i, int j, const Quaternion& q);

    /// Overwrite entry (i, j) (and its mirror for hermitian operators).
    void set(int i, int j, const Quaternion& q);

    Quaternion entry(int i, int j) const;

    /// Drop entries that are exactly zero.
    void prune();

    /// Verify the stored conjugate symmetry (exact comparison).
    bool storage_is_hermitian() const;

    QuatVector apply(const QuatVector& v) const;

    /// Dense 4n x 4n real representation, row-major, built from the left
    /// multiplication blocks of the entries.  Intended for small problems
    /// and test oracles.
    std::vector<double> to_real_dense() const;

    const std::map<std::pair<int, int>, Quaternion>& entries() const {
        return entries_;
    }

private:
    int n_;
    bool hermitian_;
    std::map<std::pair<int, int>, Quaternion> entries_;
};

struct EigenPair {
    double value = 0.0;      ///< real eigenvalue of the weighted pencil
    QuatVector vector;       ///< normalized so that |psi|^2_w = sum(w)
    double residual = 0.0;   ///< weighted relative residual at return
    int iterations = 0;
};

struct EigenOptions {
    double tol = 1e-10;
    int max_iter = 1000;
    std::uint64_t seed = 0;  ///< deterministic start-vector seed
    /// Optional initial guess; overrides the seeded start vector.
    std::optional<QuatVector> initial_guess;
};

/// Smallest-magnitude eigenpair of the generalized problem
/// A psi = lambda W psi with W = diag(weights), solved by shifted inverse
/// power iteration on the 4n x 4n real representation with a sparse
/// factorization; a Rayleigh-Ritz extraction over a short window of
/// iterates keeps the iteration on the smallest mode when the low spectrum
/// is clustered.  A must be hermitian and weights positive; eigenvalues of
/// such pencils are real.  The residual reported and tested against tol is
/// ||W^{-1} A psi - lambda psi||_w / ||psi||_w.
///
/// Throws InputError for a non-hermitian operator or non-positive weights,
/// SolveError (with the last residual) on non-convergence.
EigenPair smallest_eigenpair(const QuatSparseOperator& A,
                             const std::vector<double>& weights,
                             const EigenOptions& opts = {});

/// The k smallest-magnitude eigenpairs, obtained by deflation with the
/// weighted quaternionic Gram-Schmidt process.  Eigenvectors are mutually
/// orthogonal in the weighted quaternionic-hermitian inner product.
/// Throws InputError when k exceeds the operator dimension.
std::vector<EigenPair> low_spectrum(const QuatSparseOperator& A,
                                    const std::vector<double>& weights,
                                    int k, const EigenOptions& opts = {});

}  // namespace spinwright
