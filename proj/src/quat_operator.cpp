#include "spinwright/quat_operator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

// SplitMix64; used to seed deterministic start vectors.
std::uint64_t mix64(std::uint64_t v) {
    v += 0x9e3779b97f4a7c15ULL;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
    return v ^ (v >> 31);
}

double unit_jitter(std::uint64_t key) {
    return static_cast<double>(mix64(key) >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

using SpMat = Eigen::SparseMatrix<double>;

SpMat to_real_sparse(const QuatSparseOperator& A) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(A.entry_count() * 16);
    for (const auto& [ij, q] : A.entries()) {
        const auto block = to_real_block(q);
        const int r0 = 4 * ij.first, c0 = 4 * ij.second;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (block[r][c] != 0.0)
                    trip.emplace_back(r0 + r, c0 + c, block[r][c]);
    }
    SpMat m(4 * A.size(), 4 * A.size());
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

QuatVector from_real(const Eigen::VectorXd& x) {
    QuatVector v(static_cast<std::size_t>(x.size() / 4));
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = Quaternion(x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]);
    return v;
}

Eigen::VectorXd to_real(const QuatVector& v) {
    Eigen::VectorXd x(4 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        x[4 * i] = v[i].w;
        x[4 * i + 1] = v[i].x;
        x[4 * i + 2] = v[i].y;
        x[4 * i + 3] = v[i].z;
    }
    return x;
}

// Removes the quaternionic span of the (normalized) deflation set from v.
void deflate(QuatVector& v, const std::vector<QuatVector>& basis,
             const std::vector<double>& weights) {
    for (const auto& u : basis) {
        const Quaternion c = inner(u, v, weights);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] -= u[i] * c;
    }
}

EigenPair solve_deflated(const QuatSparseOperator& A,
                         const std::vector<double>& weights,
                         const EigenOptions& opts,
                         const std::vector<QuatVector>& deflated) {
    const int n = A.size();
    if (!A.hermitian() || !A.storage_is_hermitian())
        throw InputError("smallest_eigenpair: operator is not hermitian");
    if (static_cast<int>(weights.size()) != n)
        throw InputError("smallest_eigenpair: weight vector has wrong size");
    for (double w : weights)
        if (!(w > 0.0))
            throw InputError("smallest_eigenpair: weights must be positive");

    const SpMat B = to_real_sparse(A);
    Eigen::VectorXd mdiag(4 * n);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 4; ++c) mdiag[4 * i + c] = weights[i];

    const double wsum =
        std::accumulate(weights.begin(), weights.end(), 0.0);

    // Scale reference for shift perturbations on singular factorizations.
    double bscale = 0.0;
    for (const auto& [ij, q] : A.entries()) bscale = std::max(bscale, q.norm());
    if (bscale == 0.0) bscale = 1.0;

    auto m_norm = [&](const Eigen::VectorXd& x) {
        return std::sqrt(x.cwiseProduct(mdiag.cwiseProduct(x)).sum());
    };

    // Deterministic start vector: constant spinor plus seeded jitter.
    Eigen::VectorXd x;
    if (opts.initial_guess) {
        if (static_cast<int>(opts.initial_guess->size()) != n)
            throw InputError("smallest_eigenpair: initial guess has wrong size");
        x = to_real(*opts.initial_guess);
    } else {
        x.resize(4 * n);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < 4; ++c)
                x[4 * i + c] = (c == 0 ? 1.0 : 0.0) +
                               1e-2 * unit_jitter(opts.seed * 0x10001ULL +
                                                  static_cast<std::uint64_t>(4 * i + c));
    }

    auto reproject = [&](Eigen::VectorXd& v) {
        if (deflated.empty()) return;
        QuatVector q = from_real(v);
        deflate(q, deflated, weights);
        v = to_real(q);
    };

    reproject(x);
    double nx = m_norm(x);
    if (nx < 1e-300) {
        // Start vector vanished under deflation; reseed deterministically.
        for (int i = 0; i < 4 * n; ++i)
            x[i] = unit_jitter(opts.seed * 0x20003ULL + static_cast<std::uint64_t>(i));
        reproject(x);
        nx = m_norm(x);
    }
    x /= nx;

    Eigen::SparseLU<SpMat> lu;
    double sigma = 0.0;
    bool factored = false;
    int refactor_budget = 40;
    auto factorize = [&](double s) {
        SpMat shifted = B;
        if (s != 0.0) {
            SpMat mshift(4 * n, 4 * n);
            std::vector<Eigen::Triplet<double>> trip;
            trip.reserve(4 * n);
            for (int i = 0; i < 4 * n; ++i) trip.emplace_back(i, i, s * mdiag[i]);
            mshift.setFromTriplets(trip.begin(), trip.end());
            shifted -= mshift;
        }
        lu.compute(shifted);
        if (lu.info() == Eigen::Success) {
            sigma = s;
            factored = true;
            --refactor_budget;
            return true;
        }
        return false;
    };

    // A perfectly singular shift is resolved by a tiny perturbation.
    double s0 = 0.0, bump = 1e-13 * bscale;
    while (!factorize(s0)) {
        s0 = (s0 == 0.0 ? bump : s0 * 16.0);
        bump *= 16.0;
        if (refactor_budget < 0 || !std::isfinite(s0))
            throw SolveError("smallest_eigenpair: factorization failed", 0.0);
    }

    // Window of recent iterates with their B-images for Rayleigh-Ritz
    // extraction.  A single-vector Rayleigh quotient of a still-mixed
    // iterate can sit nearest an interior eigenvalue; shifting there locks
    // the iteration onto the wrong mode when the low spectrum is clustered.
    // The Ritz values of the window separate such clusters, so the
    // smallest-magnitude Ritz pair tracks the target mode and the shift is
    // updated only when the residual is small against the Ritz gap.
    constexpr int kWindow = 6;
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> window;

    double lambda = 0.0, residual = std::numeric_limits<double>::infinity();
    double prev_residual = residual;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        Eigen::VectorXd y = lu.solve(mdiag.cwiseProduct(x));
        if (!y.allFinite())
            throw SolveError("smallest_eigenpair: singular solve", residual);
        reproject(y);
        const double ny = m_norm(y);
        if (ny < 1e-300)
            throw SolveError("smallest_eigenpair: iterate collapsed", residual);
        y /= ny;
        window.emplace_back(y, B * y);
        if (static_cast<int>(window.size()) > kWindow)
            window.erase(window.begin());

        // W-orthonormal basis of the window, newest iterate first so it is
        // always retained; B-images follow the same combinations.
        std::vector<Eigen::VectorXd> V, BV;
        for (auto it = window.rbegin(); it != window.rend(); ++it) {
            Eigen::VectorXd v = it->first, bv = it->second;
            for (std::size_t j = 0; j < V.size(); ++j) {
                const double c = V[j].dot(mdiag.cwiseProduct(v));
                v -= c * V[j];
                bv -= c * BV[j];
            }
            const double nv = m_norm(v);
            if (nv < 1e-8) continue;  // numerically dependent direction
            V.push_back(v / nv);
            BV.push_back(bv / nv);
        }
        const int p = static_cast<int>(V.size());
        Eigen::MatrixXd H(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) H(i, j) = V[i].dot(BV[j]);
        H = 0.5 * (H + H.transpose()).eval();
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(H);
        int best = 0;
        for (int k = 1; k < p; ++k)
            if (std::abs(ritz.eigenvalues()[k]) <
                std::abs(ritz.eigenvalues()[best]))
                best = k;
        const Eigen::VectorXd z = ritz.eigenvectors().col(best);
        Eigen::VectorXd xr = z[0] * V[0], bxr = z[0] * BV[0];
        for (int k = 1; k < p; ++k) {
            xr += z[k] * V[k];
            bxr += z[k] * BV[k];
        }
        x = xr;

        lambda = x.dot(bxr);  // x is M-normalized
        const Eigen::VectorXd r = bxr - lambda * mdiag.cwiseProduct(x);
        residual = std::sqrt(r.cwiseQuotient(mdiag).dot(r));

        if (residual <= opts.tol) {
            QuatVector psi = from_real(x * std::sqrt(wsum));
            return {lambda, std::move(psi), residual, iter};
        }

        // Distance from the chosen Ritz value to the nearest one outside
        // its own residual ball (quaternionic multiplicity shows up as
        // coincident Ritz values, which do not indicate a cluster of
        // distinct modes).
        double gap = std::numeric_limits<double>::infinity();
        for (int k = 0; k < p; ++k) {
            const double d = std::abs(ritz.eigenvalues()[k] - lambda);
            if (k != best && d > residual) gap = std::min(gap, d);
        }

        // Shift to the Ritz value once plain iteration stops contracting,
        // but only when the pair is resolved from the rest of the window
        // spectrum; otherwise keep grinding with the current factorization.
        const bool stalled = iter >= 4 && residual > 0.3 * prev_residual;
        if (stalled && residual < 0.25 * gap && refactor_budget > 0 &&
            std::abs(lambda - sigma) > 1e-14 * std::max(1.0, std::abs(lambda))) {
            double s = lambda;
            double eps = 1e-12 * std::max(bscale, std::abs(lambda));
            while (!factorize(s)) {
                s += eps;
                eps *= 16.0;
                if (refactor_budget < 0)
                    break;  // keep the previous factorization
            }
        }
        prev_residual = residual;
    }
    std::ostringstream msg;
    msg << "smallest_eigenpair: no convergence in " << opts.max_iter
        << " iterations (last residual " << residual << ")";
    throw SolveError(msg.str(), residual);
}

}  // namespace

QuatVector QuatVector::right_scaled(const Quaternion& a) const {
    QuatVector out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = data[i] * a;
    return out;
}

Quaternion inner(const QuatVector& u, const QuatVector& v,
                 const std::vector<double>& weights) {
    if (u.size() != v.size() || u.size() != weights.size())
        throw InputError("inner: dimension mismatch");
    Quaternion s;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += (u[i].conj() * v[i]) * weights[i];
    return s;
}

double norm2(const QuatVector& v, const std::vector<double>& weights) {
    if (v.size() != weights.size())
        throw InputError("norm2: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += weights[i] * v[i].norm2();
    return s;
}

void QuatSparseOperator::add(int i, int j, const Quaternion& q) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw InputError("QuatSparseOperator::add: index out of range");
    if (q.is_zero()) return;
    auto accumulate = [this](int r, int c, const Quaternion& v) {
        auto [it, inserted] = entries_.try_emplace({r, c}, v);
        if (!inserted) {
            it->second += v;
            if (it->second.is_zero()) entries_.erase(it);
        }
    };
    if (hermitian_) {
        if (i == j) {
            if (q.imag().norm() != 0.0)
                throw InputError(
                    "QuatSparseOperator::add: hermitian diagonal must be real");
            accumulate(i, i, q);
        } else {
            accumulate(i, j, q);
            accumulate(j, i, q.conj());
        }
    } else {
        accumulate(i, j, q);
    }
}

void QuatSparseOperator::set(int i, int j, const Quaternion& q) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw InputError("QuatSparseOperator::set: index out of range");
    entries_.erase({i, j});
    if (hermitian_ && i != j) entries_.erase({j, i});
    add(i, j, q);
}

Quaternion QuatSparseOperator::entry(int i, int j) const {
    auto it = entries_.find({i, j});
    return it == entries_.end() ? Quaternion{} : it->second;
}

void QuatSparseOperator::prune() {
    for (auto it = entries_.begin(); it != entries_.end();)
        it = it->second.is_zero() ? entries_.erase(it) : std::next(it);
}

bool QuatSparseOperator::storage_is_hermitian() const {
    for (const auto& [ij, q] : entries_) {
        const Quaternion mirror = entry(ij.second, ij.first);
        const Quaternion qc = q.conj();
        if (mirror.w != qc.w || mirror.x != qc.x || mirror.y != qc.y ||
            mirror.z != qc.z)
            return false;
    }
    return true;
}

QuatVector QuatSparseOperator::apply(const QuatVector& v) const {
    if (static_cast<int>(v.size()) != n_)
        throw InputError("QuatSparseOperator::apply: dimension mismatch");
    QuatVector out(n_);
    for (const auto& [ij, q] : entries_)
        out[ij.first] += q * v[ij.second];
    return out;
}

std::vector<double> QuatSparseOperator::to_real_dense() const {
    const std::size_t dim = 4 * static_cast<std::size_t>(n_);
    std::vector<double> m(dim * dim, 0.0);
    for (const auto& [ij, q] : entries_) {
        const auto block = to_real_block(q);
        const std::size_t r0 = 4 * static_cast<std::size_t>(ij.first);
        const std::size_t c0 = 4 * static_cast<std::size_t>(ij.second);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                m[(r0 + r) * dim + (c0 + c)] = block[r][c];
    }
    return m;
}

EigenPair smallest_eigenpair(const QuatSparseOperator& A,
                             const std::vector<double>& weights,
                             const EigenOptions& opts) {
    return solve_deflated(A, weights, opts, {});
}

std::vector<EigenPair> low_spectrum(const QuatSparseOperator& A,
                                    const std::vector<double>& weights,
                                    int k, const EigenOptions& opts) {
    if (k < 1 || k > A.size())
        throw InputError("low_spectrum: k must lie in [1, n]");
    std::vector<EigenPair> out;
    std::vector<QuatVector> basis;
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (int j = 0; j < k; ++j) {
        EigenOptions o = opts;
        o.seed = opts.seed + static_cast<std::uint64_t>(j) * 0x9e37ULL;
        EigenPair p = solve_deflated(A, weights, o, basis);
        // Unit-normalized copy for deflation.
        QuatVector u = p.vector;
        const double nu = std::sqrt(norm2(u, weights));
        for (auto& q : u.data) q = q / nu;
        basis.push_back(std::move(u));
        out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::abs(a.value) < std::abs(b.value);
    });
    (void)wsum;
    return out;
}

}  // namespace spinwright
