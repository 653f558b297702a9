#pragma once

#include <array>
#include <cmath>

namespace spinwright {

/// Hamilton quaternion q = w + x i + y j + z k over double precision.
///
/// Spinor coefficient vectors form a right H-module: scalars multiply
/// spinors on the right (psi * a), operators act on the left.  All code in
/// this library follows that side convention.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_)
        : w(w_), x(x_), y(y_), z(z_) {}

    /// Pure-imaginary quaternion from a 3-vector (our model of R^3).
    static constexpr Quaternion pure(double x_, double y_, double z_) {
        return {0.0, x_, y_, z_};
    }
    static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
    static constexpr Quaternion zero() { return {}; }

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
    constexpr Quaternion operator+(const Quaternion& r) const {
        return {w + r.w, x + r.x, y + r.y, z + r.z};
    }
    constexpr Quaternion operator-(const Quaternion& r) const {
        return {w - r.w, x - r.x, y - r.y, z - r.z};
    }
    constexpr Quaternion operator*(double s) const {
        return {w * s, x * s, y * s, z * s};
    }
    constexpr Quaternion operator/(double s) const {
        return {w / s, x / s, y / s, z / s};
    }
    Quaternion& operator+=(const Quaternion& r) {
        w += r.w; x += r.x; y += r.y; z += r.z;
        return *this;
    }
    Quaternion& operator-=(const Quaternion& r) {
        w -= r.w; x -= r.x; y -= r.y; z -= r.z;
        return *this;
    }
    Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }

    constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
    constexpr double real() const { return w; }
    constexpr Quaternion imag() const { return {0.0, x, y, z}; }

    bool is_zero() const { return w == 0.0 && x == 0.0 && y == 0.0 && z == 0.0; }
};

constexpr Quaternion operator*(double s, const Quaternion& q) {
    return q * s;
}

/// Hamilton product (i j = k and cyclic); |pq| = |p||q| holds to rounding.
constexpr Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return quat_mul(p, q);
}

inline Quaternion inverse(const Quaternion& q) {
    const double n2 = q.norm2();
    return q.conj() / n2;
}

inline Quaternion normalized(const Quaternion& q) {
    return q / q.norm();
}

/// Scalar part of conj(p) * q, the Euclidean inner product on R^4.
constexpr double dot(const Quaternion& p, const Quaternion& q) {
    return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
}

/// Cross product of the vector parts (valid for pure quaternions).
constexpr Quaternion cross(const Quaternion& p, const Quaternion& q) {
    return {0.0,
            p.y * q.z - p.z * q.y,
            p.z * q.x - p.x * q.z,
            p.x * q.y - p.y * q.x};
}

/// 4x4 real matrix of left multiplication by q in the ordered basis
/// (1, i, j, k): to_real_block(q) * [p] = [q * p].  This is an algebra
/// homomorphism, and transposition realizes conjugation.
std::array<std::array<double, 4>, 4> to_real_block(const Quaternion& q);

/// Rotation of a pure quaternion v by the unit quaternion a: conj(a) v a.
inline Quaternion rotate(const Quaternion& a, const Quaternion& v) {
    return a.conj() * v * a;
}

}  // namespace spinwright
