// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/error.hpp"
#include "polyref/linalg.hpp"

#include <string>

namespace polyref {

/*!
 * Hyperplane {x : normal·x = offset} with a unit normal in canonical
 * orientation: the first nonzero component of the normal is positive, so
 * (ν, c) and (−ν, −c) describe the same value.  H⁺ is {normal·x > offset}.
 */
class Hyperplane {
public:
    Hyperplane() = default;

    //! `normal` must have unit length within 1e-12.
    Hyperplane(const Vec& normal, double offset) {
        const double len = normal.norm();
        if (std::abs(len - 1.0) > tol::unit)
            throw InvariantError("hyperplane", "normal must have unit length");
        init(normal / len, offset);
    }

    //! Accepts any nonzero normal and rescales it.
    static Hyperplane from_raw(const Vec& normal, double offset) {
        const double len = normal.norm();
        if (!(len > 0.0) || !std::isfinite(len))
            throw InvariantError("hyperplane", "normal must be nonzero and finite");
        Hyperplane h;
        h.init(normal / len, offset / len);
        return h;
    }

    static Hyperplane through(const Vec& point, const Vec& normal) {
        const Vec n = normal.normalized();
        return from_raw(n, n.dot(point));
    }

    int dim() const { return static_cast<int>(normal_.size()); }
    const Vec& normal() const { return normal_; }
    double offset() const { return offset_; }

    double signed_distance(const Vec& x) const { return normal_.dot(x) - offset_; }
    bool contains(const Vec& x, double eps = tol::on_plane) const {
        return std::abs(signed_distance(x)) <= eps;
    }
    Vec project(const Vec& x) const { return x - signed_distance(x) * normal_; }
    //! Closest point of the plane to the origin.
    Vec foot() const { return offset_ * normal_; }

    //! Orthonormal basis (columns) of the plane's direction space, deterministic.
    Mat frame() const {
        if (dim() == 2) {
            Vec t = vec2(-normal_(1), normal_(0));
            t *= canonical_sign(t);
            return t;
        }
        // Gram–Schmidt against fixed axes for reproducible frames.
        Mat out(dim(), dim() - 1);
        int filled = 0;
        for (int axis = 0; axis < dim() && filled < dim() - 1; ++axis) {
            Vec e = Vec::Zero(dim());
            e(axis) = 1.0;
            Vec v = e - e.dot(normal_) * normal_;
            for (int k = 0; k < filled; ++k) v -= v.dot(out.col(k)) * out.col(k);
            if (v.norm() < 1e-6) continue;
            v.normalize();
            out.col(filled++) = v;
        }
        return out;
    }

    std::string describe() const;

private:
    void init(const Vec& n, double c) {
        const double s = canonical_sign(n);
        normal_ = s * n;
        offset_ = s * c;
        if (std::abs(offset_) == 0.0) offset_ = 0.0;  // drop negative zero
    }

    Vec normal_;
    double offset_ = 0.0;
};

//! Equality under the dedup tolerance: angle(ν₁,ν₂) < tol and |c₁−c₂| < tol.
inline bool same_plane(const Hyperplane& a, const Hyperplane& b, double eps = tol::same_plane) {
    if (a.dim() != b.dim()) return false;
    // acos loses precision near 1; use the chord length instead.
    const double angle = 2.0 * std::asin(std::min(1.0, (a.normal() - b.normal()).norm() / 2.0));
    return angle < eps && std::abs(a.offset() - b.offset()) < eps;
}

//! Strict weak order on canonical planes (normal lexicographic, then offset).
inline bool plane_less(const Hyperplane& a, const Hyperplane& b) {
    for (int i = 0; i < a.dim(); ++i) {
        if (a.normal()(i) < b.normal()(i) - tol::same_plane) return true;
        if (a.normal()(i) > b.normal()(i) + tol::same_plane) return false;
    }
    return a.offset() < b.offset() - tol::same_plane;
}

inline std::string Hyperplane::describe() const {
    std::string s = "{";
    for (int i = 0; i < dim(); ++i) {
        if (i) s += ",";
        s += std::to_string(normal_(i));
    }
    return s + "}·x=" + std::to_string(offset_);
}

//! T_Π(x) = x − 2(ν·x − c)ν.
inline Vec reflect_point(const Hyperplane& plane, const Vec& x) {
    return x - 2.0 * plane.signed_distance(x) * plane.normal();
}

//! Linear part of T_Π applied to a direction.
inline Vec reflect_direction(const Hyperplane& plane, const Vec& v) {
    return v - 2.0 * plane.normal().dot(v) * plane.normal();
}

//! Image of `target` under the reflection in `mirror`, canonicalized.
inline Hyperplane reflect_hyperplane(const Hyperplane& mirror, const Hyperplane& target) {
    const Vec n = reflect_direction(mirror, target.normal());
    const Vec p = reflect_point(mirror, target.foot());
    return Hyperplane::from_raw(n, n.dot(p));
}

//! Rigid motion x ↦ linear·x + shift.
struct Isometry {
    Mat linear;
    Vec shift;

    static Isometry identity(int n) { return {Mat::Identity(n, n), Vec::Zero(n)}; }
    static Isometry reflection(const Hyperplane& p) {
        const Vec& n = p.normal();
        return {Mat::Identity(n.size(), n.size()) - 2.0 * n * n.transpose(), 2.0 * p.offset() * n};
    }

    Vec apply(const Vec& x) const { return linear * x + shift; }
    Vec apply_direction(const Vec& v) const { return linear * v; }
    Hyperplane apply(const Hyperplane& p) const {
        const Vec n = linear * p.normal();
        return Hyperplane::from_raw(n, p.offset() + n.dot(shift));
    }
    //! (*this ∘ other)(x) = this(other(x)).
    Isometry after(const Isometry& other) const {
        return {linear * other.linear, linear * other.shift + shift};
    }
    bool approx_equal(const Isometry& o, double eps = tol::same_plane) const {
        return (linear - o.linear).cwiseAbs().maxCoeff() < eps &&
               (shift - o.shift).cwiseAbs().maxCoeff() < eps;
    }
};

}  // namespace polyref
