// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace polyref {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

namespace tol {
inline constexpr double unit = 1e-12;       // unit-length and orthonormality checks
inline constexpr double same_plane = 1e-9;  // hyperplane dedup (angle and offset)
inline constexpr double vertex = 1e-9;      // vertex feasibility, point dedup
inline constexpr double rank = 1e-9;        // singular-value threshold
inline constexpr double on_plane = 1e-10;
inline constexpr double vanishing = 1e-9;   // boundary modulus treated as zero
}  // namespace tol

inline constexpr double pi = 3.14159265358979323846;

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

inline Eigen::Vector3d as3(const Vec& v) { return Eigen::Vector3d(v(0), v(1), v(2)); }

inline Vec cross(const Vec& a, const Vec& b) {
    return as3(a).cross(as3(b));
}

//! Singular values of `a`, descending.
inline Vec singular_values(const Mat& a) {
    if (a.size() == 0) return Vec();
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues();
}

inline int matrix_rank(const Mat& a, double threshold = tol::rank) {
    const Vec s = singular_values(a);
    return static_cast<int>((s.array() > threshold).count());
}

//! Orthonormal basis (columns) of the null space of `a` (a has `cols` columns).
inline Mat null_space(const Mat& a, double threshold = tol::rank) {
    const auto n = a.cols();
    if (a.rows() == 0) return Mat::Identity(n, n);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const Vec s = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++r;
    return svd.matrixV().rightCols(n - r);
}

//! Orthonormal basis (columns) of the column span of `a`.
inline Mat column_span(const Mat& a, double threshold = tol::rank) {
    if (a.cols() == 0) return Mat(a.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
    const Vec s = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++r;
    return svd.matrixU().leftCols(r);
}

//! Orthonormal basis (columns) of v^⊥.
inline Mat orthogonal_complement(const Vec& v) {
    Mat row = v.transpose();
    return null_space(row, 1e-14);
}

//! Flip `v` so its first component with |v_i| > eps is positive.  Returns the sign applied.
inline double canonical_sign(const Vec& v, double eps = 1e-12) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > eps) return v(i) > 0 ? 1.0 : -1.0;
    }
    return 1.0;
}

//! Lexicographic comparison with a tolerance band for equal components.
inline bool lex_less(const Vec& a, const Vec& b, double eps = tol::vertex) {
    for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a(i) < b(i) - eps) return true;
        if (a(i) > b(i) + eps) return false;
    }
    return a.size() < b.size();
}

inline bool near(const Vec& a, const Vec& b, double eps) {
    return a.size() == b.size() && (a - b).norm() <= eps;
}

//! Euclidean norm of a stacked complex vector.
inline double modulus(const CVec& v) { return v.norm(); }

}  // namespace polyref
