// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/linalg.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace polyref {

using P2 = Eigen::Vector2d;
using Polygon2 = std::vector<P2>;

inline double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    const Vec ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

//! Closest distance between segments [p0,p1] and [q0,q1] in any dimension.
inline double segment_segment_distance(const Vec& p0, const Vec& p1, const Vec& q0, const Vec& q1) {
    const Vec d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
    const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    const double eps = 1e-300;
    double s = 0.0, t = 0.0;
    if (a <= eps && e <= eps) return r.norm();
    if (a <= eps) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= eps) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            s = denom > 1e-14 * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    // Parallel segments: the clamped pair above can miss the overlap, so also
    // test every endpoint against the other segment.
    double best = ((p0 + s * d1) - (q0 + t * d2)).norm();
    best = std::min({best, point_segment_distance(p0, q0, q1), point_segment_distance(p1, q0, q1),
                     point_segment_distance(q0, p0, p1), point_segment_distance(q1, p0, p1)});
    return best;
}

inline double cross2(const P2& a, const P2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline double polygon_area(const Polygon2& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) a += cross2(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * a;
}

//! Andrew's monotone chain; returns CCW hull without collinear points.
inline Polygon2 convex_hull_2d(Polygon2 pts, double eps = 1e-12) {
    std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const P2& a, const P2& b) { return (a - b).norm() < 1e-12; }),
              pts.end());
    if (pts.size() < 3) return pts;
    Polygon2 hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= eps) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= eps) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

//! Closed containment for a CCW convex polygon.
inline bool convex_contains(const Polygon2& poly, const P2& x, double eps = 1e-12) {
    if (poly.size() < 3) return false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const P2& a = poly[i];
        const P2& b = poly[(i + 1) % poly.size()];
        const P2 e = b - a;
        if (cross2(e, x - a) < -eps * std::max(1.0, e.norm())) return false;
    }
    return true;
}

//! Keep the part of a convex polygon with n·x ≤ c.
inline Polygon2 clip_halfplane(const Polygon2& poly, const P2& n, double c) {
    Polygon2 out;
    if (poly.empty()) return out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const P2& a = poly[i];
        const P2& b = poly[(i + 1) % poly.size()];
        const double da = n.dot(a) - c, db = n.dot(b) - c;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

struct HalfPlane2 {
    P2 normal;  // outward
    double offset;
};

//! Edges of a CCW convex polygon as outward half-planes.
inline std::vector<HalfPlane2> halfplanes_of(const Polygon2& poly) {
    std::vector<HalfPlane2> hp;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const P2& a = poly[i];
        const P2& b = poly[(i + 1) % poly.size()];
        P2 n(b.y() - a.y(), a.x() - b.x());
        const double len = n.norm();
        if (len < 1e-14) continue;
        n /= len;
        hp.push_back({n, n.dot(a)});
    }
    return hp;
}

//! Convex decomposition of `piece` minus the convex region bounded by `cut`.
inline std::vector<Polygon2> convex_difference(const Polygon2& piece, const std::vector<HalfPlane2>& cut,
                                               double min_area = 1e-14) {
    std::vector<Polygon2> out;
    Polygon2 remaining = piece;
    for (const auto& h : cut) {
        Polygon2 outside = clip_halfplane(remaining, -h.normal, -h.offset);
        if (std::abs(polygon_area(outside)) > min_area) out.push_back(std::move(outside));
        remaining = clip_halfplane(remaining, h.normal, h.offset);
        if (std::abs(polygon_area(remaining)) <= min_area) break;
    }
    return out;
}

//! Order coplanar 3D points counter-clockwise about `normal`, around their centroid.
inline std::vector<Vec> order_coplanar(std::vector<Vec> pts, const Vec& normal) {
    if (pts.size() < 3) return pts;
    Vec c = Vec::Zero(pts[0].size());
    for (const auto& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    Mat frame = orthogonal_complement(normal);
    Vec u = frame.col(0), v = as3(normal).cross(as3(u));
    std::sort(pts.begin(), pts.end(), [&](const Vec& a, const Vec& b) {
        return std::atan2((a - c).dot(v), (a - c).dot(u)) < std::atan2((b - c).dot(v), (b - c).dot(u));
    });
    return pts;
}

//! Distance from a point to a planar convex polygon (ordered vertices) in 3D.
inline double point_polygon_distance(const Vec& p, const std::vector<Vec>& poly) {
    if (poly.size() == 1) return (p - poly[0]).norm();
    if (poly.size() == 2) return point_segment_distance(p, poly[0], poly[1]);
    Vec n = cross(poly[1] - poly[0], poly[2] - poly[0]);
    for (std::size_t i = 2; n.norm() < 1e-12 && i + 1 < poly.size(); ++i)
        n = cross(poly[i] - poly[0], poly[i + 1] - poly[0]);
    n.normalize();
    const double h = (p - poly[0]).dot(n);
    const Vec q = p - h * n;
    bool inside = true;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec& a = poly[i];
        const Vec& b = poly[(i + 1) % poly.size()];
        if (cross(b - a, q - a).dot(n) < -1e-12) {
            inside = false;
            break;
        }
    }
    if (inside) return std::abs(h);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
    return best;
}

inline double segment_polygon_distance(const Vec& a, const Vec& b, const std::vector<Vec>& poly) {
    if (poly.size() < 3) {
        if (poly.size() == 1) return point_segment_distance(poly[0], a, b);
        return segment_segment_distance(a, b, poly[0], poly[1]);
    }
    Vec n = cross(poly[1] - poly[0], poly[2] - poly[0]);
    for (std::size_t i = 2; n.norm() < 1e-12 && i + 1 < poly.size(); ++i)
        n = cross(poly[i] - poly[0], poly[i + 1] - poly[0]);
    n.normalize();
    const double ha = (a - poly[0]).dot(n), hb = (b - poly[0]).dot(n);
    if ((ha <= 0.0 && hb >= 0.0) || (ha >= 0.0 && hb <= 0.0)) {
        if (std::abs(ha - hb) > 1e-300) {
            const Vec x = a + ha / (ha - hb) * (b - a);
            if (point_polygon_distance(x, poly) <= 1e-12) return 0.0;
        }
    }
    double best = std::min(point_polygon_distance(a, poly), point_polygon_distance(b, poly));
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, segment_segment_distance(a, b, poly[i], poly[(i + 1) % poly.size()]));
    return best;
}

/*!
 * Distance between two closed convex pieces, each given as a point (1 vertex),
 * a segment (2 vertices) or a planar convex polygon (ordered, ≥ 3 vertices).
 */
inline double convex_piece_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    if (a.size() > b.size()) return convex_piece_distance(b, a);
    if (a.size() == 1) {
        if (b.size() == 1) return (a[0] - b[0]).norm();
        if (b.size() == 2) return point_segment_distance(a[0], b[0], b[1]);
        return point_polygon_distance(a[0], b);
    }
    if (a.size() == 2) {
        if (b.size() == 2) return segment_segment_distance(a[0], a[1], b[0], b[1]);
        return segment_polygon_distance(a[0], a[1], b);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        best = std::min(best, segment_polygon_distance(a[i], a[(i + 1) % a.size()], b));
    for (std::size_t i = 0; i < b.size(); ++i)
        best = std::min(best, segment_polygon_distance(b[i], b[(i + 1) % b.size()], a));
    return best;
}

}  // namespace polyref
