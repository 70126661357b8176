// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/error.hpp"
#include "polyref/geom/hyperplane.hpp"
#include "polyref/geom/primitives.hpp"

#include <string>
#include <vector>

namespace polyref {

//! One half-space constraint: side·(ν·x − c) ≥ 0, side ∈ {+1, −1}.
struct HalfSpace {
    Hyperplane plane;
    int side = -1;

    bool contains(const Vec& x, double eps = tol::vertex) const {
        return side * plane.signed_distance(x) >= -eps;
    }
    Vec outward() const { return -side * plane.normal(); }
};

namespace detail {

// Calls f(indices) for every k-subset of {0..n-1}.
template <class F>
void for_each_subset(int n, int k, F&& f) {
    if (k > n || k <= 0) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline void push_unique(std::vector<Vec>& pts, const Vec& p, double eps = tol::vertex) {
    for (const auto& q : pts)
        if ((q - p).norm() <= eps) return;
    pts.push_back(p);
}

}  // namespace detail

/*!
 * Bounded convex polytope with nonempty interior, stored as a half-space list.
 * Vertices come from exhaustive N-subset intersection of the constraint planes.
 */
class ConvexPolytope {
public:
    static ConvexPolytope from_halfspaces(std::vector<HalfSpace> hs, std::string id = {}) {
        if (hs.empty()) throw InvariantError(id.empty() ? "polytope" : id, "no half-spaces");
        ConvexPolytope p;
        p.id_ = std::move(id);
        p.dim_ = hs.front().plane.dim();
        for (auto& h : hs) {
            if (h.plane.dim() != p.dim_) throw InvariantError(p.label(), "mixed dimensions");
            if (h.side != 1 && h.side != -1) throw InvariantError(p.label(), "side flag must be ±1");
            bool dup = false;
            for (const auto& e : p.halfspaces_)
                if (e.side == h.side && same_plane(e.plane, h.plane)) dup = true;
            if (!dup) p.halfspaces_.push_back(std::move(h));
        }
        p.enumerate_vertices();
        p.check_invariants();
        return p;
    }

    //! Convex hull of the given points (interior points are ignored).
    static ConvexPolytope from_vertices(const std::vector<Vec>& pts, std::string id = {}) {
        const std::string label = id.empty() ? "polytope" : id;
        if (pts.empty()) throw InvariantError(label, "no vertices");
        const int n = static_cast<int>(pts.front().size());
        std::vector<HalfSpace> hs;
        if (n == 2) {
            Polygon2 in;
            for (const auto& p : pts) in.emplace_back(p(0), p(1));
            const Polygon2 hull = convex_hull_2d(in);
            if (hull.size() < 3) throw InvariantError(label, "nonempty interior");
            for (const auto& h : halfplanes_of(hull)) {
                const Vec outward = h.normal;
                Hyperplane plane = Hyperplane::from_raw(outward, h.offset);
                const int side = plane.normal().dot(outward) > 0 ? -1 : 1;
                hs.push_back({plane, side});
            }
        } else if (n == 3) {
            const int m = static_cast<int>(pts.size());
            detail::for_each_subset(m, 3, [&](const std::vector<int>& t) {
                const Vec nrm = cross(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]);
                if (nrm.norm() < 1e-12) return;
                const Vec u = nrm.normalized();
                const double c = u.dot(pts[t[0]]);
                int above = 0, below = 0;
                for (const auto& p : pts) {
                    const double s = u.dot(p) - c;
                    if (s > 1e-10) ++above;
                    if (s < -1e-10) ++below;
                }
                if (above && below) return;
                if (!above && !below) return;  // all coplanar
                const Vec outward = below ? u : Vec(-u);
                HalfSpace h{Hyperplane::from_raw(outward, outward.dot(pts[t[0]])), 0};
                h.side = h.plane.normal().dot(outward) > 0 ? -1 : 1;
                for (const auto& e : hs)
                    if (e.side == h.side && same_plane(e.plane, h.plane)) return;
                hs.push_back(h);
            });
        } else {
            throw PreconditionError("polytopes are supported in dimensions 2 and 3 only");
        }
        return from_halfspaces(std::move(hs), std::move(id));
    }

    int dim() const { return dim_; }
    const std::string& id() const { return id_; }
    std::string label() const { return id_.empty() ? "polytope" : id_; }
    const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
    const std::vector<Vec>& vertices() const { return vertices_; }

    bool contains(const Vec& x, double eps = tol::vertex) const {
        for (const auto& h : halfspaces_)
            if (!h.contains(x, eps)) return false;
        return true;
    }
    //! Strict interior with margin eps.
    bool interior_contains(const Vec& x, double eps = tol::vertex) const {
        for (const auto& h : halfspaces_)
            if (h.side * h.plane.signed_distance(x) <= eps) return false;
        return true;
    }

    //! Facet polygons: vertices on each supporting plane, ordered (2 in 2D, CCW in 3D).
    struct Facet {
        HalfSpace halfspace;
        std::vector<Vec> vertices;
    };
    std::vector<Facet> facets() const {
        std::vector<Facet> out;
        for (const auto& h : halfspaces_) {
            std::vector<Vec> on;
            for (const auto& v : vertices_)
                if (h.plane.contains(v, 1e-9)) on.push_back(v);
            if (static_cast<int>(on.size()) < dim_) continue;
            if (dim_ == 2) {
                const Vec t = h.plane.frame().col(0);
                std::sort(on.begin(), on.end(), [&](const Vec& a, const Vec& b) { return t.dot(a) < t.dot(b); });
                out.push_back({h, {on.front(), on.back()}});
            } else {
                auto ordered = order_coplanar(on, h.outward());
                if (matrix_rank(stack_diffs(ordered), 1e-9) < 2) continue;
                out.push_back({h, ordered});
            }
        }
        return out;
    }

    //! 2D only: CCW vertex cycle.
    Polygon2 polygon() const {
        Polygon2 pts;
        for (const auto& v : vertices_) pts.emplace_back(v(0), v(1));
        return convex_hull_2d(pts);
    }

    double distance(const Vec& x) const {
        if (contains(x, 0.0)) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : facets()) best = std::min(best, convex_piece_distance({x}, f.vertices));
        return best;
    }

    ConvexPolytope transformed(const Isometry& t, std::string id = {}) const {
        std::vector<HalfSpace> hs;
        for (const auto& h : halfspaces_) {
            // Inside region side·(ν·x − c) ≥ 0 maps to the same inequality for Qν.
            const Vec n = t.apply_direction(h.plane.normal());
            const double c = h.plane.offset() + n.dot(t.shift);
            Hyperplane img = Hyperplane::from_raw(n, c);
            const int side = img.normal().dot(n) > 0 ? h.side : -h.side;
            hs.push_back({img, side});
        }
        return from_halfspaces(std::move(hs), id.empty() ? id_ : std::move(id));
    }

    //! Same point set: vertex sets agree within eps.
    bool same_shape(const ConvexPolytope& o, double eps = 1e-7) const {
        if (o.vertices_.size() != vertices_.size()) return false;
        for (const auto& v : vertices_) {
            bool found = false;
            for (const auto& w : o.vertices_)
                if ((v - w).norm() <= eps) found = true;
            if (!found) return false;
        }
        return true;
    }

private:

    static Mat stack_diffs(const std::vector<Vec>& pts) {
        Mat m(pts.front().size(), pts.size() - 1);
        for (std::size_t i = 1; i < pts.size(); ++i) m.col(i - 1) = pts[i] - pts[0];
        return m;
    }

    void enumerate_vertices() {
        const int m = static_cast<int>(halfspaces_.size());
        detail::for_each_subset(m, dim_, [&](const std::vector<int>& idx) {
            Mat a(dim_, dim_);
            Vec b(dim_);
            for (int r = 0; r < dim_; ++r) {
                a.row(r) = halfspaces_[idx[r]].plane.normal().transpose();
                b(r) = halfspaces_[idx[r]].plane.offset();
            }
            Eigen::FullPivLU<Mat> lu(a);
            if (lu.rank() < dim_) return;
            const Vec x = lu.solve(b);
            if (!x.allFinite() || !contains(x)) return;
            detail::push_unique(vertices_, x);
        });
        std::sort(vertices_.begin(), vertices_.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
    }

    void check_invariants() const {
        const std::string who = label();
        if (static_cast<int>(vertices_.size()) < dim_ + 1) throw InvariantError(who, "nonempty interior");
        Mat diffs = stack_diffs(vertices_);
        if (matrix_rank(diffs, 1e-9) < dim_) throw InvariantError(who, "nonempty interior");
        if (!bounded()) throw InvariantError(who, "bounded");
        for (const auto& v : vertices_)
            if (!contains(v, tol::vertex)) throw InvariantError(who, "vertex violates a half-space");
    }

    // Recession cone {y : outward_i·y ≤ 0} must be {0}.  With spanning normals
    // the cone is pointed, so a nonzero cone has an extreme ray on N−1 active planes.
    bool bounded() const {
        Mat normals(halfspaces_.size(), dim_);
        for (std::size_t i = 0; i < halfspaces_.size(); ++i) normals.row(i) = halfspaces_[i].outward().transpose();
        if (matrix_rank(normals) < dim_) return false;
        bool unbounded = false;
        const int m = static_cast<int>(halfspaces_.size());
        detail::for_each_subset(m, dim_ - 1, [&](const std::vector<int>& idx) {
            if (unbounded) return;
            Mat a(dim_ - 1, dim_);
            for (int r = 0; r < dim_ - 1; ++r) a.row(r) = normals.row(idx[r]);
            const Mat ns = null_space(a);
            if (ns.cols() != 1) return;
            for (double s : {1.0, -1.0}) {
                const Vec y = s * ns.col(0);
                if (((normals * y).array() <= 1e-12).all()) unbounded = true;
            }
        });
        return !unbounded;
    }

    std::string id_;
    int dim_ = 0;
    std::vector<HalfSpace> halfspaces_;
    std::vector<Vec> vertices_;
};

}  // namespace polyref
