// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/boundary.hpp"
#include "polyref/geom/polytope.hpp"
#include "polyref/raster.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polyref {

/*!
 * Screen cell: a bounded (N−1)-dimensional convex polygon inside its carrier
 * hyperplane, stored in the carrier's orthonormal frame.  In 2D the polygon
 * is an interval [lo, hi] along the frame direction.
 */
struct Cell {
    std::string id;
    Hyperplane carrier;
    Mat frame;                  // N × (N−1), orthonormal columns
    std::vector<Vec> polygon;   // local coordinates
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    std::optional<std::pair<BoundaryCondition, BoundaryCondition>> side_bcs;

    int dim() const { return carrier.dim(); }
    Vec origin() const { return carrier.foot(); }

    static Cell from_points(const std::vector<Vec>& pts, BoundaryCondition bc, std::string id = {}) {
        const std::string who = id.empty() ? "cell" : id;
        if (pts.empty()) throw InvariantError(who, "no vertices");
        const int n = static_cast<int>(pts.front().size());
        Cell c;
        c.id = std::move(id);
        c.bc = bc;
        if (n == 2) {
            if (pts.size() != 2) throw InvariantError(who, "a 2D cell is a segment with two endpoints");
            const Vec d = pts[1] - pts[0];
            if (d.norm() <= tol::vertex) throw InvariantError(who, "nonempty relative interior");
            c.carrier = Hyperplane::through(pts[0], vec2(-d(1), d(0)));
        } else if (n == 3) {
            if (pts.size() < 3) throw InvariantError(who, "a 3D cell needs at least three vertices");
            Vec best = Vec::Zero(3);
            detail::for_each_subset(static_cast<int>(pts.size()), 3, [&](const std::vector<int>& t) {
                const Vec nrm = cross(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]);
                if (nrm.norm() > best.norm()) best = nrm;
            });
            if (best.norm() <= 1e-12) throw InvariantError(who, "nonempty relative interior");
            c.carrier = Hyperplane::through(pts[0], best);
            for (const auto& p : pts)
                if (!c.carrier.contains(p, tol::vertex)) throw InvariantError(who, "vertices must be coplanar");
        } else {
            throw PreconditionError("cells are supported in dimensions 2 and 3 only");
        }
        c.frame = c.carrier.frame();
        const Vec o = c.origin();
        if (n == 2) {
            double a = c.frame.col(0).dot(pts[0] - o), b = c.frame.col(0).dot(pts[1] - o);
            if (a > b) std::swap(a, b);
            c.polygon = {Vec::Constant(1, a), Vec::Constant(1, b)};
        } else {
            Polygon2 local;
            for (const auto& p : pts) {
                const Vec l = c.frame.transpose() * (p - o);
                local.emplace_back(l(0), l(1));
            }
            const Polygon2 hull = convex_hull_2d(local);
            if (hull.size() < 3 || std::abs(polygon_area(hull)) < 1e-12)
                throw InvariantError(who, "nonempty relative interior");
            for (const auto& h : hull) c.polygon.push_back(Vec(h));
        }
        return c;
    }

    std::vector<Vec> world_vertices() const {
        std::vector<Vec> out;
        const Vec o = origin();
        for (const auto& l : polygon) out.push_back(o + frame * l);
        return out;
    }

    Polygon2 local_polygon() const {
        Polygon2 p;
        for (const auto& l : polygon) p.emplace_back(l(0), l(1));
        return p;
    }

    Cell transformed(const Isometry& t) const {
        std::vector<Vec> pts;
        for (const auto& v : world_vertices()) pts.push_back(t.apply(v));
        Cell c = from_points(pts, bc, id);
        c.side_bcs = side_bcs;
        return c;
    }

    double distance(const Vec& x) const { return convex_piece_distance({x}, world_vertices()); }

    bool same_shape(const Cell& o, double eps = 1e-7) const {
        const auto a = world_vertices(), b = o.world_vertices();
        if (a.size() != b.size()) return false;
        for (const auto& v : a) {
            bool found = false;
            for (const auto& w : b)
                if ((v - w).norm() <= eps) found = true;
            if (!found) return false;
        }
        return true;
    }
};

//! Union of convex obstacle parts and screen cells.
struct PolyhedralScatterer {
    int dimension = 2;
    std::vector<ConvexPolytope> obstacles;
    std::vector<Cell> screens;

    bool empty() const { return obstacles.empty() && screens.empty(); }
    bool is_obstacle() const { return screens.empty() && !obstacles.empty(); }

    //! Closed-set membership.
    bool contains(const Vec& x, double eps = 1e-12) const {
        for (const auto& p : obstacles)
            if (p.contains(x, eps)) return true;
        for (const auto& c : screens)
            if (c.distance(x) <= eps) return true;
        return false;
    }

    double distance(const Vec& x) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : obstacles) best = std::min(best, p.distance(x));
        for (const auto& c : screens) best = std::min(best, c.distance(x));
        return best;
    }

    PolyhedralScatterer transformed(const Isometry& t) const {
        PolyhedralScatterer out{dimension, {}, {}};
        for (const auto& p : obstacles) out.obstacles.push_back(p.transformed(t));
        for (const auto& c : screens) out.screens.push_back(c.transformed(t));
        return out;
    }

    std::vector<Vec> all_vertices() const {
        std::vector<Vec> out;
        for (const auto& p : obstacles) out.insert(out.end(), p.vertices().begin(), p.vertices().end());
        for (const auto& c : screens) {
            auto w = c.world_vertices();
            out.insert(out.end(), w.begin(), w.end());
        }
        return out;
    }
};

//! R₀ = max vertex norm (0 for an empty scatterer).
inline double bounding_radius(const PolyhedralScatterer& s) {
    double r = 0.0;
    for (const auto& v : s.all_vertices()) r = std::max(r, v.norm());
    return r;
}

//! 2D boundary pieces: obstacle edges and screen segments.
struct Segment2 {
    P2 a, b;
    std::string source;
};

inline std::vector<Segment2> screen_segments_2d(const PolyhedralScatterer& s) {
    std::vector<Segment2> out;
    for (const auto& c : s.screens) {
        const auto w = c.world_vertices();
        out.push_back({P2(w[0](0), w[0](1)), P2(w[1](0), w[1](1)), c.id});
    }
    return out;
}

//! Blocks every cell of `r` that meets the scatterer (2D, coordinates mapped by `to_local`).
template <class ToLocal>
void rasterize(Raster2& r, const PolyhedralScatterer& s, ToLocal&& to_local) {
    for (const auto& p : s.obstacles) {
        Polygon2 poly;
        for (const auto& v : p.polygon()) poly.push_back(to_local(v));
        r.block_polygon(convex_hull_2d(poly));
    }
    for (const auto& seg : screen_segments_2d(s)) r.block_segment(to_local(seg.a), to_local(seg.b));
}

inline void rasterize(Raster2& r, const PolyhedralScatterer& s) {
    rasterize(r, s, [](const P2& p) { return p; });
}

/*!
 * Flood-fill connectivity of ℝ² ∖ Σ on a grid over B_{R₀+1}, seeded from every
 * free border cell.  False only when some free cell is unreachable.
 */
inline bool complement_connected_2d(const PolyhedralScatterer& s, double resolution) {
    if (s.dimension != 2) throw PreconditionError("complement_connected_2d requires a 2D scatterer");
    if (!(resolution > 0.0)) throw PreconditionError("resolution must be positive");
    Raster2 r = Raster2::centered(bounding_radius(s) + 1.0, resolution);
    rasterize(r, s);
    const auto seen = r.flood(r.border_cells());
    for (std::size_t k = 0; k < seen.size(); ++k)
        if (!r.blocked(k) && !seen[k]) return false;
    return true;
}

//! Grid resolution used when validating a 2D scene.
inline double default_connectivity_resolution(const PolyhedralScatterer& s) {
    return std::clamp(bounding_radius(s) / 200.0, 1e-3, 0.05);
}

/*!
 * Checks dimensions, internal disjointness of coplanar screen cells, and (2D)
 * connectivity of the complement.  Throws InvariantError naming the element.
 */
inline void validate(const PolyhedralScatterer& s, const std::string& name = "scatterer") {
    if (s.dimension != 2 && s.dimension != 3) throw InvariantError(name, "dimension must be 2 or 3");
    for (const auto& p : s.obstacles)
        if (p.dim() != s.dimension) throw InvariantError(p.id(), "dimension mismatch");
    for (const auto& c : s.screens)
        if (c.dim() != s.dimension) throw InvariantError(c.id, "dimension mismatch");
    for (std::size_t i = 0; i < s.screens.size(); ++i) {
        for (std::size_t j = i + 1; j < s.screens.size(); ++j) {
            const Cell& a = s.screens[i];
            const Cell& b = s.screens[j];
            if (!same_plane(a.carrier, b.carrier)) continue;
            const auto bw = b.world_vertices();
            double overlap = 0.0;
            if (s.dimension == 2) {
                double lo = a.frame.col(0).dot(bw[0] - a.origin()), hi = a.frame.col(0).dot(bw[1] - a.origin());
                if (lo > hi) std::swap(lo, hi);
                overlap = std::min(hi, a.polygon[1](0)) - std::max(lo, a.polygon[0](0));
            } else {
                Polygon2 pb;
                for (const auto& v : bw) {
                    const Vec l = a.frame.transpose() * (v - a.origin());
                    pb.emplace_back(l(0), l(1));
                }
                Polygon2 clipped = a.local_polygon();
                for (const auto& h : halfplanes_of(convex_hull_2d(pb))) clipped = clip_halfplane(clipped, h.normal, h.offset);
                overlap = std::abs(polygon_area(clipped));
            }
            if (overlap > 1e-9)
                throw InvariantError(a.id + "/" + b.id, "cells must be internally disjoint");
        }
    }
    if (s.dimension == 2 && !s.empty() && !complement_connected_2d(s, default_connectivity_resolution(s)))
        throw InvariantError(name, "complement must be connected");
}

}  // namespace polyref
