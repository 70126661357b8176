// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/geom/scatterer.hpp"

#include <map>
#include <numeric>

namespace polyref {

/*!
 * A k-face of the boundary of a union of convex polytopes.  `pieces` is a
 * convex decomposition in world coordinates (a vertex is one point, an edge
 * two endpoints, a 2-face a list of planar polygons).
 */
struct Face {
    int dim = 0;
    Vec point;
    Mat directions;            // N × dim orthonormal basis of the affine span
    std::vector<Vec> normals;  // outward normals of incident (N−1)-faces
    std::vector<std::vector<Vec>> pieces;

    int normal_rank() const {
        if (normals.empty()) return 0;
        Mat m(normals.front().size(), normals.size());
        for (std::size_t i = 0; i < normals.size(); ++i) m.col(i) = normals[i];
        return matrix_rank(m, tol::rank);
    }
    double normal_sigma_min() const {
        if (normals.empty()) return 0.0;
        Mat m(normals.size(), normals.front().size());
        for (std::size_t i = 0; i < normals.size(); ++i) m.row(i) = normals[i].transpose();
        const Vec s = singular_values(m);
        return static_cast<Eigen::Index>(s.size()) < m.cols() ? 0.0 : s(s.size() - 1);
    }
};

struct FaceComplex {
    int dimension = 2;
    std::vector<std::vector<Face>> faces_by_dim;  // index k → k-faces

    const std::vector<Face>& operator[](int k) const { return faces_by_dim.at(k); }
    std::size_t count(int k) const { return faces_by_dim.at(k).size(); }
    const std::vector<Face>& vertices() const { return faces_by_dim.at(0); }

    //! Every vertex has incident normals spanning ℝᴺ.
    bool vertex_span_property() const {
        for (const auto& v : vertices())
            if (v.normal_rank() < dimension) return false;
        return true;
    }
};

namespace detail {

inline void add_normal(std::vector<Vec>& normals, const Vec& n) {
    for (const auto& m : normals)
        if ((m - n).norm() <= 1e-9) return;
    normals.push_back(n);
}

struct Interval {
    double lo, hi;
};

//! Union of closed intervals, merging overlaps and gaps ≤ eps.
inline std::vector<Interval> merge_intervals(std::vector<Interval> iv, double eps = tol::vertex) {
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& i : iv) {
        if (!out.empty() && i.lo <= out.back().hi + eps)
            out.back().hi = std::max(out.back().hi, i.hi);
        else
            out.push_back(i);
    }
    return out;
}

//! Key for grouping boundary pieces by carrier and outward orientation.
struct CarrierGroup {
    Hyperplane carrier;
    Vec outward;
};

inline std::size_t find_group(std::vector<CarrierGroup>& groups, const Hyperplane& h, const Vec& outward) {
    const Hyperplane canon = Hyperplane::from_raw(h.normal(), h.offset());
    for (std::size_t g = 0; g < groups.size(); ++g)
        if (same_plane(groups[g].carrier, canon) && groups[g].outward.dot(outward) > 0.0) return g;
    groups.push_back({canon, outward});
    return groups.size() - 1;
}

//! Vertices with incident normals, collected from (N−1)- or 1-faces endpoints.
inline std::vector<Face> collect_vertices(const std::vector<std::pair<Vec, std::vector<Vec>>>& ends) {
    std::vector<Face> verts;
    for (const auto& [p, normals] : ends) {
        Face* hit = nullptr;
        for (auto& v : verts)
            if ((v.point - p).norm() <= tol::vertex) hit = &v;
        if (!hit) {
            Face f;
            f.dim = 0;
            f.point = p;
            f.directions = Mat::Zero(p.size(), 0);
            f.pieces = {{p}};
            verts.push_back(f);
            hit = &verts.back();
        }
        for (const auto& n : normals) add_normal(hit->normals, n);
    }
    std::sort(verts.begin(), verts.end(), [](const Face& a, const Face& b) { return lex_less(a.point, b.point); });
    return verts;
}

//! Parameter t ∈ [0,1] of the intersection of segments p0p1 and q0q1, if any.
inline void segment_breaks(const P2& p0, const P2& p1, const P2& q0, const P2& q1, std::vector<double>& ts) {
    const P2 r = p1 - p0, s = q1 - q0;
    const double len2 = r.squaredNorm();
    const double den = cross2(r, s);
    if (std::abs(den) > 1e-14 * std::sqrt(len2 * s.squaredNorm())) {
        const double t = cross2(q0 - p0, s) / den;
        const double u = cross2(q0 - p0, r) / den;
        if (t > 0.0 && t < 1.0 && u >= -1e-12 && u <= 1.0 + 1e-12) ts.push_back(t);
        return;
    }
    for (const P2& q : {q0, q1}) {
        const double t = (q - p0).dot(r) / len2;
        if (t > 0.0 && t < 1.0 && std::abs(cross2(r, q - p0)) <= 1e-9 * std::sqrt(len2)) ts.push_back(t);
    }
}

inline FaceComplex faces_2d(const PolyhedralScatterer& s) {
    std::vector<CarrierGroup> groups;
    std::vector<std::vector<Interval>> intervals;
    std::vector<std::pair<P2, P2>> edges;
    for (const auto& p : s.obstacles) {
        const Polygon2 poly = p.polygon();
        for (std::size_t i = 0; i < poly.size(); ++i) edges.emplace_back(poly[i], poly[(i + 1) % poly.size()]);
    }
    for (std::size_t pi = 0; pi < s.obstacles.size(); ++pi) {
        const Polygon2 poly = s.obstacles[pi].polygon();
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const P2 a = poly[i], b = poly[(i + 1) % poly.size()];
            const P2 out = P2(b.y() - a.y(), a.x() - b.x()).normalized();
            std::vector<double> ts{0.0, 1.0};
            for (const auto& [q0, q1] : edges) segment_breaks(a, b, q0, q1, ts);
            std::sort(ts.begin(), ts.end());
            const Hyperplane carrier = Hyperplane::through(Vec(a), Vec(out));
            const std::size_t g = find_group(groups, carrier, Vec(out));
            if (intervals.size() < groups.size()) intervals.resize(groups.size());
            const Vec tau = groups[g].carrier.frame().col(0);
            const Vec origin = groups[g].carrier.foot();
            for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
                if ((ts[k + 1] - ts[k]) * (b - a).norm() <= tol::vertex) continue;
                const P2 m = a + 0.5 * (ts[k] + ts[k + 1]) * (b - a);
                const Vec probe = Vec(P2(m + 1e-7 * out));
                bool covered = false;
                for (std::size_t pj = 0; pj < s.obstacles.size() && !covered; ++pj)
                    covered = pj != pi && s.obstacles[pj].contains(probe, 0.0);
                if (covered) continue;
                double lo = tau.dot(Vec(P2(a + ts[k] * (b - a))) - origin);
                double hi = tau.dot(Vec(P2(a + ts[k + 1] * (b - a))) - origin);
                if (lo > hi) std::swap(lo, hi);
                intervals[g].push_back({lo, hi});
            }
        }
    }
    FaceComplex fc;
    fc.dimension = 2;
    fc.faces_by_dim.resize(2);
    std::vector<std::pair<Vec, std::vector<Vec>>> ends;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g >= intervals.size()) continue;
        const Vec tau = groups[g].carrier.frame().col(0);
        const Vec origin = groups[g].carrier.foot();
        for (const auto& iv : merge_intervals(intervals[g])) {
            Face e;
            e.dim = 1;
            e.point = origin + iv.lo * tau;
            e.directions = tau;
            e.normals = {groups[g].outward};
            e.pieces = {{origin + iv.lo * tau, origin + iv.hi * tau}};
            ends.push_back({e.pieces[0][0], e.normals});
            ends.push_back({e.pieces[0][1], e.normals});
            fc.faces_by_dim[1].push_back(std::move(e));
        }
    }
    fc.faces_by_dim[0] = collect_vertices(ends);
    return fc;
}

//! Local coordinates of the section P ∩ carrier as half-planes; nullopt when empty.
inline std::optional<std::vector<HalfPlane2>> section_halfplanes(const ConvexPolytope& p, const Vec& origin,
                                                                 const Mat& frame) {
    std::vector<HalfPlane2> out;
    for (const auto& h : p.halfspaces()) {
        // Inside: side·(ν·(o + F u) − c) ≥ 0  ⇔  a·u ≤ b with a = −side·Fᵀν.
        const Vec a = -h.side * (frame.transpose() * h.plane.normal());
        const double b = h.side * (h.plane.normal().dot(origin) - h.plane.offset());
        const double len = a.norm();
        if (len < 1e-12) {
            if (b < -tol::vertex) return std::nullopt;
            continue;
        }
        out.push_back({P2(a(0), a(1)) / len, b / len});
    }
    return out;
}

inline FaceComplex faces_3d(const PolyhedralScatterer& s) {
    struct Group {
        CarrierGroup key;
        Vec origin;
        Mat frame;
        std::vector<Polygon2> pieces;
    };
    std::vector<CarrierGroup> keys;
    std::vector<Group> groups;
    for (std::size_t pi = 0; pi < s.obstacles.size(); ++pi) {
        for (const auto& f : s.obstacles[pi].facets()) {
            const Vec out = f.halfspace.outward();
            const std::size_t g = find_group(keys, f.halfspace.plane, out);
            if (g == groups.size()) {
                const Hyperplane& c = keys[g].carrier;
                groups.push_back({keys[g], c.foot(), c.frame(), {}});
            }
            Group& grp = groups[g];
            Polygon2 local;
            for (const auto& v : f.vertices) {
                const Vec l = grp.frame.transpose() * (v - grp.origin);
                local.emplace_back(l(0), l(1));
            }
            std::vector<Polygon2> pieces{convex_hull_2d(local)};
            for (std::size_t pj = 0; pj < s.obstacles.size(); ++pj) {
                if (pj == pi) continue;
                double reach = -std::numeric_limits<double>::infinity();
                for (const auto& v : s.obstacles[pj].vertices()) reach = std::max(reach, out.dot(v - grp.origin) - out.dot(f.vertices[0] - grp.origin));
                if (reach <= tol::vertex) continue;  // pj lies behind the facet plane
                const auto cut = section_halfplanes(s.obstacles[pj], grp.origin, grp.frame);
                if (!cut) continue;
                std::vector<Polygon2> next;
                for (const auto& pc : pieces) {
                    auto d = convex_difference(pc, *cut, 1e-14);
                    next.insert(next.end(), d.begin(), d.end());
                }
                pieces = std::move(next);
            }
            // Keep the group's pieces internally disjoint.
            for (const auto& prev : grp.pieces) {
                const auto hp = halfplanes_of(prev);
                std::vector<Polygon2> next;
                for (const auto& pc : pieces) {
                    auto d = convex_difference(pc, hp, 1e-14);
                    next.insert(next.end(), d.begin(), d.end());
                }
                pieces = std::move(next);
            }
            for (auto& pc : pieces)
                if (std::abs(polygon_area(pc)) > 1e-12) grp.pieces.push_back(convex_hull_2d(pc));
        }
    }

    // 2-faces: connected components of pieces sharing a boundary segment of positive length.
    struct Atomic {
        Vec a, b;
        std::size_t face;
    };
    std::vector<Atomic> atomics;
    FaceComplex fc;
    fc.dimension = 3;
    fc.faces_by_dim.resize(3);
    for (const auto& grp : groups) {
        const std::size_t n = grp.pieces.size();
        if (n == 0) continue;
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        // Atomic boundary segments: piece edges split at every vertex of the group.
        struct Seg {
            P2 a, b, out;
            std::size_t piece;
        };
        std::vector<Seg> segs;
        for (std::size_t i = 0; i < n; ++i) {
            const Polygon2& poly = grp.pieces[i];
            for (std::size_t e = 0; e < poly.size(); ++e) {
                const P2 a = poly[e], b = poly[(e + 1) % poly.size()];
                if ((b - a).norm() <= tol::vertex) continue;
                const P2 out = P2(b.y() - a.y(), a.x() - b.x()).normalized();
                std::vector<double> ts{0.0, 1.0};
                for (const auto& other : grp.pieces)
                    for (std::size_t k = 0; k < other.size(); ++k)
                        segment_breaks(a, b, other[k], other[(k + 1) % other.size()], ts);
                std::sort(ts.begin(), ts.end());
                for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
                    if ((ts[k + 1] - ts[k]) * (b - a).norm() <= tol::vertex) continue;
                    segs.push_back({a + ts[k] * (b - a), a + ts[k + 1] * (b - a), out, i});
                }
            }
        }
        std::vector<bool> boundary(segs.size(), true);
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const P2 m = 0.5 * (segs[k].a + segs[k].b);
            const P2 probe = m + 1e-7 * segs[k].out;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == segs[k].piece || !convex_contains(grp.pieces[j], probe, 0.0)) continue;
                boundary[k] = false;
                parent[find(segs[k].piece)] = find(j);
            }
        }
        std::map<std::size_t, std::size_t> face_of_root;
        const std::size_t base = fc.faces_by_dim[2].size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = find(i);
            auto [it, fresh] = face_of_root.emplace(r, base + face_of_root.size());
            if (fresh) {
                Face f;
                f.dim = 2;
                f.point = grp.origin;
                f.directions = grp.frame;
                f.normals = {grp.key.outward};
                fc.faces_by_dim[2].push_back(std::move(f));
            }
            std::vector<Vec> world;
            for (const auto& p : grp.pieces[i]) world.push_back(grp.origin + grp.frame * Vec(p));
            fc.faces_by_dim[2][it->second].pieces.push_back(std::move(world));
        }
        for (std::size_t k = 0; k < segs.size(); ++k)
            if (boundary[k])
                atomics.push_back({grp.origin + grp.frame * Vec(segs[k].a), grp.origin + grp.frame * Vec(segs[k].b),
                                   face_of_root.at(find(segs[k].piece))});
    }

    // 1-faces: along each line, maximal runs with a constant set of incident 2-faces.
    std::vector<bool> used(atomics.size(), false);
    std::vector<std::pair<Vec, std::vector<Vec>>> ends;
    for (std::size_t i = 0; i < atomics.size(); ++i) {
        if (used[i]) continue;
        const Vec p0 = atomics[i].a;
        Vec dir = (atomics[i].b - atomics[i].a).normalized();
        dir *= canonical_sign(dir);
        auto on_line = [&](const Vec& x) { return ((x - p0) - (x - p0).dot(dir) * dir).norm() <= tol::vertex; };
        std::vector<std::size_t> members;
        std::vector<double> ts;
        for (std::size_t j = i; j < atomics.size(); ++j) {
            if (used[j] || !on_line(atomics[j].a) || !on_line(atomics[j].b)) continue;
            used[j] = true;
            members.push_back(j);
            ts.push_back((atomics[j].a - p0).dot(dir));
            ts.push_back((atomics[j].b - p0).dot(dir));
        }
        std::sort(ts.begin(), ts.end());
        std::vector<double> cuts;
        for (double t : ts)
            if (cuts.empty() || t - cuts.back() > tol::vertex) cuts.push_back(t);
        std::vector<std::size_t> run_faces;
        double run_lo = 0.0;
        auto flush = [&](double hi) {
            if (run_faces.empty()) return;
            Face e;
            e.dim = 1;
            e.point = p0 + run_lo * dir;
            e.directions = dir;
            for (std::size_t f : run_faces) add_normal(e.normals, fc.faces_by_dim[2][f].normals.front());
            e.pieces = {{p0 + run_lo * dir, p0 + hi * dir}};
            ends.push_back({e.pieces[0][0], e.normals});
            ends.push_back({e.pieces[0][1], e.normals});
            fc.faces_by_dim[1].push_back(std::move(e));
        };
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
            std::vector<std::size_t> here;
            for (std::size_t j : members) {
                double lo = (atomics[j].a - p0).dot(dir), hi = (atomics[j].b - p0).dot(dir);
                if (lo > hi) std::swap(lo, hi);
                if (lo < mid && mid < hi) here.push_back(atomics[j].face);
            }
            std::sort(here.begin(), here.end());
            here.erase(std::unique(here.begin(), here.end()), here.end());
            if (here != run_faces) {
                flush(cuts[k]);
                run_faces = here;
                run_lo = cuts[k];
            }
        }
        if (!cuts.empty()) flush(cuts.back());
    }
    fc.faces_by_dim[0] = collect_vertices(ends);
    return fc;
}

}  // namespace detail

//! Face complex of an obstacle (union of convex polytopes).
inline FaceComplex faces(const PolyhedralScatterer& s) {
    if (!s.screens.empty()) throw PreconditionError("faces requires an obstacle: scatterer contains screens");
    if (s.dimension == 2) return detail::faces_2d(s);
    if (s.dimension == 3) return detail::faces_3d(s);
    throw PreconditionError("faces supports dimensions 2 and 3 only");
}

inline bool faces_intersect(const Face& a, const Face& b, double eps = tol::vertex) {
    for (const auto& pa : a.pieces)
        for (const auto& pb : b.pieces)
            if (convex_piece_distance(pa, pb) <= eps) return true;
    return false;
}

inline double face_distance(const Face& a, const Face& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pa : a.pieces)
        for (const auto& pb : b.pieces) best = std::min(best, convex_piece_distance(pa, pb));
    return best;
}

//! δ: smallest distance between two disjoint faces of any dimensions; +∞ if none.
inline double min_face_distance(const FaceComplex& fc) {
    std::vector<const Face*> all;
    for (const auto& level : fc.faces_by_dim)
        for (const auto& f : level) all.push_back(&f);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const double d = face_distance(*all[i], *all[j]);
            if (d > tol::vertex) best = std::min(best, d);
        }
    return best;
}

inline double min_face_distance(const PolyhedralScatterer& s) { return min_face_distance(faces(s)); }

}  // namespace polyref
