// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/geom.hpp"

#include <variant>

namespace polyref {

struct FlatPoint {
    Vec point;
    Hyperplane plane;
    double clearance = 0.0;
    std::optional<BoundaryCondition> bc;
};

//! Throws InvariantError unless B_r(point) misses Σ and the point lies on its plane.
inline void check_flat_point(const PolyhedralScatterer& s, const FlatPoint& fp) {
    if (!(fp.clearance > 0.0)) throw InvariantError("flat_point", "clearance must be positive");
    if (!fp.plane.contains(fp.point, tol::on_plane)) throw InvariantError("flat_point", "point must lie on its plane");
    if (s.distance(fp.point) < fp.clearance * (1.0 - 1e-12))
        throw InvariantError("flat_point", "ball of radius clearance must not meet the scatterer");
}

//! Open interval (lo, hi) of Π, parametrised as foot + t·τ with τ the plane's frame direction.
struct LineComponent {
    Hyperplane plane;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    Vec tangent() const { return plane.frame().col(0); }
    Vec at(double t) const { return plane.foot() + t * tangent(); }
    double param(const Vec& x) const { return tangent().dot(x - plane.foot()); }
    bool bounded_below() const { return std::isfinite(lo); }
    bool bounded_above() const { return std::isfinite(hi); }
};

namespace detail {

//! Parameter range of a convex polygon's intersection with the line foot + t·τ, if nonempty.
inline std::optional<Interval> clip_line(const ConvexPolytope& p, const Vec& foot, const Vec& tau) {
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (const auto& h : p.halfspaces()) {
        // side·(ν·(foot + tτ) − c) ≥ 0
        const double a = h.side * h.plane.normal().dot(tau);
        const double b = h.side * h.plane.signed_distance(foot);
        if (std::abs(a) < 1e-14) {
            if (b < -tol::on_plane) return std::nullopt;
            continue;
        }
        const double t = -b / a;
        if (a > 0) lo = std::max(lo, t);
        else hi = std::min(hi, t);
    }
    if (lo > hi + tol::on_plane) return std::nullopt;
    return Interval{lo, std::max(lo, hi)};
}

}  // namespace detail

//! Closed parameter intervals of Π ∩ Σ (2D).
inline std::vector<detail::Interval> plane_hits(const PolyhedralScatterer& s, const Hyperplane& plane) {
    const Vec foot = plane.foot(), tau = plane.frame().col(0);
    std::vector<detail::Interval> out;
    for (const auto& p : s.obstacles)
        if (auto iv = detail::clip_line(p, foot, tau)) out.push_back(*iv);
    for (const auto& c : s.screens) {
        const auto w = c.world_vertices();
        const double da = plane.signed_distance(w[0]), db = plane.signed_distance(w[1]);
        const double ta = tau.dot(w[0] - foot), tb = tau.dot(w[1] - foot);
        if (std::abs(da) <= tol::on_plane && std::abs(db) <= tol::on_plane) {
            out.push_back({std::min(ta, tb), std::max(ta, tb)});
        } else if (std::abs(da) <= tol::on_plane) {
            out.push_back({ta, ta});
        } else if (std::abs(db) <= tol::on_plane) {
            out.push_back({tb, tb});
        } else if ((da < 0) != (db < 0)) {
            const double t = ta + da / (da - db) * (tb - ta);
            out.push_back({t, t});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    return out;
}

//! Component S of G ∩ Π containing x (2D, exact interval arithmetic).
inline LineComponent line_component(const PolyhedralScatterer& s, const Hyperplane& plane, const Vec& x) {
    if (s.dimension != 2) throw PreconditionError("line_component is 2D only");
    if (s.contains(x, 0.0)) throw PreconditionError("query point lies on the scatterer");
    LineComponent lc{plane};
    const double tx = lc.param(x);
    for (const auto& iv : plane_hits(s, plane)) {
        if (iv.hi < tx) lc.lo = std::max(lc.lo, iv.hi);
        else if (iv.lo > tx) lc.hi = std::min(lc.hi, iv.lo);
        else throw PreconditionError("query point lies on the scatterer");
    }
    return lc;
}

/*!
 * E = E⁺ ∪ E⁻ ∪ S on a grid aligned with Π: column i covers
 * s ∈ [s_lo + i·h, s_lo + (i+1)·h] along τ, row j covers ν·z − c ∈ [−H + j·h, −H + (j+1)·h].
 * Rows are symmetric about Π, so T_Π maps row j to row 2·nh − 1 − j.
 */
struct SymmetryRegion {
    Hyperplane plane;
    LineComponent S;
    bool unbounded = false;
    bool exact = false;  // decided without a grid (far seed)
    double resolution = 0.0;
    double s_lo = 0.0;
    double half_height = 0.0;
    int ns = 0, nh = 0;
    std::vector<std::uint8_t> in_E;  // ns × 2·nh, row-major by row

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * ns + i; }
    int mirror_row(int j) const { return 2 * nh - 1 - j; }
    bool contains_cell(int i, int j) const {
        return i >= 0 && j >= 0 && i < ns && j < 2 * nh && in_E[index(i, j)] != 0;
    }
    Vec world(double s, double h) const {
        return plane.foot() + s * plane.frame().col(0) + h * plane.normal();
    }
    std::pair<double, double> local(const Vec& z) const {
        return {plane.frame().col(0).dot(z - plane.foot()), plane.signed_distance(z)};
    }
    std::pair<int, int> cell_of(const Vec& z) const {
        const auto [s, h] = local(z);
        return {static_cast<int>(std::floor((s - s_lo) / resolution)),
                static_cast<int>(std::floor((h + half_height) / resolution))};
    }
    bool contains_point(const Vec& z) const {
        const auto [i, j] = cell_of(z);
        return contains_cell(i, j);
    }
    Vec cell_center(int i, int j) const {
        return world(s_lo + (i + 0.5) * resolution, -half_height + (j + 0.5) * resolution);
    }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(std::count(in_E.begin(), in_E.end(), std::uint8_t{1}));
    }
};

namespace detail {

inline P2 frame_coords(const Hyperplane& plane, const Vec& p, bool mirrored) {
    const Vec o = plane.foot();
    const double h = plane.normal().dot(p - o);
    return P2(plane.frame().col(0).dot(p - o), mirrored ? -h : h);
}

}  // namespace detail

/*!
 * Builds E(x) for a flat point.  G± are flood fills of G ∖ S from the two
 * seeds x ± (r/2)ν, where a fill may cross Π only through grid edges that miss
 * both S and Σ.  E⁺ is the fill of G⁺ ∩ T(G⁻) from the upper seed; E⁻ = T(E⁺).
 * Unbounded when E⁺ reaches a point farther than R₀ + |c| from the foot of Π
 * (beyond that radius the half-spaces are free of Σ ∪ T(Σ)), or when ‖x‖ > R₀ + 1.
 */
inline SymmetryRegion build_E(const PolyhedralScatterer& s, const FlatPoint& fp, double resolution) {
    if (s.dimension != 2) throw PreconditionError("build_E is 2D only");
    if (!(resolution > 0.0)) throw PreconditionError("resolution must be positive");
    check_flat_point(s, fp);
    SymmetryRegion reg;
    reg.plane = fp.plane;
    reg.S = line_component(s, fp.plane, fp.point);
    reg.resolution = resolution;
    const double r0 = bounding_radius(s);
    if (fp.point.norm() > r0 + 1.0) {
        reg.unbounded = true;
        reg.exact = true;
        return reg;
    }
    const double rho = r0 + std::abs(fp.plane.offset());
    reg.nh = static_cast<int>(std::ceil((rho + 2.0) / resolution));
    reg.half_height = reg.nh * resolution;
    reg.ns = 2 * reg.nh;
    reg.s_lo = -reg.half_height;

    Raster2 grid(P2(reg.s_lo, -reg.half_height), resolution, reg.ns, 2 * reg.nh);
    rasterize(grid, s, [&](const P2& p) { return detail::frame_coords(fp.plane, Vec(p), false); });

    // Grid edges on Π that a fill may cross.
    std::vector<detail::Interval> closed_off = plane_hits(s, fp.plane);
    closed_off.push_back({reg.S.lo, reg.S.hi});
    std::vector<std::uint8_t> crossing(reg.ns, 1);
    for (int i = 0; i < reg.ns; ++i) {
        const double a = reg.s_lo + i * resolution, b = a + resolution;
        for (const auto& iv : closed_off)
            if (iv.lo <= b && iv.hi >= a) crossing[i] = 0;
    }
    const int mid = reg.nh;
    auto step = [&](std::size_t from, std::size_t to) {
        const int jf = grid.row(from), jt = grid.row(to);
        if ((jf < mid) == (jt < mid)) return true;
        return crossing[grid.col(from)] != 0;
    };
    auto seed_cell = [&](double h) -> std::size_t {
        const auto [s_x, h_x] = reg.local(fp.point);
        (void)h_x;
        const auto [i, j] = grid.cell_of(P2(s_x, h));
        if (!grid.in_range(i, j) || grid.blocked(grid.index(i, j)))
            throw ComputationError("grid too coarse for the flat point clearance; use a finer resolution");
        return grid.index(i, j);
    };
    const std::size_t up = seed_cell(0.5 * fp.clearance), down = seed_cell(-0.5 * fp.clearance);
    if (grid.row(up) < mid || grid.row(down) >= mid)
        throw ComputationError("grid too coarse for the flat point clearance; use a finer resolution");
    const auto gp = grid.flood({up}, step);
    const auto gm = grid.flood({down}, step);
    auto mirror = [&](std::size_t k) { return grid.index(grid.col(k), reg.mirror_row(grid.row(k))); };
    auto in_pair = [&](std::size_t k) { return gp[k] && gm[mirror(k)]; };
    if (!in_pair(up)) throw ComputationError("upper seed is not in G+ ∩ T(G−) at this resolution");
    const auto ep = grid.flood({up}, [&](std::size_t from, std::size_t to) { return step(from, to) && in_pair(to); });

    reg.in_E.assign(ep.size(), 0);
    const double far2 = rho * rho;
    for (std::size_t k = 0; k < ep.size(); ++k) {
        if (!ep[k]) continue;
        reg.in_E[k] = 1;
        reg.in_E[mirror(k)] = 1;
        const P2 c = grid.center(k);
        if (c.squaredNorm() > far2) reg.unbounded = true;
    }
    return reg;
}

struct TraceStep {
    FlatPoint flat_point;
    SymmetryRegion region;
};

struct ReflectionWitness {
    Hyperplane plane;
    std::vector<TraceStep> log;
    double escape_radius = 0.0;
};

struct TraceFailure {
    std::string reason;
    std::vector<TraceStep> log;
};

using TraceResult = std::variant<ReflectionWitness, TraceFailure>;

//! R such that Π ∖ B̄_R misses Σ ∪ T_Π(Σ) (T_Π fixes Π, so only Σ ∩ Π matters).
inline double witness_radius(const PolyhedralScatterer& s, const Hyperplane& plane) {
    const Vec foot = plane.foot(), tau = plane.frame().col(0);
    double r = 0.0;
    for (const auto& iv : plane_hits(s, plane)) {
        r = std::max(r, (foot + iv.lo * tau).norm());
        r = std::max(r, (foot + iv.hi * tau).norm());
    }
    return r;
}

namespace detail {

struct BoundaryPiece {
    Vec a, b;
    std::optional<BoundaryCondition> bc;
};

inline std::vector<BoundaryPiece> boundary_pieces_2d(const PolyhedralScatterer& s) {
    std::vector<BoundaryPiece> out;
    for (const auto& p : s.obstacles)
        for (const auto& f : p.facets()) out.push_back({f.vertices[0], f.vertices[1], std::nullopt});
    for (const auto& c : s.screens) {
        const auto w = c.world_vertices();
        out.push_back({w[0], w[1], c.bc});
    }
    return out;
}

//! Smallest distance between two disjoint boundary features (edges, cells and their endpoints).
inline double feature_distance_2d(const PolyhedralScatterer& s) {
    if (s.is_obstacle()) return min_face_distance(s);
    std::vector<std::vector<Vec>> pieces;
    for (const auto& bp : boundary_pieces_2d(s)) {
        pieces.push_back({bp.a, bp.b});
        pieces.push_back({bp.a});
        pieces.push_back({bp.b});
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            const double d = convex_piece_distance(pieces[i], pieces[j]);
            if (d > tol::vertex) best = std::min(best, d);
        }
    return best;
}

}  // namespace detail

//! min(δ, r)/8 clamped to [1e-4, 0.1].
inline double default_trace_resolution(const PolyhedralScatterer& s, const FlatPoint& fp) {
    const double delta = detail::feature_distance_2d(s);
    return std::clamp(std::min(delta, fp.clearance) / 8.0, 1e-4, 0.1);
}

/*!
 * Next flat point on ∂E ∖ Σ: samples of reflected boundary pieces T_Π(C)
 * that touch E, carry a plane other than Π, have clearance ≥ 2√2·h and move
 * strictly forward along `escape`.  Largest escape·y wins; ties go to the
 * lexicographically smallest point.
 */
inline std::optional<FlatPoint> next_flat_point(const PolyhedralScatterer& s, const SymmetryRegion& reg,
                                                const FlatPoint& current, const Vec& escape) {
    const double h = reg.resolution;
    const double floor = 2.0 * std::sqrt(2.0) * h;
    std::optional<FlatPoint> best;
    double best_score = escape.dot(current.point) + h;
    for (const auto& piece : detail::boundary_pieces_2d(s)) {
        const Vec a = reflect_point(reg.plane, piece.a), b = reflect_point(reg.plane, piece.b);
        const double len = (b - a).norm();
        if (len <= tol::vertex) continue;
        const Hyperplane carrier = Hyperplane::through(a, vec2(a(1) - b(1), b(0) - a(0)));
        if (same_plane(carrier, reg.plane)) continue;
        const Vec n = carrier.normal();
        const int count = std::max(2, static_cast<int>(std::ceil(len / h)));
        for (int k = 0; k < count; ++k) {
            const Vec y = a + (k + 0.5) / count * (b - a);
            const double score = escape.dot(y);
            if (score < best_score - 1e-12) continue;
            const double r = std::min({s.distance(y), (y - a).norm(), (y - b).norm()});
            if (r < floor) continue;
            if (!reg.contains_point(y + 1.5 * h * n) && !reg.contains_point(y - 1.5 * h * n)) continue;
            if (best && std::abs(score - best_score) <= 1e-12 && !lex_less(y, best->point, 1e-12)) continue;
            best = FlatPoint{y, carrier, r, piece.bc};
            best_score = score;
        }
    }
    return best;
}

//! Iterates build_E / next_flat_point until E is unbounded or the cap is reached.
inline TraceResult trace_to_reflection(const PolyhedralScatterer& s, const FlatPoint& start, int max_iters = 32,
                                       std::optional<double> resolution = std::nullopt) {
    if (s.dimension != 2) throw PreconditionError("trace_to_reflection is 2D only");
    if (max_iters < 1) throw PreconditionError("max_iters must be at least 1");
    const double h = resolution ? *resolution : default_trace_resolution(s, start);
    const Vec escape = start.point.norm() > 1e-12 ? Vec(start.point.normalized()) : vec2(1.0, 0.0);
    std::vector<TraceStep> log;
    FlatPoint fp = start;
    for (int it = 0; it < max_iters; ++it) {
        log.push_back({fp, build_E(s, fp, h)});
        const SymmetryRegion& reg = log.back().region;
        if (reg.unbounded) return ReflectionWitness{reg.plane, std::move(log), witness_radius(s, reg.plane)};
        const auto next = next_flat_point(s, reg, fp, escape);
        if (!next) return TraceFailure{"no admissible next flat point on the boundary of E at this resolution", std::move(log)};
        fp = *next;
    }
    return TraceFailure{"iteration cap reached", std::move(log)};
}

struct SeedResult {
    FlatPoint flat_point;
    bool swapped = false;  // the point lies on ∂Σ instead of ∂Σ′
};

namespace detail {

inline std::optional<FlatPoint> seed_on(const PolyhedralScatterer& field_side, const PolyhedralScatterer& other) {
    PolyhedralScatterer joint{2, field_side.obstacles, field_side.screens};
    joint.obstacles.insert(joint.obstacles.end(), other.obstacles.begin(), other.obstacles.end());
    joint.screens.insert(joint.screens.end(), other.screens.begin(), other.screens.end());
    const double res = default_connectivity_resolution(joint);
    Raster2 grid = Raster2::centered(bounding_radius(joint) + 1.0, res);
    rasterize(grid, joint);
    const auto outside = grid.flood(grid.border_cells());
    auto reached = [&](const Vec& z) {
        const auto [i, j] = grid.cell_of(P2(z(0), z(1)));
        return grid.in_range(i, j) && outside[grid.index(i, j)] != 0;
    };
    std::optional<FlatPoint> best;
    constexpr int samples = 64;
    for (const auto& piece : boundary_pieces_2d(other)) {
        const double len = (piece.b - piece.a).norm();
        if (len <= tol::vertex) continue;
        const Vec n = vec2(piece.a(1) - piece.b(1), piece.b(0) - piece.a(0)).normalized();
        for (int k = 1; k < samples; ++k) {
            const Vec y = piece.a + (static_cast<double>(k) / samples) * (piece.b - piece.a);
            const double r = std::min({field_side.distance(y), (y - piece.a).norm(), (y - piece.b).norm()});
            if (r <= 1e-9) continue;
            if (!reached(y + 1.5 * res * n) && !reached(y - 1.5 * res * n)) continue;
            if (best && (r < best->clearance - 1e-12 ||
                         (std::abs(r - best->clearance) <= 1e-12 && !lex_less(y, best->point, 1e-12))))
                continue;
            best = FlatPoint{y, Hyperplane::through(y, n), r, piece.bc};
        }
    }
    return best;
}

}  // namespace detail

/*!
 * A flat point on ∂Σ′ ∖ Σ facing the unbounded component of the joint
 * complement, with maximal clearance; roles are swapped when ∂Σ′ ⊂ Σ.
 * None when neither boundary leaves the other scatterer.
 */
inline std::optional<SeedResult> seed_flat_point(const PolyhedralScatterer& s, const PolyhedralScatterer& s_prime) {
    if (s.dimension != 2 || s_prime.dimension != 2) throw PreconditionError("seed_flat_point is 2D only");
    if (auto fp = detail::seed_on(s, s_prime)) return SeedResult{*fp, false};
    if (auto fp = detail::seed_on(s_prime, s)) return SeedResult{*fp, true};
    return std::nullopt;
}

}  // namespace polyref
