// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/geom.hpp"

#include <set>
#include <variant>

namespace polyref {

//! Deduplicated, sorted set of canonical hyperplanes of one dimension.
class ReflectionSet {
public:
    ReflectionSet() = default;
    explicit ReflectionSet(const std::vector<Hyperplane>& planes) {
        if (planes.empty()) throw PreconditionError("reflection set must be nonempty");
        dim_ = planes.front().dim();
        for (const auto& p : planes) {
            if (p.dim() != dim_) throw PreconditionError("reflection set mixes dimensions");
            insert(p);
        }
    }

    int dim() const { return dim_; }
    std::size_t size() const { return planes_.size(); }
    bool empty() const { return planes_.empty(); }
    const std::vector<Hyperplane>& planes() const { return planes_; }
    const Hyperplane& operator[](std::size_t i) const { return planes_[i]; }

    bool contains(const Hyperplane& p) const {
        for (const auto& q : planes_)
            if (same_plane(p, q)) return true;
        return false;
    }

    //! Returns false when an equal plane is already present.
    bool insert(const Hyperplane& p) {
        if (contains(p)) return false;
        planes_.insert(std::upper_bound(planes_.begin(), planes_.end(), p, plane_less), p);
        return true;
    }

    bool same_set(const ReflectionSet& o) const {
        if (o.size() != size()) return false;
        for (const auto& p : planes_)
            if (!o.contains(p)) return false;
        return true;
    }

    Mat normal_matrix() const {
        Mat a(planes_.size(), dim_);
        for (std::size_t i = 0; i < planes_.size(); ++i) a.row(i) = planes_[i].normal().transpose();
        return a;
    }

private:
    int dim_ = 0;
    std::vector<Hyperplane> planes_;
};

//! Affine flat: point + span of orthonormal `directions`.
struct SubspaceFlat {
    Vec point;
    Mat directions;
    int dim() const { return static_cast<int>(directions.cols()); }
    bool contains(const Vec& x, double eps = tol::on_plane) const {
        const Vec r = x - point;
        return (r - directions * (directions.transpose() * r)).norm() <= eps;
    }
};

enum class ClosureStatus { Finite, ExceededCap };

inline const char* to_string(ClosureStatus s) { return s == ClosureStatus::Finite ? "finite" : "exceeded_cap"; }

struct ReflectionGroup {
    ReflectionSet generators;
    std::vector<Isometry> elements;
    ClosureStatus status = ClosureStatus::Finite;

    std::size_t order() const { return elements.size(); }
};

struct ClosureResult {
    ReflectionSet planes;
    ReflectionGroup group;
};

struct ClosureCaps {
    std::size_t max_planes = 64;
    std::size_t max_elements = 512;
};

//! N₀: rank of the stacked normals.
inline int normal_span_dim(const ReflectionSet& rs) {
    if (rs.empty()) throw PreconditionError("normal_span_dim needs a nonempty reflection set");
    return matrix_rank(rs.normal_matrix(), tol::rank);
}

//! Largest flat contained in every hyperplane; none when the system ν_i·x = c_i is inconsistent.
inline std::optional<SubspaceFlat> common_subspace(const ReflectionSet& rs) {
    if (rs.empty()) return std::nullopt;
    const Mat a = rs.normal_matrix();
    Vec b(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) b(i) = rs[i].offset();
    const Vec x = a.completeOrthogonalDecomposition().solve(b);
    if ((a * x - b).norm() > tol::rank * std::max(1.0, b.norm())) return std::nullopt;
    return SubspaceFlat{x, null_space(a, tol::rank)};
}

namespace detail {

inline bool contains_isometry(const std::vector<Isometry>& els, const Isometry& g) {
    for (const auto& e : els)
        if (e.approx_equal(g)) return true;
    return false;
}

}  // namespace detail

/*!
 * Close `rs` under mutual reflection, then generate the isometry group of the
 * closed set.  Stops with ExceededCap once either cap is passed.
 */
inline ClosureResult closure(const ReflectionSet& rs, ClosureCaps caps = {}) {
    if (caps.max_planes < rs.size()) throw PreconditionError("closure cap is smaller than the input set");
    ClosureResult out{rs, {rs, {}, ClosureStatus::Finite}};
    ReflectionSet& s = out.planes;
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<Hyperplane> snapshot = s.planes();
        for (const auto& m : snapshot) {
            for (const auto& t : snapshot) {
                if (s.insert(reflect_hyperplane(m, t))) grew = true;
                if (s.size() > caps.max_planes) {
                    out.group.status = ClosureStatus::ExceededCap;
                    return out;
                }
            }
        }
    }
    out.group.generators = s;
    std::vector<Isometry> gens;
    for (const auto& p : s.planes()) gens.push_back(Isometry::reflection(p));
    auto& els = out.group.elements;
    els.push_back(Isometry::identity(s.dim()));
    for (std::size_t head = 0; head < els.size(); ++head) {
        for (const auto& r : gens) {
            const Isometry g = r.after(els[head]);
            if (detail::contains_isometry(els, g)) continue;
            els.push_back(g);
            if (els.size() > caps.max_elements) {
                out.group.status = ClosureStatus::ExceededCap;
                return out;
            }
        }
    }
    return out;
}

/*!
 * Number of sectors cut out by a pencil of hyperplanes sharing a flat of
 * codimension ≤ 2, counted as distinct sign patterns on a circle in the
 * normal plane.
 */
inline int sector_count(const ReflectionSet& pencil) {
    const auto flat = common_subspace(pencil);
    const int n0 = normal_span_dim(pencil);
    if (!flat || n0 > 2) throw PreconditionError("sector_count requires a pencil sharing a codimension-2 flat");
    const Mat basis = column_span(pencil.normal_matrix().transpose(), tol::rank);
    const std::size_t m = pencil.size();
    const std::size_t samples = std::max<std::size_t>(4096, 256 * m);
    std::set<std::vector<int>> patterns;
    for (std::size_t k = 0; k < samples; ++k) {
        const double th = (static_cast<double>(k) + 0.5) * 2.0 * pi / static_cast<double>(samples);
        Vec y = flat->point + std::cos(th) * basis.col(0);
        if (n0 == 2) y += std::sin(th) * basis.col(1);
        std::vector<int> sig;
        for (const auto& p : pencil.planes()) {
            const double d = p.signed_distance(y);
            sig.push_back(d > 1e-12 ? 1 : (d < -1e-12 ? -1 : 0));
        }
        patterns.insert(sig);
    }
    return static_cast<int>(patterns.size());
}

//! True when reflecting Σ in every plane of `rs` maps its parts onto parts of Σ.
inline bool is_symmetric(const PolyhedralScatterer& s, const ReflectionSet& rs, double eps = 1e-7) {
    for (const auto& p : rs.planes()) {
        const Isometry t = Isometry::reflection(p);
        for (const auto& o : s.obstacles) {
            const auto img = o.transformed(t);
            if (std::none_of(s.obstacles.begin(), s.obstacles.end(), [&](const auto& q) { return q.same_shape(img, eps); }))
                return false;
        }
        for (const auto& c : s.screens) {
            const auto img = c.transformed(t);
            if (std::none_of(s.screens.begin(), s.screens.end(), [&](const auto& q) { return q.same_shape(img, eps); }))
                return false;
        }
    }
    return true;
}

//! Σ₀ = ∪_{T ∈ 𝒯} T(Σ), with duplicate parts removed.
inline PolyhedralScatterer symmetrize(const PolyhedralScatterer& s, const ReflectionGroup& g) {
    if (g.status != ClosureStatus::Finite) throw PreconditionError("symmetrize requires a finite reflection group");
    PolyhedralScatterer out{s.dimension, {}, {}};
    for (std::size_t k = 0; k < g.elements.size(); ++k) {
        const Isometry& t = g.elements[k];
        const std::string tag = k == 0 ? "" : "@" + std::to_string(k);
        for (const auto& o : s.obstacles) {
            auto img = o.transformed(t, o.label() + tag);
            if (std::none_of(out.obstacles.begin(), out.obstacles.end(), [&](const auto& q) { return q.same_shape(img); }))
                out.obstacles.push_back(std::move(img));
        }
        for (const auto& c : s.screens) {
            auto img = c.transformed(t);
            img.id = c.id + tag;
            if (std::none_of(out.screens.begin(), out.screens.end(), [&](const auto& q) { return q.same_shape(img); }))
                out.screens.push_back(std::move(img));
        }
    }
    return out;
}

struct EscapeFailure {
    std::string reason;
    std::size_t reached_cells = 0;
    std::size_t blocked_cells = 0;
};

using EscapeResult = std::variant<std::vector<Vec>, EscapeFailure>;

/*!
 * Grid search for a polyline from x₀ to ∂B_{R₀+2} avoiding Σ₀, whose vertices
 * stay farther than resolution/2 from every reflection line.
 */
inline EscapeResult escape_path_2d(const PolyhedralScatterer& s0, const ReflectionSet& rs, const Vec& x0,
                                   double resolution) {
    if (s0.dimension != 2 || rs.dim() != 2 || x0.size() != 2) throw PreconditionError("escape_path_2d is 2D only");
    if (!(resolution > 0.0)) throw PreconditionError("resolution must be positive");
    if (!is_symmetric(s0, rs)) throw PreconditionError("scatterer is not symmetric under the reflection set");
    if (s0.contains(x0, 0.0)) throw PreconditionError("start point lies on the scatterer");
    for (const auto& p : rs.planes())
        if (p.contains(x0, tol::on_plane)) throw PreconditionError("start point lies on a reflection line");

    const double radius = bounding_radius(s0) + 2.0;
    Raster2 grid = Raster2::centered(std::max(radius, x0.norm()) + 2.0 * resolution, resolution);
    rasterize(grid, s0);
    const std::size_t total = static_cast<std::size_t>(grid.nx()) * grid.ny();
    for (std::size_t k = 0; k < total; ++k) {
        const Vec c = grid.center(k);
        for (const auto& p : rs.planes())
            if (std::abs(p.signed_distance(c)) <= 0.5 * resolution) grid.set_blocked(k);
    }
    std::size_t blocked = 0;
    for (std::size_t k = 0; k < total; ++k) blocked += grid.blocked(k);

    const auto [i0, j0] = grid.cell_of(P2(x0(0), x0(1)));
    const std::size_t start = grid.index(i0, j0);
    if (!grid.in_range(i0, j0) || grid.blocked(start))
        return EscapeFailure{"start cell is blocked at this resolution; retry with a finer grid", 0, blocked};
    std::vector<std::size_t> parent;
    const auto seen = grid.flood({start}, [](std::size_t, std::size_t) { return true; }, &parent);
    std::size_t reached = 0, goal = total;
    for (std::size_t k = 0; k < total; ++k) {
        if (!seen[k]) continue;
        ++reached;
        if (goal == total && grid.center(k).norm() >= radius) goal = k;
    }
    if (goal == total)
        return EscapeFailure{"no free path to the outer ball; the start point may be enclosed", reached, blocked};

    std::vector<std::size_t> cells;
    for (std::size_t k = goal; k != static_cast<std::size_t>(-1); k = parent[k]) cells.push_back(k);
    std::reverse(cells.begin(), cells.end());
    std::vector<Vec> path{x0};
    for (std::size_t k : cells) {
        const Vec c = grid.center(k);
        if (path.size() >= 2) {
            const Vec& a = path[path.size() - 2];
            const Vec& b = path.back();
            if (std::abs(cross2(P2(b - a), P2(c - b))) < 1e-12 * resolution * resolution) path.back() = c;
            else path.push_back(c);
        } else {
            path.push_back(c);
        }
    }
    return path;
}

}  // namespace polyref
