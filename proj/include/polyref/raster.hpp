// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/error.hpp"
#include "polyref/geom/primitives.hpp"

#include <cstdint>
#include <deque>
#include <vector>

namespace polyref {

//! Closed axis-aligned box test for a segment (Liang–Barsky).
inline bool segment_hits_box(const P2& a, const P2& b, const P2& lo, const P2& hi) {
    double t0 = 0.0, t1 = 1.0;
    const P2 d = b - a;
    const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
    const double q[4] = {a.x() - lo.x(), hi.x() - a.x(), a.y() - lo.y(), hi.y() - a.y()};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return false;
        } else {
            const double r = q[k] / p[k];
            if (p[k] < 0.0) t0 = std::max(t0, r);
            else t1 = std::min(t1, r);
            if (t0 > t1) return false;
        }
    }
    return true;
}

/*!
 * Uniform grid of closed square cells over [lower, lower + (nx, ny)·h].
 * Cells touched by any blocking shape are marked blocked.
 */
class Raster2 {
public:
    static constexpr std::size_t max_cells = 40'000'000;

    Raster2(const P2& lower, double h, int nx, int ny) : lower_(lower), h_(h), nx_(nx), ny_(ny) {
        if (!(h > 0.0)) throw PreconditionError("raster resolution must be positive");
        if (nx <= 0 || ny <= 0 || static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) > max_cells)
            throw ComputationError("raster too large for the requested resolution");
        blocked_.assign(static_cast<std::size_t>(nx) * ny, 0);
    }

    //! Square grid covering [-half, half]² at the given resolution.
    static Raster2 centered(double half, double h) {
        if (!(h > 0.0)) throw PreconditionError("raster resolution must be positive");
        const int n = static_cast<int>(std::ceil(2.0 * half / h));
        const double span = n * h;
        return Raster2(P2(-span / 2, -span / 2), h, n, n);
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double resolution() const { return h_; }
    const P2& lower() const { return lower_; }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    int col(std::size_t k) const { return static_cast<int>(k % nx_); }
    int row(std::size_t k) const { return static_cast<int>(k / nx_); }
    bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
    P2 center(int i, int j) const { return lower_ + P2((i + 0.5) * h_, (j + 0.5) * h_); }
    P2 center(std::size_t k) const { return center(col(k), row(k)); }
    std::pair<int, int> cell_of(const P2& x) const {
        return {static_cast<int>(std::floor((x.x() - lower_.x()) / h_)),
                static_cast<int>(std::floor((x.y() - lower_.y()) / h_))};
    }

    bool blocked(std::size_t k) const { return blocked_[k] != 0; }
    void set_blocked(std::size_t k) { blocked_[k] = 1; }

    void block_segment(const P2& a, const P2& b) {
        for_cells_in_bbox(a.cwiseMin(b), a.cwiseMax(b), [&](int i, int j, const P2& lo, const P2& hi) {
            if (segment_hits_box(a, b, lo, hi)) blocked_[index(i, j)] = 1;
        });
    }

    //! CCW convex polygon.
    void block_polygon(const Polygon2& poly) {
        P2 lo = poly.front(), hi = poly.front();
        for (const auto& p : poly) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        for_cells_in_bbox(lo, hi, [&](int i, int j, const P2& clo, const P2& chi) {
            const std::size_t k = index(i, j);
            if (blocked_[k]) return;
            if (convex_contains(poly, 0.5 * (clo + chi))) {
                blocked_[k] = 1;
                return;
            }
            for (std::size_t e = 0; e < poly.size(); ++e) {
                if (segment_hits_box(poly[e], poly[(e + 1) % poly.size()], clo, chi)) {
                    blocked_[k] = 1;
                    return;
                }
            }
        });
    }

    /*!
     * Breadth-first fill over unblocked cells from `seeds` with 4-neighbour
     * moves accepted by `step_ok(from, to)`.  Returns a visited mask.
     */
    template <class StepOk>
    std::vector<std::uint8_t> flood(const std::vector<std::size_t>& seeds, StepOk&& step_ok,
                                    std::vector<std::size_t>* parent = nullptr) const {
        std::vector<std::uint8_t> seen(blocked_.size(), 0);
        std::deque<std::size_t> queue;
        if (parent) parent->assign(blocked_.size(), static_cast<std::size_t>(-1));
        for (auto s : seeds) {
            if (s < blocked_.size() && !blocked_[s] && !seen[s]) {
                seen[s] = 1;
                queue.push_back(s);
            }
        }
        static constexpr int di[4] = {1, -1, 0, 0};
        static constexpr int dj[4] = {0, 0, 1, -1};
        while (!queue.empty()) {
            const std::size_t k = queue.front();
            queue.pop_front();
            const int i = col(k), j = row(k);
            for (int d = 0; d < 4; ++d) {
                const int ni = i + di[d], nj = j + dj[d];
                if (!in_range(ni, nj)) continue;
                const std::size_t nk = index(ni, nj);
                if (seen[nk] || blocked_[nk] || !step_ok(k, nk)) continue;
                seen[nk] = 1;
                if (parent) (*parent)[nk] = k;
                queue.push_back(nk);
            }
        }
        return seen;
    }

    std::vector<std::uint8_t> flood(const std::vector<std::size_t>& seeds) const {
        return flood(seeds, [](std::size_t, std::size_t) { return true; });
    }

    std::vector<std::size_t> border_cells() const {
        std::vector<std::size_t> out;
        for (int i = 0; i < nx_; ++i) {
            out.push_back(index(i, 0));
            out.push_back(index(i, ny_ - 1));
        }
        for (int j = 1; j + 1 < ny_; ++j) {
            out.push_back(index(0, j));
            out.push_back(index(nx_ - 1, j));
        }
        return out;
    }

private:
    template <class F>
    void for_cells_in_bbox(const P2& lo, const P2& hi, F&& f) {
        const int i0 = std::max(0, static_cast<int>(std::floor((lo.x() - lower_.x()) / h_)) - 1);
        const int j0 = std::max(0, static_cast<int>(std::floor((lo.y() - lower_.y()) / h_)) - 1);
        const int i1 = std::min(nx_ - 1, static_cast<int>(std::floor((hi.x() - lower_.x()) / h_)) + 1);
        const int j1 = std::min(ny_ - 1, static_cast<int>(std::floor((hi.y() - lower_.y()) / h_)) + 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                const P2 clo = lower_ + P2(i * h_, j * h_);
                f(i, j, clo, P2(clo + P2(h_, h_)));
            }
    }

    P2 lower_;
    double h_;
    int nx_, ny_;
    std::vector<std::uint8_t> blocked_;
};

}  // namespace polyref
