// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/cli/scene.hpp"
#include "polyref/trace.hpp"

#include <cstdio>
#include <sstream>

namespace polyref {

namespace detail::svg {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
    return buf;
}

inline std::string pt(const Vec& p) { return num(p(0)) + "," + num(p(1)); }

//! Segment of the line {ν·x = c} inside the square [−L, L]², if any.
inline std::optional<std::pair<Vec, Vec>> clip_line(const Hyperplane& h, double L) {
    const Vec foot = h.foot(), tau = h.frame().col(0);
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2; ++k) {
        if (std::abs(tau(k)) < 1e-15) {
            if (std::abs(foot(k)) > L) return std::nullopt;
            continue;
        }
        double a = (-L - foot(k)) / tau(k), b = (L - foot(k)) / tau(k);
        if (a > b) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    }
    if (!(lo < hi)) return std::nullopt;
    return std::make_pair(Vec(foot + lo * tau), Vec(foot + hi * tau));
}

inline void line(std::ostringstream& os, const Hyperplane& h, double L, const char* cls) {
    if (auto seg = clip_line(h, L))
        os << "  <line class=\"" << cls << "\" x1=\"" << num(seg->first(0)) << "\" y1=\"" << num(seg->first(1))
           << "\" x2=\"" << num(seg->second(0)) << "\" y2=\"" << num(seg->second(1)) << "\"/>\n";
}

//! Horizontal runs of E cells drawn as quadrilaterals in world coordinates.
inline void region(std::ostringstream& os, const SymmetryRegion& reg) {
    if (reg.exact || reg.ns == 0) return;
    const double h = reg.resolution;
    for (int j = 0; j < 2 * reg.nh; ++j) {
        int i = 0;
        while (i < reg.ns) {
            if (!reg.contains_cell(i, j)) {
                ++i;
                continue;
            }
            int k = i;
            while (k < reg.ns && reg.contains_cell(k, j)) ++k;
            const double s0 = reg.s_lo + i * h, s1 = reg.s_lo + k * h;
            const double t0 = -reg.half_height + j * h, t1 = t0 + h;
            os << "  <polygon class=\"region\" points=\"" << pt(reg.world(s0, t0)) << " " << pt(reg.world(s1, t0))
               << " " << pt(reg.world(s1, t1)) << " " << pt(reg.world(s0, t1)) << "\"/>\n";
            i = k;
        }
    }
}

}  // namespace detail::svg

/*!
 * SVG 1.1 drawing of a 2D scene.  The viewBox is the square circumscribing
 * B_{R₀+2} (R₀ the bounding radius of Σ), with the y axis pointing up.
 * Scatterers are filled, reflection lines dashed, the last region of a trace
 * hatched and flat points marked.
 */
inline std::string render_svg(const Scene& sc, const TraceResult* trace = nullptr) {
    namespace s = detail::svg;
    if (sc.dimension != 2) throw PreconditionError("render supports 2D scenes only");
    double r0 = bounding_radius(sc.scatterer);
    if (sc.other) r0 = std::max(r0, bounding_radius(*sc.other));
    const double L = r0 + 2.0;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\""
       << s::num(-L) << " " << s::num(-L) << " " << s::num(2 * L) << " " << s::num(2 * L) << "\">\n"
       << "<defs>\n"
       << "  <pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"" << s::num(L / 40) << "\" height=\""
       << s::num(L / 40) << "\" patternTransform=\"rotate(45)\">\n"
       << "    <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"" << s::num(L / 40) << "\" stroke=\"#3a7bd5\" stroke-width=\""
       << s::num(L / 200) << "\"/>\n"
       << "  </pattern>\n"
       << "  <style>\n"
       << "    .frame { fill: none; stroke: #000; stroke-width: " << s::num(L / 300) << "; }\n"
       << "    .obstacle { fill: #888; stroke: #222; stroke-width: " << s::num(L / 400) << "; }\n"
       << "    .other { fill: none; stroke: #c0392b; stroke-width: " << s::num(L / 300) << "; }\n"
       << "    .screen { stroke: #222; stroke-width: " << s::num(L / 150) << "; }\n"
       << "    .reflection { stroke: #27ae60; stroke-width: " << s::num(L / 300) << "; stroke-dasharray: "
       << s::num(L / 50) << "," << s::num(L / 100) << "; }\n"
       << "    .witness { stroke: #8e44ad; stroke-width: " << s::num(L / 200) << "; stroke-dasharray: "
       << s::num(L / 30) << "," << s::num(L / 100) << "; }\n"
       << "    .region { fill: url(#hatch); stroke: none; }\n"
       << "    .flat-point { fill: #e67e22; stroke: #000; stroke-width: " << s::num(L / 800) << "; }\n"
       << "  </style>\n"
       << "</defs>\n"
       << "<g transform=\"scale(1,-1)\">\n"
       << "  <rect class=\"frame\" x=\"" << s::num(-L) << "\" y=\"" << s::num(-L) << "\" width=\"" << s::num(2 * L)
       << "\" height=\"" << s::num(2 * L) << "\"/>\n";

    if (trace) {
        const auto& log = std::visit([](const auto& t) -> const std::vector<TraceStep>& { return t.log; }, *trace);
        if (!log.empty()) s::region(os, log.back().region);
    }
    auto draw = [&](const PolyhedralScatterer& ps, const char* cls) {
        for (const auto& p : ps.obstacles) {
            os << "  <polygon class=\"" << cls << "\" points=\"";
            const auto poly = p.polygon();
            for (std::size_t i = 0; i < poly.size(); ++i)
                os << (i ? " " : "") << s::num(poly[i](0)) << "," << s::num(poly[i](1));
            os << "\"/>\n";
        }
        for (const auto& c : ps.screens) {
            const auto v = c.world_vertices();
            os << "  <line class=\"screen\" x1=\"" << s::num(v[0](0)) << "\" y1=\"" << s::num(v[0](1)) << "\" x2=\""
               << s::num(v[1](0)) << "\" y2=\"" << s::num(v[1](1)) << "\"/>\n";
        }
    };
    draw(sc.scatterer, "obstacle");
    if (sc.other) draw(*sc.other, "other");
    for (const auto& r : sc.reflections) s::line(os, Hyperplane::from_raw(r.normal, r.offset), L, "reflection");
    if (trace) {
        if (const auto* w = std::get_if<ReflectionWitness>(trace)) s::line(os, w->plane, L, "witness");
        const auto& log = std::visit([](const auto& t) -> const std::vector<TraceStep>& { return t.log; }, *trace);
        for (const auto& step : log)
            os << "  <circle class=\"flat-point\" cx=\"" << s::num(step.flat_point.point(0)) << "\" cy=\""
               << s::num(step.flat_point.point(1)) << "\" r=\"" << s::num(L / 80) << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace polyref
