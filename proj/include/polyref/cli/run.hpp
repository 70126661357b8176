// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/certify.hpp"
#include "polyref/cli/scene.hpp"
#include "polyref/cli/svg.hpp"
#include "polyref/refgroup.hpp"
#include "polyref/trace.hpp"

namespace polyref {

inline constexpr const char* version_string = "polyref 0.1.0";

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"certify", "certify-obstacle", "reflect-check", "group",
                                            "trace",   "faces",            "render"};
    return c;
}

struct RunFlags {
    std::uint64_t seed = 0;
    int grid_density = 256;
    int max_iters = 32;
    std::optional<double> resolution;
    std::optional<double> tolerance;  // overrides the reflect-check threshold
    bool want_svg = false;
};

struct RunOutcome {
    json report;
    std::optional<std::string> svg;
    int exit_code = 0;          // 0, or 4 when the command produced a failure result
    std::string diagnostic;     // human-readable reason for a nonzero exit code
};

namespace detail::run {

using scene::to_json;

inline json plane_json(const Hyperplane& h) { return {{"normal", to_json(h.normal())}, {"offset", h.offset()}}; }

inline MeasurementPlan plan_for(const Scene& sc, ScattererClass cls) {
    if (!sc.plan) throw PreconditionError("scene has no 'plan'");
    if (sc.waves.empty()) throw PreconditionError("scene has no waves");
    if (sc.plan->scatterer_class && *sc.plan->scatterer_class != cls)
        throw PreconditionError("plan class '" + to_string(*sc.plan->scatterer_class) + "' does not match the command");
    MeasurementPlan p{cls, sc.plan->allowed_bcs, {}};
    for (const auto& w : sc.waves) p.waves.push_back(w.wave);
    return p;
}

inline json certify(const Scene& sc, ScattererClass cls, const RunFlags& f) {
    const MeasurementPlan plan = plan_for(sc, cls);
    const CertifyOptions opt{f.grid_density, f.seed, sc.profile_radius()};
    const Certificate c = cls == ScattererClass::General ? certify_general(plan, opt) : certify_obstacle(plan, opt);
    const OracleResult o = sampling_oracle(plan, f.grid_density, f.seed);

    json r = {{"scatterer_class", to_string(cls)},
              {"method", to_string(c.method)},
              {"verdict", c.holds() ? "holds" : "fails"},
              {"vanishing_span_dim", c.vanishing_span_dim},
              {"profile_radius", opt.radius}};
    r["allowed_bcs"] = json::array();
    for (auto bc : sorted_bcs(plan)) r["allowed_bcs"].push_back(to_string(bc));
    r["waves"] = json::array();
    for (const auto& w : sc.waves) r["waves"].push_back(w.id);
    if (c.holds()) {
        const auto& h = std::get<CriterionHolds>(c.verdict);
        r["margin"] = h.margin;
        r["normal"] = to_json(h.normal);
        r["bc"] = to_string(h.bc);
    } else {
        const auto& fl = std::get<CriterionFails>(c.verdict);
        r["witness"] = json::array();
        for (std::size_t i = 0; i < fl.normals.size(); ++i)
            r["witness"].push_back({{"normal", to_json(fl.normals[i])}, {"bc", to_string(fl.bcs[i])}});
    }
    r["details"] = json::array();
    for (const auto& row : c.details)
        r["details"].push_back({{"normal", row.normal},
                                {"wave", sc.waves[row.wave].id},
                                {"bc", to_string(row.bc)},
                                {"modulus", row.modulus}});
    json oj = {{"grid_density", f.grid_density},
               {"seed", f.seed},
               {"worst_value", o.worst_value},
               {"verdict", o.vanishing() ? "fails" : "holds"},
               {"vanishing_span_dim", o.vanishing_span_dim}};
    oj["normals"] = json::array();
    for (const auto& v : o.normals) oj["normals"].push_back(to_json(v));
    const bool agree = o.vanishing() != c.holds() &&
                       (!c.holds() || std::abs(o.worst_value - margin_of(c)) <= 1e-6);
    oj["agrees"] = agree;
    r["oracle"] = oj;
    return r;
}

inline json reflect_check(const Scene& sc, const RunFlags& f) {
    if (sc.waves.empty()) throw PreconditionError("scene has no waves");
    if (sc.reflections.empty()) throw PreconditionError("scene has no reflections");
    const double thr = f.tolerance.value_or(sc.tol().reflect_check);
    const double res_thr = sc.tol().residual;
    json rows = json::array();
    bool all = true;
    for (const auto& w : sc.waves) {
        std::vector<BoundaryCondition> bcs;
        if (sc.plan) {
            bcs = sc.plan->allowed_bcs;
        } else {
            for (auto bc : all_boundary_conditions)
                if (family_of(bc) == family_of(w.wave)) bcs.push_back(bc);
        }
        for (auto bc : bcs)
            for (const auto& r : sc.reflections) {
                const Hyperplane plane = Hyperplane::from_raw(r.normal, r.offset);
                const auto rep = verify_reflection_principle(bc, w.wave, plane, 16, 1e-5, f.seed);
                const bool pass = rep.max_boundary < thr && rep.max_residual < res_thr && rep.max_jump < thr;
                all = all && pass;
                rows.push_back({{"wave", w.id},
                                {"bc", to_string(bc)},
                                {"plane", r.id},
                                {"max_boundary", rep.max_boundary},
                                {"max_residual", rep.max_residual},
                                {"max_jump", rep.max_jump},
                                {"pass", pass}});
            }
    }
    return {{"rows", rows}, {"all_pass", all}, {"threshold", thr}, {"residual_threshold", res_thr}};
}

inline json group(const Scene& sc) {
    if (sc.reflections.empty()) throw PreconditionError("scene has no reflections");
    std::vector<Hyperplane> planes;
    for (const auto& r : sc.reflections) planes.push_back(Hyperplane::from_raw(r.normal, r.offset));
    const ReflectionSet rs(planes);
    const ClosureResult cl = closure(rs);
    json r = {{"generators", rs.size()},
              {"status", to_string(cl.group.status)},
              {"order", cl.group.order()},
              {"normal_span_dim", normal_span_dim(cl.planes)}};
    r["planes"] = json::array();
    for (const auto& p : cl.planes.planes()) r["planes"].push_back(plane_json(p));
    const auto flat = common_subspace(cl.planes);
    if (flat) {
        r["common_subspace"] = {{"point", to_json(flat->point)}, {"dim", flat->dim()}};
        if (cl.group.status == ClosureStatus::Finite && normal_span_dim(cl.planes) <= 2)
            r["sectors"] = sector_count(cl.planes);
    } else {
        r["common_subspace"] = nullptr;
    }
    if (!sc.scatterer.empty()) r["scatterer_symmetric"] = is_symmetric(sc.scatterer, cl.planes);
    return r;
}

inline json flat_point_json(const FlatPoint& fp) {
    json j = {{"point", to_json(fp.point)}, {"plane", plane_json(fp.plane)}, {"clearance", fp.clearance}};
    if (fp.bc) j["bc"] = to_string(*fp.bc);
    return j;
}

inline std::pair<json, TraceResult> trace(const Scene& sc, const RunFlags& f) {
    if (sc.dimension != 2) throw PreconditionError("trace supports 2D scenes only");
    if (!sc.trace) throw PreconditionError("scene has no 'trace' block");
    json r = json::object();
    const PolyhedralScatterer* field_side = &sc.scatterer;
    FlatPoint fp;
    if (sc.trace->auto_seed) {
        const auto seed = seed_flat_point(sc.scatterer, *sc.other);
        if (!seed) throw ComputationError("no flat point: the two scatterers coincide");
        fp = seed->flat_point;
        r["swapped"] = seed->swapped;
        if (seed->swapped) field_side = &*sc.other;
    } else {
        fp.point = sc.trace->point;
        fp.plane = Hyperplane::through(sc.trace->point, sc.trace->normal);
        fp.clearance = sc.trace->clearance.value_or(sc.scatterer.distance(sc.trace->point));
    }
    if (sc.trace->bc) fp.bc = sc.trace->bc;
    check_flat_point(*field_side, fp);
    r["start"] = flat_point_json(fp);
    const double h = f.resolution.value_or(default_trace_resolution(*field_side, fp));
    if (!(h > 0.0)) throw PreconditionError("resolution must be positive");
    r["resolution"] = h;
    r["max_iters"] = f.max_iters;
    TraceResult res = trace_to_reflection(*field_side, fp, f.max_iters, h);
    const auto& log = std::visit([](const auto& t) -> const std::vector<TraceStep>& { return t.log; }, res);
    r["iterations"] = log.size();
    r["log"] = json::array();
    for (const auto& step : log) {
        std::size_t cells = 0;
        for (auto c : step.region.in_E) cells += c != 0;
        r["log"].push_back({{"flat_point", flat_point_json(step.flat_point)},
                            {"unbounded", step.region.unbounded},
                            {"exact", step.region.exact},
                            {"region_cells", cells}});
    }
    if (const auto* w = std::get_if<ReflectionWitness>(&res)) {
        r["witness"] = plane_json(w->plane);
        r["witness"]["escape_radius"] = w->escape_radius;
    } else {
        r["failure"] = std::get<TraceFailure>(res).reason;
    }
    return {r, std::move(res)};
}

inline json faces_report(const Scene& sc) {
    const FaceComplex fc = faces(sc.scatterer);
    json r = {{"dimension", fc.dimension}, {"vertex_span_property", fc.vertex_span_property()}};
    r["counts"] = json::array();
    for (int k = 0; k < fc.dimension; ++k) r["counts"].push_back(fc.count(k));
    if (fc.count(0) > 0) r["min_face_distance"] = min_face_distance(fc);
    r["vertices"] = json::array();
    for (const auto& v : fc.vertices())
        r["vertices"].push_back(
            {{"point", to_json(v.point)}, {"normal_rank", v.normal_rank()}, {"sigma_min", v.normal_sigma_min()}});
    return r;
}

inline json flags_json(const RunFlags& f) {
    json j = {{"seed", f.seed}, {"grid_density", f.grid_density}, {"max_iters", f.max_iters}};
    j["resolution"] = f.resolution ? json(*f.resolution) : json(nullptr);
    j["tolerance"] = f.tolerance ? json(*f.tolerance) : json(nullptr);
    return j;
}

inline std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace detail::run

/*!
 * Dispatches `command` on a parsed scene.  Module errors propagate as
 * exceptions; a trace that ends without a witness yields exit code 4 together
 * with its full report.
 */
inline RunOutcome run(const std::string& command, const Scene& sc, const RunFlags& flags = {}) {
    namespace r = detail::run;
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        throw PreconditionError("unknown command '" + command + "'");
    if (flags.grid_density < 64) throw PreconditionError("--grid-density must be at least 64");
    if (flags.max_iters < 1) throw PreconditionError("--max-iters must be at least 1");
    RunOutcome out;
    json results;
    if (command == "certify") {
        results = r::certify(sc, ScattererClass::General, flags);
    } else if (command == "certify-obstacle") {
        results = r::certify(sc, ScattererClass::Obstacle, flags);
    } else if (command == "reflect-check") {
        results = r::reflect_check(sc, flags);
    } else if (command == "group") {
        results = r::group(sc);
    } else if (command == "faces") {
        results = r::faces_report(sc);
    } else if (command == "trace") {
        auto [j, res] = r::trace(sc, flags);
        results = j;
        if (flags.want_svg) out.svg = render_svg(sc, &res);
        if (std::holds_alternative<TraceFailure>(res)) {
            out.exit_code = 4;
            out.diagnostic = "trace failed: " + std::get<TraceFailure>(res).reason;
        }
    } else {
        std::optional<TraceResult> res;
        if (sc.trace) {
            auto tr = r::trace(sc, flags);
            res = std::move(tr.second);
            results["trace"] = tr.first;
        }
        out.svg = render_svg(sc, res ? &*res : nullptr);
        results["svg_bytes"] = out.svg->size();
        results["svg_digest"] = r::hex64(fnv1a(*out.svg));
    }
    out.report = {{"command", command},
                  {"input_digest", "fnv1a64:" + r::hex64(fnv1a(canonical_scene_text(sc)))},
                  {"flags", r::flags_json(flags)},
                  {"results", results},
                  {"version", version_string}};
    return out;
}

}  // namespace polyref
