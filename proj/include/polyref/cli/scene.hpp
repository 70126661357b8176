// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/certify.hpp"
#include "polyref/geom.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>

namespace polyref {

using json = nlohmann::json;

//! Obstacle part given either by vertices or by half-spaces normal·x ≤ offset.
struct ObstacleSpec {
    std::string id;
    std::vector<Vec> vertices;
    std::vector<std::pair<Vec, double>> halfspaces;
};

struct ScreenSpec {
    std::string id;
    std::vector<Vec> vertices;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
};

struct ScattererSpec {
    std::vector<ObstacleSpec> obstacles;
    std::vector<ScreenSpec> screens;
};

struct WaveSpec {
    std::string id;
    IncidentWave wave;
};

struct PlaneSpec {
    std::string id;
    Vec normal;
    double offset = 0.0;
};

struct PlanSpec {
    std::optional<ScattererClass> scatterer_class;
    std::vector<BoundaryCondition> allowed_bcs;
};

//! Start of a trace: an explicit flat point, or "auto" to seed from the other scatterer.
struct TraceSpec {
    bool auto_seed = false;
    Vec point, normal;
    std::optional<double> clearance;
    std::optional<BoundaryCondition> bc;
};

struct Tolerances {
    double reflect_check = 1e-8;
    double residual = 1e-6;
};

struct Scene {
    int dimension = 2;
    ScattererSpec scatterer_spec;
    std::optional<ScattererSpec> other_spec;
    std::vector<WaveSpec> waves;
    std::optional<PlanSpec> plan;
    std::vector<PlaneSpec> reflections;
    std::optional<TraceSpec> trace;
    std::optional<Tolerances> tolerances;

    PolyhedralScatterer scatterer;
    std::optional<PolyhedralScatterer> other;

    //! R₀ + 1, with R₀ the bounding radius of Σ (1 for an empty scene).
    double profile_radius() const { return scatterer.empty() ? 1.0 : bounding_radius(scatterer) + 1.0; }
    Tolerances tol() const { return tolerances.value_or(Tolerances{}); }
};

namespace detail::scene {

inline void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

inline const json& object(const json& j, const std::string& path, const std::set<std::string>& allowed,
                          const std::set<std::string>& required = {}) {
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "/" + it.key(), "unknown field");
    for (const auto& k : required)
        if (!j.contains(k)) fail(path + "/" + k, "missing required field");
    return j;
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

inline std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

inline Vec vector(const json& j, const std::string& path, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        fail(path, "expected an array of " + std::to_string(dim) + " numbers");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = number(j[static_cast<std::size_t>(i)], path + "/" + std::to_string(i));
    return v;
}

inline std::vector<Vec> points(const json& j, const std::string& path, int dim) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of points");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector(j[i], path + "/" + std::to_string(i), dim));
    return out;
}

inline cplx complex_number(const json& j, const std::string& path) {
    if (j.is_number()) return {number(j, path), 0.0};
    if (!j.is_array() || j.size() != 2) fail(path, "expected a number or a [re, im] pair");
    return {number(j[0], path + "/0"), number(j[1], path + "/1")};
}

inline BoundaryCondition bc(const json& j, const std::string& path) {
    try {
        return boundary_condition_from_string(string(j, path));
    } catch (const ParseError& e) {
        fail(path, e.what());
    }
    return BoundaryCondition::Dirichlet;
}

inline std::string id(const json& j, const std::string& path, std::set<std::string>& seen) {
    const std::string s = string(j, path);
    if (s.empty()) fail(path, "id must be nonempty");
    if (!seen.insert(s).second) fail(path, "duplicate id '" + s + "'");
    return s;
}

inline ScattererSpec scatterer(const json& j, const std::string& path, int dim, std::set<std::string>& ids) {
    object(j, path, {"obstacles", "screens"});
    ScattererSpec out;
    if (j.contains("obstacles")) {
        const json& arr = j["obstacles"];
        if (!arr.is_array()) fail(path + "/obstacles", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = path + "/obstacles/" + std::to_string(i);
            const json& o = object(arr[i], p, {"id", "vertices", "halfspaces"}, {"id"});
            ObstacleSpec spec;
            spec.id = id(o["id"], p + "/id", ids);
            if (o.contains("vertices") == o.contains("halfspaces"))
                fail(p, "exactly one of 'vertices' or 'halfspaces' is required");
            if (o.contains("vertices")) spec.vertices = points(o["vertices"], p + "/vertices", dim);
            if (o.contains("halfspaces")) {
                const json& hs = o["halfspaces"];
                if (!hs.is_array() || hs.empty()) fail(p + "/halfspaces", "expected a nonempty array");
                for (std::size_t k = 0; k < hs.size(); ++k) {
                    const std::string hp = p + "/halfspaces/" + std::to_string(k);
                    object(hs[k], hp, {"normal", "offset"}, {"normal", "offset"});
                    spec.halfspaces.emplace_back(vector(hs[k]["normal"], hp + "/normal", dim),
                                                 number(hs[k]["offset"], hp + "/offset"));
                }
            }
            out.obstacles.push_back(std::move(spec));
        }
    }
    if (j.contains("screens")) {
        const json& arr = j["screens"];
        if (!arr.is_array()) fail(path + "/screens", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = path + "/screens/" + std::to_string(i);
            const json& o = object(arr[i], p, {"id", "vertices", "bc"}, {"id", "vertices"});
            ScreenSpec spec;
            spec.id = id(o["id"], p + "/id", ids);
            spec.vertices = points(o["vertices"], p + "/vertices", dim);
            if (o.contains("bc")) spec.bc = bc(o["bc"], p + "/bc");
            out.screens.push_back(std::move(spec));
        }
    }
    return out;
}

inline WaveSpec wave(const json& j, const std::string& path, int dim, std::set<std::string>& ids) {
    if (!j.is_object() || !j.contains("family")) fail(path + "/family", "missing required field");
    const std::string fam = string(j["family"], path + "/family");
    WaveSpec out;
    if (fam == "acoustic") {
        object(j, path, {"id", "family", "omega", "d"}, {"id", "omega", "d"});
        out.wave = AcousticWave{number(j["omega"], path + "/omega"), vector(j["d"], path + "/d", dim)};
    } else if (fam == "electromagnetic") {
        object(j, path, {"id", "family", "omega", "d", "p"}, {"id", "omega", "d", "p"});
        if (dim != 3) fail(path + "/family", "electromagnetic waves require dimension 3");
        out.wave = EMWave{number(j["omega"], path + "/omega"), vector(j["d"], path + "/d", 3),
                          vector(j["p"], path + "/p", 3)};
    } else if (fam == "elastic") {
        object(j, path, {"id", "family", "omega", "lambda", "mu", "rho", "d", "q", "cp", "cs"},
               {"id", "omega", "lambda", "mu", "rho", "d", "q", "cp", "cs"});
        ElasticWave e;
        e.omega = number(j["omega"], path + "/omega");
        e.lambda = number(j["lambda"], path + "/lambda");
        e.mu = number(j["mu"], path + "/mu");
        e.rho = number(j["rho"], path + "/rho");
        e.d = vector(j["d"], path + "/d", dim);
        e.q = vector(j["q"], path + "/q", dim);
        e.cp = complex_number(j["cp"], path + "/cp");
        e.cs = complex_number(j["cs"], path + "/cs");
        out.wave = e;
    } else {
        fail(path + "/family", "unknown wave family '" + fam + "'");
    }
    out.id = id(j["id"], path + "/id", ids);
    return out;
}

inline PolyhedralScatterer build(const ScattererSpec& spec, int dim, const std::string& name) {
    PolyhedralScatterer s;
    s.dimension = dim;
    for (const auto& o : spec.obstacles) {
        if (!o.vertices.empty()) {
            s.obstacles.push_back(ConvexPolytope::from_vertices(o.vertices, o.id));
        } else {
            std::vector<HalfSpace> hs;
            for (const auto& [n, c] : o.halfspaces) {
                HalfSpace h;
                try {
                    h.plane = Hyperplane::from_raw(n, c);
                } catch (const InvariantError&) {
                    throw InvariantError(o.id, "half-space normal must be nonzero");
                }
                h.side = h.plane.normal().dot(n) > 0 ? -1 : 1;
                hs.push_back(h);
            }
            s.obstacles.push_back(ConvexPolytope::from_halfspaces(std::move(hs), o.id));
        }
    }
    for (const auto& c : spec.screens) s.screens.push_back(Cell::from_points(c.vertices, c.bc, c.id));
    validate(s, name);
    return s;
}

}  // namespace detail::scene

/*!
 * Parses and validates a version-1 scene.  Throws ParseError (syntax with byte
 * position, or schema violation with a JSON path) and InvariantError naming
 * the offending element.
 */
inline Scene parse_scene(const std::string& text) {
    namespace d = detail::scene;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    d::object(j, "", {"version", "dimension", "scatterer", "other_scatterer", "waves", "plan", "reflections", "trace",
                      "tolerances"},
              {"version", "dimension"});
    if (!j["version"].is_number_integer() || j["version"].get<int>() != 1) d::fail("/version", "expected 1");
    if (!j["dimension"].is_number_integer()) d::fail("/dimension", "expected 2 or 3");
    Scene sc;
    sc.dimension = j["dimension"].get<int>();
    if (sc.dimension != 2 && sc.dimension != 3) d::fail("/dimension", "expected 2 or 3");
    const int n = sc.dimension;
    std::set<std::string> ids;

    if (j.contains("scatterer")) sc.scatterer_spec = d::scatterer(j["scatterer"], "/scatterer", n, ids);
    if (j.contains("other_scatterer")) sc.other_spec = d::scatterer(j["other_scatterer"], "/other_scatterer", n, ids);
    if (j.contains("waves")) {
        if (!j["waves"].is_array()) d::fail("/waves", "expected an array");
        for (std::size_t i = 0; i < j["waves"].size(); ++i)
            sc.waves.push_back(d::wave(j["waves"][i], "/waves/" + std::to_string(i), n, ids));
    }
    if (j.contains("plan")) {
        const json& p = d::object(j["plan"], "/plan", {"class", "allowed_bcs"}, {"allowed_bcs"});
        PlanSpec plan;
        if (p.contains("class")) {
            try {
                plan.scatterer_class = scatterer_class_from_string(d::string(p["class"], "/plan/class"));
            } catch (const ParseError& e) {
                d::fail("/plan/class", e.what());
            }
        }
        if (!p["allowed_bcs"].is_array() || p["allowed_bcs"].empty())
            d::fail("/plan/allowed_bcs", "expected a nonempty array");
        for (std::size_t i = 0; i < p["allowed_bcs"].size(); ++i)
            plan.allowed_bcs.push_back(d::bc(p["allowed_bcs"][i], "/plan/allowed_bcs/" + std::to_string(i)));
        sc.plan = plan;
    }
    if (j.contains("reflections")) {
        if (!j["reflections"].is_array()) d::fail("/reflections", "expected an array");
        for (std::size_t i = 0; i < j["reflections"].size(); ++i) {
            const std::string p = "/reflections/" + std::to_string(i);
            const json& r = d::object(j["reflections"][i], p, {"id", "normal", "offset"}, {"id", "normal", "offset"});
            sc.reflections.push_back({d::id(r["id"], p + "/id", ids), d::vector(r["normal"], p + "/normal", n),
                                      d::number(r["offset"], p + "/offset")});
        }
    }
    if (j.contains("trace")) {
        const json& t = d::object(j["trace"], "/trace", {"seed", "point", "normal", "clearance", "bc"});
        TraceSpec ts;
        if (t.contains("seed")) {
            if (d::string(t["seed"], "/trace/seed") != "auto") d::fail("/trace/seed", "expected \"auto\"");
            if (t.contains("point") || t.contains("normal") || t.contains("clearance"))
                d::fail("/trace", "'seed' excludes an explicit flat point");
            ts.auto_seed = true;
        } else {
            if (!t.contains("point") || !t.contains("normal")) d::fail("/trace", "'point' and 'normal' are required");
            ts.point = d::vector(t["point"], "/trace/point", n);
            ts.normal = d::vector(t["normal"], "/trace/normal", n);
            if (t.contains("clearance")) ts.clearance = d::number(t["clearance"], "/trace/clearance");
        }
        if (t.contains("bc")) ts.bc = d::bc(t["bc"], "/trace/bc");
        sc.trace = ts;
    }
    if (j.contains("tolerances")) {
        const json& t = d::object(j["tolerances"], "/tolerances", {"reflect_check", "residual"});
        Tolerances tl;
        if (t.contains("reflect_check")) tl.reflect_check = d::number(t["reflect_check"], "/tolerances/reflect_check");
        if (t.contains("residual")) tl.residual = d::number(t["residual"], "/tolerances/residual");
        if (!(tl.reflect_check > 0) || !(tl.residual > 0)) d::fail("/tolerances", "tolerances must be positive");
        sc.tolerances = tl;
    }

    // Invariants of the referenced domain types.
    sc.scatterer = d::build(sc.scatterer_spec, n, "scatterer");
    if (sc.other_spec) sc.other = d::build(*sc.other_spec, n, "other_scatterer");
    for (const auto& w : sc.waves) {
        if (dimension_of(w.wave) != n) throw InvariantError(w.id, "dimension differs from the scene");
        validate(w.wave, w.id);
    }
    for (const auto& r : sc.reflections)
        if (!(r.normal.norm() > 0.0)) throw InvariantError(r.id, "normal must be nonzero");
    if (sc.trace && sc.trace->auto_seed && !sc.other)
        throw InvariantError("trace", "automatic seeding requires 'other_scatterer'");
    if (sc.trace && !sc.trace->auto_seed && !(sc.trace->normal.norm() > 0.0))
        throw InvariantError("trace", "normal must be nonzero");
    return sc;
}

namespace detail::scene {

inline json to_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i) + 0.0);  // + 0.0 folds −0 into 0
    return a;
}

inline json to_json(const cplx& c) { return json::array({c.real(), c.imag()}); }

inline json to_json(const ScattererSpec& s) {
    json out = json::object();
    if (!s.obstacles.empty()) {
        json arr = json::array();
        for (const auto& o : s.obstacles) {
            json e = {{"id", o.id}};
            if (!o.vertices.empty()) {
                e["vertices"] = json::array();
                for (const auto& v : o.vertices) e["vertices"].push_back(to_json(v));
            } else {
                e["halfspaces"] = json::array();
                for (const auto& [n, c] : o.halfspaces) e["halfspaces"].push_back({{"normal", to_json(n)}, {"offset", c}});
            }
            arr.push_back(e);
        }
        out["obstacles"] = arr;
    }
    if (!s.screens.empty()) {
        json arr = json::array();
        for (const auto& c : s.screens) {
            json e = {{"id", c.id}, {"bc", to_string(c.bc)}, {"vertices", json::array()}};
            for (const auto& v : c.vertices) e["vertices"].push_back(to_json(v));
            arr.push_back(e);
        }
        out["screens"] = arr;
    }
    return out;
}

inline json to_json(const WaveSpec& w) {
    return std::visit(
        [&](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            json e = {{"id", w.id}, {"omega", v.omega}, {"d", to_json(v.d)}};
            if constexpr (std::is_same_v<T, AcousticWave>) {
                e["family"] = "acoustic";
            } else if constexpr (std::is_same_v<T, EMWave>) {
                e["family"] = "electromagnetic";
                e["p"] = to_json(v.p);
            } else {
                e["family"] = "elastic";
                e["lambda"] = v.lambda;
                e["mu"] = v.mu;
                e["rho"] = v.rho;
                e["q"] = to_json(v.q);
                e["cp"] = to_json(v.cp);
                e["cs"] = to_json(v.cs);
            }
            return e;
        },
        w.wave);
}

}  // namespace detail::scene

//! Canonical JSON form of a scene (sorted keys, explicit defaults).
inline json scene_to_json(const Scene& sc) {
    namespace d = detail::scene;
    json j = {{"version", 1}, {"dimension", sc.dimension}, {"scatterer", d::to_json(sc.scatterer_spec)}};
    if (sc.other_spec) j["other_scatterer"] = d::to_json(*sc.other_spec);
    if (!sc.waves.empty()) {
        j["waves"] = json::array();
        for (const auto& w : sc.waves) j["waves"].push_back(d::to_json(w));
    }
    if (sc.plan) {
        json p = {{"allowed_bcs", json::array()}};
        for (auto bc : sc.plan->allowed_bcs) p["allowed_bcs"].push_back(to_string(bc));
        if (sc.plan->scatterer_class) p["class"] = to_string(*sc.plan->scatterer_class);
        j["plan"] = p;
    }
    if (!sc.reflections.empty()) {
        j["reflections"] = json::array();
        for (const auto& r : sc.reflections)
            j["reflections"].push_back({{"id", r.id}, {"normal", d::to_json(r.normal)}, {"offset", r.offset}});
    }
    if (sc.trace) {
        json t = json::object();
        if (sc.trace->auto_seed) {
            t["seed"] = "auto";
        } else {
            t["point"] = d::to_json(sc.trace->point);
            t["normal"] = d::to_json(sc.trace->normal);
            if (sc.trace->clearance) t["clearance"] = *sc.trace->clearance;
        }
        if (sc.trace->bc) t["bc"] = to_string(*sc.trace->bc);
        j["trace"] = t;
    }
    if (sc.tolerances)
        j["tolerances"] = {{"reflect_check", sc.tolerances->reflect_check}, {"residual", sc.tolerances->residual}};
    return j;
}

inline std::string canonical_scene_text(const Scene& sc) { return scene_to_json(sc).dump(2) + "\n"; }

//! 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace polyref
