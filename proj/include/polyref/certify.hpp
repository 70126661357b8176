// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/waves.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

namespace polyref {

enum class ScattererClass { General, Obstacle };

inline std::string to_string(ScattererClass c) { return c == ScattererClass::General ? "general" : "obstacle"; }

inline ScattererClass scatterer_class_from_string(std::string_view s) {
    if (s == "general") return ScattererClass::General;
    if (s == "obstacle") return ScattererClass::Obstacle;
    throw ParseError("unknown scatterer class '" + std::string(s) + "'");
}

//! One incident wave per measurement; each hypothetical hyperplane may carry any of `allowed_bcs`.
struct MeasurementPlan {
    ScattererClass scatterer_class = ScattererClass::General;
    std::vector<BoundaryCondition> allowed_bcs;
    std::vector<IncidentWave> waves;

    int dimension() const { return waves.empty() ? 0 : dimension_of(waves.front()); }
};

inline std::vector<BoundaryCondition> sorted_bcs(const MeasurementPlan& plan) {
    auto v = plan.allowed_bcs;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline void validate(const MeasurementPlan& plan) {
    if (plan.allowed_bcs.empty()) throw InvariantError("plan", "allowed_bcs must be nonempty");
    if (plan.waves.empty()) throw InvariantError("plan", "at least one wave is required");
    for (std::size_t k = 0; k < plan.waves.size(); ++k) validate(plan.waves[k], "waves[" + std::to_string(k) + "]");
    const auto& w0 = plan.waves.front();
    for (BoundaryCondition bc : plan.allowed_bcs)
        for (const auto& w : plan.waves) require_compatible(bc, family_of(w));
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    for (std::size_t k = 1; k < plan.waves.size(); ++k) {
        const auto& w = plan.waves[k];
        const std::string id = "waves[" + std::to_string(k) + "]";
        if (family_of(w) != family_of(w0)) throw InvariantError(id, "all waves must belong to one family");
        if (dimension_of(w) != dimension_of(w0)) throw InvariantError(id, "all waves must share the dimension");
        const bool ok = std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                const auto& u = std::get<T>(w0);
                if constexpr (std::is_same_v<T, ElasticWave>)
                    return same(v.omega, u.omega) && same(v.lambda, u.lambda) && same(v.mu, u.mu) && same(v.rho, u.rho);
                else
                    return same(v.omega, u.omega);
            },
            w);
        if (!ok) throw InvariantError(id, "frequency and material parameters must match waves[0]");
    }
}

// ---------------------------------------------------------------------------
// Per-hyperplane moduli

inline bool is_mixed(const IncidentWave& w) {
    const auto* e = std::get_if<ElasticWave>(&w);
    return e && !e->pure_longitudinal() && !e->pure_transversal();
}

/*!
 * Closed-form |Bu| on any hyperplane with unit normal ν.  Valid for waves with
 * a single plane-wave term, where the modulus does not depend on the point.
 */
inline double closed_form_modulus(BoundaryCondition bc, const IncidentWave& w, const Vec& nu) {
    require_compatible(bc, family_of(w));
    if (is_mixed(w)) throw PreconditionError("closed-form modulus is undefined for mixed elastic waves");
    switch (bc) {
        case BoundaryCondition::Dirichlet: return 1.0;
        case BoundaryCondition::Neumann: {
            const auto& a = std::get<AcousticWave>(w);
            return a.omega * std::abs(a.d.dot(nu));
        }
        case BoundaryCondition::PEC: {
            const auto& m = std::get<EMWave>(w);
            return m.omega * cross(nu, cross(m.q(), m.d)).norm();
        }
        case BoundaryCondition::PMC: {
            const auto& m = std::get<EMWave>(w);
            return m.omega * cross(nu, cross(m.p, m.d)).norm();
        }
        case BoundaryCondition::ElasticThird:
        case BoundaryCondition::ElasticFourth: {
            const auto& e = std::get<ElasticWave>(w);
            const double a = e.d.dot(nu), mu = e.mu, lam = e.lambda;
            const bool third = bc == BoundaryCondition::ElasticThird;
            // Tangential norms are formed directly; 1 − a² cancels badly near |a| = 1.
            const double dt2 = (e.d - a * nu).squaredNorm();
            double s;
            if (e.pure_longitudinal()) {
                const double wp = e.omega_p();
                s = third ? a * a + std::pow(2 * mu * wp * a, 2) * dt2 : dt2 + std::pow(wp * (2 * mu * a * a + lam), 2);
            } else {
                const double b = e.q.dot(nu), ws = e.omega_s();
                const Vec qt = e.q - b * nu;
                s = third ? b * b + mu * mu * ws * ws * (b * (e.d - a * nu) + a * qt).squaredNorm()
                          : qt.squaredNorm() + std::pow(2 * mu * ws * a * b, 2);
            }
            return std::sqrt(std::max(0.0, s));
        }
    }
    return 0.0;
}

/*!
 * sup of |Bu| over a hyperplane with normal ν, evaluated through the boundary
 * operator.  For mixed elastic waves the two terms carry different wave
 * numbers along d, so every relative phase is attained on the plane unless
 * d ∥ ν, in which case the offset fixes the phase and the adversary picks it.
 */
inline double plane_sup_modulus(BoundaryCondition bc, const IncidentWave& w, const Vec& nu) {
    const Vec origin = Vec::Zero(nu.size());
    if (!is_mixed(w)) return eval_boundary_operator(bc, w, origin, nu).norm();
    const auto& e = std::get<ElasticWave>(w);
    const auto [lon, tra] = helmholtz_decompose(e);
    const CVec a = boundary_operator(bc, lon, origin, nu), b = boundary_operator(bc, tra, origin, nu);
    if (std::abs(e.omega_p() - e.omega_s()) <= 1e-12 * e.omega_s()) return (a + b).norm();
    const double cross_term = 2.0 * std::abs(a.dot(b));
    const bool along = tangential(e.d, nu).norm() <= 1e-12;
    return std::sqrt(std::max(0.0, a.squaredNorm() + b.squaredNorm() + (along ? -cross_term : cross_term)));
}

// ---------------------------------------------------------------------------
// Vanishing sets

struct VanishingSet {
    enum class Kind { Empty, Subspace, Sampled };
    Kind kind = Kind::Empty;
    Mat basis;                 // Subspace: orthonormal columns
    std::vector<Vec> samples;  // Sampled: unit normals with vanishing modulus

    int dim() const { return kind == Kind::Subspace ? static_cast<int>(basis.cols()) : 0; }
    bool contains(const Vec& nu, double eps = 1e-9) const {
        switch (kind) {
            case Kind::Empty: return false;
            case Kind::Subspace: return (nu - basis * (basis.transpose() * nu)).norm() <= eps;
            case Kind::Sampled:
                return std::any_of(samples.begin(), samples.end(), [&](const Vec& s) {
                    return std::min((s - nu).norm(), (s + nu).norm()) <= eps;
                });
        }
        return false;
    }
};

inline std::string to_string(VanishingSet::Kind k) {
    switch (k) {
        case VanishingSet::Kind::Empty: return "empty";
        case VanishingSet::Kind::Subspace: return "subspace";
        case VanishingSet::Kind::Sampled: return "sampled";
    }
    return "?";
}

namespace detail {

inline VanishingSet subspace_set(const Mat& basis) {
    if (basis.cols() == 0) return {};
    return {VanishingSet::Kind::Subspace, basis, {}};
}

inline VanishingSet complement_set(const Mat& rows) { return subspace_set(null_space(rows)); }

inline VanishingSet span_set(const Vec& v) { return subspace_set(Mat(v.normalized())); }

}  // namespace detail

struct OracleResult;
inline std::vector<Vec> sampled_vanishing_normals(BoundaryCondition bc, const IncidentWave& w, int grid_density,
                                                  std::uint64_t seed);

//! Unit normals ν for which |Bu| vanishes on every hyperplane with normal ν.
inline VanishingSet vanishing_normal_set(BoundaryCondition bc, const IncidentWave& w) {
    require_compatible(bc, family_of(w));
    if (is_mixed(w)) return {VanishingSet::Kind::Sampled, Mat(), sampled_vanishing_normals(bc, w, 256, 0)};
    switch (bc) {
        case BoundaryCondition::Dirichlet: return {};
        case BoundaryCondition::Neumann: return detail::complement_set(std::get<AcousticWave>(w).d.transpose());
        case BoundaryCondition::PEC: {
            const auto& m = std::get<EMWave>(w);
            return detail::span_set(cross(m.q(), m.d));
        }
        case BoundaryCondition::PMC: {
            const auto& m = std::get<EMWave>(w);
            return detail::span_set(cross(m.p, m.d));
        }
        case BoundaryCondition::ElasticThird: {
            const auto& e = std::get<ElasticWave>(w);
            if (e.pure_longitudinal()) return detail::complement_set(e.d.transpose());
            Mat rows(2, e.d.size());
            rows.row(0) = e.d.transpose();
            rows.row(1) = e.q.transpose();
            return detail::complement_set(rows);
        }
        case BoundaryCondition::ElasticFourth: {
            const auto& e = std::get<ElasticWave>(w);
            if (e.pure_longitudinal()) return {};
            return detail::span_set(e.q);
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Minimisation over unit spheres of subspaces

namespace detail {

struct SphereMin {
    Vec point;
    double value = std::numeric_limits<double>::infinity();
};

using SphereFn = std::function<double(const Vec&)>;

/*!
 * Local refinement on the unit sphere of span(U): a (2g+1)^(m-1) grid on the
 * tangent plane around the current point, recentred on its best node and
 * shrunk by half per level until the radius falls below 1e-12.
 */
inline SphereMin zoom_refine(const SphereFn& f, const Mat& U, const Vec& seed, double r0) {
    const auto m = U.cols();
    Vec s = U.transpose() * seed;
    if (s.norm() < 1e-12) return {};
    s.normalize();
    SphereMin best{U * s, f(U * s)};
    if (m == 1) return best;
    constexpr int g = 3;
    for (double r = r0; r > 1e-12; r *= 0.5) {
        const Mat t = orthogonal_complement(s);
        Vec next = s;
        double next_value = best.value;
        const int jlo = m == 2 ? 0 : -g, jhi = m == 2 ? 0 : g;
        for (int i = -g; i <= g; ++i) {
            for (int j = jlo; j <= jhi; ++j) {
                if (i == 0 && j == 0) continue;
                Vec c = s + (r * i / g) * t.col(0);
                if (m >= 3) c += (r * j / g) * t.col(1);
                c.normalize();
                const double v = f(U * c);
                if (v < next_value) {
                    next_value = v;
                    next = c;
                }
            }
        }
        s = next;
        best = {U * s, next_value};
    }
    return best;
}

inline double max_of(const std::vector<SphereFn>& fs, const Vec& nu) {
    double m = 0.0;
    for (const auto& f : fs) m = std::max(m, f(nu));
    return m;
}

//! min over |δ|∞ ≤ Δ of max_i (f_i + g_i·δ) for δ of dimension ≤ 2, by vertex enumeration.
inline std::pair<Vec, double> minimax_lp(const std::vector<double>& f, const std::vector<Vec>& g, double delta) {
    const auto d = g.front().size();
    auto model = [&](const Vec& x) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, f[i] + g[i].dot(x));
        return m;
    };
    std::pair<Vec, double> best{Vec::Zero(d), model(Vec::Zero(d))};
    auto offer = [&](const Vec& x) {
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > delta * (1 + 1e-12)) return;
        const double v = model(x);
        if (v < best.second) best = {x, v};
    };
    const std::size_t k = f.size();
    if (d == 1) {
        offer(Vec::Constant(1, -delta));
        offer(Vec::Constant(1, delta));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                offer(Vec::Constant(1, (f[j] - f[i]) / (g[i](0) - g[j](0))));
        return best;
    }
    for (double a : {-delta, delta})
        for (double b : {-delta, delta}) offer(vec2(a, b));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            // Line (g_i − g_j)·δ = f_j − f_i against the four box edges.
            const Vec a = g[i] - g[j];
            const double c = f[j] - f[i];
            for (double e : {-delta, delta}) {
                if (std::abs(a(1)) > 0) offer(vec2(e, (c - a(0) * e) / a(1)));
                if (std::abs(a(0)) > 0) offer(vec2((c - a(1) * e) / a(0), e));
            }
            for (std::size_t l = j + 1; l < k; ++l) {
                Eigen::Matrix2d M;
                M.row(0) = a.transpose();
                M.row(1) = (g[i] - g[l]).transpose();
                if (std::abs(M.determinant()) < 1e-300) continue;
                offer(M.inverse() * Eigen::Vector2d(c, f[l] - f[i]));
            }
        }
    return best;
}

/*!
 * Trust-region sequential linear programming for min over unit ν ∈ span(U)
 * of max_i f_i(ν).  Each step minimises the max of the linearised components
 * over a box in the tangent plane; gradients are central differences.
 */
inline SphereMin minimax_polish(const std::vector<SphereFn>& fs, const Mat& U, const SphereMin& start, double r0) {
    const auto m = U.cols();
    if (m == 1 || fs.empty() || !start.point.size()) return start;
    Vec p = (U.transpose() * start.point).normalized();
    auto eval = [&](const Vec& q) { return max_of(fs, U * q); };
    double F = eval(p);
    double delta = r0;
    std::vector<double> f(fs.size());
    std::vector<Vec> g(fs.size());
    for (int it = 0; it < 400 && delta > 1e-14; ++it) {
        const Mat t = orthogonal_complement(p);
        const double h = std::clamp(1e-3 * delta, 1e-12, 1e-6);
        auto at = [&](const Vec& dl) { return Vec((p + t * dl).normalized()); };
        for (std::size_t i = 0; i < fs.size(); ++i) {
            f[i] = fs[i](U * p);
            g[i] = Vec(t.cols());
            for (Eigen::Index c = 0; c < t.cols(); ++c) {
                const Vec e = Vec::Unit(t.cols(), c) * h;
                g[i](c) = (fs[i](U * at(e)) - fs[i](U * at(-e))) / (2 * h);
            }
        }
        const auto [step, predicted] = minimax_lp(f, g, delta);
        const double pred = F - predicted;
        if (!(pred > 1e-16 * std::max(1.0, F))) {
            delta *= 0.25;
            continue;
        }
        const Vec q = at(step);
        const double Fq = eval(q);
        const double rho = (F - Fq) / pred;
        if (rho > 0.1) {
            p = q;
            F = Fq;
            if (rho > 0.75 && step.cwiseAbs().maxCoeff() > 0.99 * delta) delta = std::min(2 * delta, 0.5);
        } else {
            delta *= 0.25;
        }
    }
    return F < start.value ? SphereMin{U * p, F} : start;
}

//! Greedy pick of up to `k` lowest-value points, pairwise farther than `sep` (also from antipodes).
inline std::vector<Vec> pick_seeds(const std::vector<Vec>& pts, const std::vector<double>& vals, std::size_t k,
                                   double sep) {
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<Vec> out;
    for (std::size_t i : order) {
        if (out.size() >= k) break;
        const bool far = std::all_of(out.begin(), out.end(), [&](const Vec& o) {
            return std::min((o - pts[i]).norm(), (o + pts[i]).norm()) > sep;
        });
        if (far) out.push_back(pts[i]);
    }
    return out;
}

//! Coarse zoom followed by a minimax polish from every seed; the best result.
inline SphereMin refine_all(const std::vector<SphereFn>& fs, const Mat& U, const std::vector<Vec>& seeds, double r0) {
    const SphereFn f = [&fs](const Vec& nu) { return max_of(fs, nu); };
    SphereMin best;
    for (const auto& s : seeds) {
        const SphereMin c = minimax_polish(fs, U, zoom_refine(f, U, s, r0), r0);
        if (c.value < best.value) best = c;
    }
    return best;
}

//! Latitude/longitude grid on the unit sphere of span(U), returned in ambient coordinates.
inline std::vector<Vec> latlong_grid(const Mat& U, int rows) {
    std::vector<Vec> out;
    const auto m = U.cols();
    if (m == 1) return {U.col(0)};
    if (m == 2) {
        for (int i = 0; i < 2 * rows; ++i) {
            const double t = pi * i / rows;
            out.push_back(U * vec2(std::cos(t), std::sin(t)));
        }
        return out;
    }
    for (int i = 0; i <= rows; ++i) {
        const double th = pi * i / rows;
        const int cols = std::max(1, static_cast<int>(std::ceil(2 * rows * std::sin(th))));
        for (int j = 0; j < cols; ++j) {
            const double ph = 2 * pi * j / cols;
            out.push_back(U * vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)));
        }
    }
    return out;
}

//! Fibonacci grid with `density` points per great circle, rotated by a seeded random rotation.
inline std::vector<Vec> fibonacci_grid(const Mat& U, int density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const auto m = U.cols();
    if (m == 1) return {U.col(0)};
    std::vector<Vec> out;
    if (m == 2) {
        const double phase = std::uniform_real_distribution<double>(0, 2 * pi)(rng);
        for (int i = 0; i < density; ++i) {
            const double t = phase + 2 * pi * i / density;
            out.push_back(U * vec2(std::cos(t), std::sin(t)));
        }
        return out;
    }
    Mat g(3, 3);
    for (Eigen::Index i = 0; i < 9; ++i) g(i) = gauss(rng);
    const Mat rot = Eigen::HouseholderQR<Mat>(g).householderQ();
    const int n = static_cast<int>(std::ceil(density * double(density) / pi));
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        out.push_back(U * (rot * vec3(r * std::cos(golden * i), r * std::sin(golden * i), z)));
    }
    return out;
}

inline SphereMin grid_minimize(const std::vector<SphereFn>& fs, const Mat& U, const std::vector<Vec>& grid,
                               std::size_t k, double spacing, const std::vector<Vec>& extra = {}) {
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = max_of(fs, grid[i]);
    SphereMin best = refine_all(fs, U, pick_seeds(grid, vals, k, 2 * spacing), spacing);
    for (const auto& e : extra) {
        Vec p = U * (U.transpose() * e);
        if (p.norm() < 1e-12) continue;
        p.normalize();
        const double v = max_of(fs, p);
        if (v < best.value) best = {p, v};
    }
    return best;
}

//! Orthonormal basis of the complement of span(W) in ℝⁿ.
inline Mat complement_basis(const Mat& W, int n) {
    if (W.cols() == 0) return Mat::Identity(n, n);
    return null_space(W.transpose());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Certificates

enum class CertMethod { Analytic, Sampled };

inline std::string to_string(CertMethod m) { return m == CertMethod::Analytic ? "analytic" : "sampled"; }

//! The sufficient condition for uniqueness holds; `normal` attains the margin under `bc`.
struct CriterionHolds {
    double margin = 0.0;
    Vec normal;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
};

//! The argument does not apply: every wave vanishes on hyperplanes with these normals.
struct CriterionFails {
    std::vector<Vec> normals;
    std::vector<BoundaryCondition> bcs;
};

struct ModulusRow {
    std::size_t normal = 0;
    std::size_t wave = 0;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    double modulus = 0.0;
};

struct Certificate {
    ScattererClass scatterer_class = ScattererClass::General;
    std::variant<CriterionHolds, CriterionFails> verdict;
    CertMethod method = CertMethod::Analytic;
    int vanishing_span_dim = 0;
    std::vector<ModulusRow> details;

    bool holds() const { return std::holds_alternative<CriterionHolds>(verdict); }
    std::vector<Vec> normals() const {
        if (holds()) return {std::get<CriterionHolds>(verdict).normal};
        return std::get<CriterionFails>(verdict).normals;
    }
};

struct CertifyOptions {
    int grid_density = 256;
    std::uint64_t seed = 0;
    double radius = 1.0;  // R for witness re-evaluation
};

struct OracleResult {
    double worst_value = 0.0;
    std::vector<Vec> normals;
    std::vector<BoundaryCondition> bcs;
    int vanishing_span_dim = 0;
    bool vanishing() const { return worst_value <= tol::vanishing; }
};

namespace detail {

using ModulusFn = std::function<double(BoundaryCondition, const IncidentWave&, const Vec&)>;

//! One modulus function per wave.
inline std::vector<SphereFn> wave_moduli(const ModulusFn& mod, BoundaryCondition bc,
                                         const std::vector<IncidentWave>& waves) {
    std::vector<SphereFn> out;
    for (const auto& w : waves) out.push_back([&mod, bc, &w](const Vec& nu) { return mod(bc, w, nu); });
    return out;
}

//! min over the allowed conditions of max over waves, with the minimising condition.
inline std::pair<double, BoundaryCondition> adversarial_value(const ModulusFn& mod, const MeasurementPlan& plan,
                                                              const Vec& nu) {
    std::pair<double, BoundaryCondition> best{std::numeric_limits<double>::infinity(), BoundaryCondition::Dirichlet};
    for (BoundaryCondition bc : sorted_bcs(plan)) {
        const double v = max_of(wave_moduli(mod, bc, plan.waves), nu);
        if (v < best.first) best = {v, bc};
    }
    return best;
}

inline std::vector<Vec> analytic_extras(const MeasurementPlan& plan) {
    std::vector<Vec> out;
    const int n = plan.dimension();
    for (int i = 0; i < n; ++i) out.push_back(Vec::Unit(n, i));
    for (const auto& w : plan.waves) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                out.push_back(v.d);
                if constexpr (std::is_same_v<T, EMWave>) {
                    out.push_back(v.p.normalized());
                    out.push_back(v.q().normalized());
                } else if constexpr (std::is_same_v<T, ElasticWave>) {
                    out.push_back(v.q);
                    if (n == 3) out.push_back(cross(v.d, v.q));
                }
            },
            w);
    }
    return out;
}

//! Minimum of the adversarial value over unit normals in span(U).
inline CriterionHolds minimize_value(const ModulusFn& mod, const MeasurementPlan& plan, const Mat& U,
                                     const std::vector<Vec>& grid, double spacing,
                                     const std::vector<Vec>& extra) {
    CriterionHolds best{std::numeric_limits<double>::infinity(), Vec(), BoundaryCondition::Dirichlet};
    for (BoundaryCondition bc : sorted_bcs(plan)) {
        const SphereMin s = grid_minimize(wave_moduli(mod, bc, plan.waves), U, grid, 8, spacing, extra);
        if (s.value < best.margin) best = {s.value, s.point, bc};
    }
    best.normal *= canonical_sign(best.normal);
    return best;
}

inline void fill_details(Certificate& c, const MeasurementPlan& plan) {
    const auto normals = c.normals();
    for (std::size_t i = 0; i < normals.size(); ++i)
        for (std::size_t k = 0; k < plan.waves.size(); ++k)
            for (BoundaryCondition bc : sorted_bcs(plan))
                c.details.push_back({i, k, bc, plane_sup_modulus(bc, plan.waves[k], normals[i])});
}

inline void verify_witness(const Certificate& c, const MeasurementPlan& plan, double radius) {
    if (c.holds()) return;
    const auto& f = std::get<CriterionFails>(c.verdict);
    for (std::size_t i = 0; i < f.normals.size(); ++i)
        for (const auto& w : plan.waves) {
            const double v = profile_value(boundary_modulus_profile(f.bcs[i], w, Hyperplane(f.normals[i], 0.0), radius));
            if (v > tol::vanishing)
                throw ComputationError("witness normal " + std::to_string(i) + " does not verify (modulus " +
                                       std::to_string(v) + ")");
        }
}

//! Unit normals where every wave vanishes under `bc`, found by grid search and refinement.
inline std::vector<Vec> oracle_zeros(const ModulusFn& mod, BoundaryCondition bc, const std::vector<IncidentWave>& waves,
                                     int n, int density, std::uint64_t seed) {
    const Mat U = Mat::Identity(n, n);
    const auto fs = wave_moduli(mod, bc, waves);
    const auto grid = fibonacci_grid(U, density, seed);
    const double spacing = 2 * pi / density;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = max_of(fs, grid[i]);
    std::vector<Vec> zeros;
    for (const auto& s : pick_seeds(grid, vals, 12, 2 * spacing)) {
        const SphereMin r = refine_all(fs, U, {s}, spacing);
        if (r.value <= tol::vanishing) zeros.push_back(r.point * canonical_sign(r.point));
    }
    return zeros;
}

//! Greedy choice of independent columns; returns indices.
inline std::vector<std::size_t> independent_subset(const std::vector<Vec>& vs, int n, double threshold) {
    std::vector<std::size_t> idx;
    Mat acc(n, 0);
    for (std::size_t i = 0; i < vs.size() && static_cast<int>(idx.size()) < n; ++i) {
        Mat trial(n, acc.cols() + 1);
        trial << acc, vs[i];
        if (matrix_rank(trial, threshold) == trial.cols()) {
            acc = trial;
            idx.push_back(i);
        }
    }
    return idx;
}

inline double fibonacci_spacing(int density) { return 2 * pi / density; }

}  // namespace detail

/*!
 * Brute-force search over a seeded Fibonacci grid with `grid_density` points
 * per great circle, refined locally.  General: the smallest adversarial value
 * and its normal.  Obstacle: N independent vanishing normals when found;
 * otherwise the smallest value over normals orthogonal to every vanishing one.
 */
inline OracleResult sampling_oracle(const MeasurementPlan& plan, int grid_density = 256, std::uint64_t seed = 0) {
    validate(plan);
    if (grid_density < 64) throw PreconditionError("grid density must be at least 64 per great circle");
    const detail::ModulusFn mod = plane_sup_modulus;
    const int n = plan.dimension();
    const double spacing = detail::fibonacci_spacing(grid_density);
    std::vector<Vec> extra;
    for (const auto& w : plan.waves)
        if (is_mixed(w)) extra.push_back(std::get<ElasticWave>(w).d);

    auto search = [&](const Mat& U) {
        return detail::minimize_value(mod, plan, U, detail::fibonacci_grid(U, grid_density, seed), spacing, extra);
    };

    OracleResult out;
    if (plan.scatterer_class == ScattererClass::General) {
        const CriterionHolds m = search(Mat::Identity(n, n));
        out.worst_value = m.margin;
        out.normals = {m.normal};
        out.bcs = {m.bc};
        return out;
    }
    std::vector<Vec> zeros;
    std::vector<BoundaryCondition> zero_bcs;
    for (BoundaryCondition bc : sorted_bcs(plan))
        for (const Vec& z : detail::oracle_zeros(mod, bc, plan.waves, n, grid_density, seed)) {
            zeros.push_back(z);
            zero_bcs.push_back(bc);
        }
    const auto idx = detail::independent_subset(zeros, n, 1e-6);
    out.vanishing_span_dim = static_cast<int>(idx.size());
    if (static_cast<int>(idx.size()) == n) {
        for (std::size_t i : idx) {
            out.normals.push_back(zeros[i]);
            out.bcs.push_back(zero_bcs[i]);
            out.worst_value = std::max(out.worst_value, detail::adversarial_value(mod, plan, zeros[i]).first);
        }
        return out;
    }
    Mat W(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) W.col(static_cast<Eigen::Index>(j)) = zeros[idx[j]];
    const CriterionHolds m = search(detail::complement_basis(column_span(W, 1e-6), n));
    out.worst_value = m.margin;
    out.normals = {m.normal};
    out.bcs = {m.bc};
    return out;
}

inline std::vector<Vec> sampled_vanishing_normals(BoundaryCondition bc, const IncidentWave& w, int grid_density,
                                                  std::uint64_t seed) {
    return detail::oracle_zeros(plane_sup_modulus, bc, {w}, dimension_of(w), grid_density, seed);
}

namespace detail {

inline Certificate from_oracle(const MeasurementPlan& plan, const CertifyOptions& opt) {
    const OracleResult r = sampling_oracle(plan, opt.grid_density, opt.seed);
    Certificate c;
    c.scatterer_class = plan.scatterer_class;
    c.method = CertMethod::Sampled;
    c.vanishing_span_dim = r.vanishing_span_dim;
    if (r.vanishing())
        c.verdict = CriterionFails{r.normals, r.bcs};
    else
        c.verdict = CriterionHolds{r.worst_value, r.normals.front(), r.bcs.front()};
    return c;
}

//! Per allowed condition, the exact intersection over waves of the vanishing subspaces (empty → 0 columns).
inline std::vector<std::pair<BoundaryCondition, Mat>> common_vanishing(const MeasurementPlan& plan) {
    const int n = plan.dimension();
    std::vector<std::pair<BoundaryCondition, Mat>> out;
    for (BoundaryCondition bc : sorted_bcs(plan)) {
        Mat rows(0, n);
        bool empty = false;
        for (const auto& w : plan.waves) {
            const VanishingSet v = vanishing_normal_set(bc, w);
            if (v.kind == VanishingSet::Kind::Empty) {
                empty = true;
                break;
            }
            const Mat c = complement_basis(v.basis, n);
            Mat next(rows.rows() + c.cols(), n);
            next << rows, c.transpose();
            rows = next;
        }
        out.emplace_back(bc, empty ? Mat(n, 0) : null_space(rows));
    }
    return out;
}

inline Certificate analytic(const MeasurementPlan& plan) {
    const int n = plan.dimension();
    const ModulusFn mod = closed_form_modulus;
    const auto common = common_vanishing(plan);
    Certificate c;
    c.scatterer_class = plan.scatterer_class;
    c.method = CertMethod::Analytic;

    auto margin_over = [&](const Mat& U) {
        constexpr int rows = 90;
        return minimize_value(mod, plan, U, latlong_grid(U, rows), pi / rows, analytic_extras(plan));
    };
    auto holds_or_degenerate = [&](const Mat& U) {
        const CriterionHolds h = margin_over(U);
        if (h.margin > tol::vanishing) return std::variant<CriterionHolds, CriterionFails>(h);
        return std::variant<CriterionHolds, CriterionFails>(CriterionFails{{h.normal}, {h.bc}});
    };

    if (plan.scatterer_class == ScattererClass::General) {
        for (const auto& [bc, Z] : common) {
            if (Z.cols() == 0) continue;
            Vec nu = Z.col(0);
            nu *= canonical_sign(nu);
            c.verdict = CriterionFails{{nu}, {bc}};
            c.vanishing_span_dim = static_cast<int>(Z.cols());
            return c;
        }
        c.verdict = holds_or_degenerate(Mat::Identity(n, n));
        return c;
    }

    std::vector<Vec> cols;
    std::vector<BoundaryCondition> col_bcs;
    for (const auto& [bc, Z] : common)
        for (Eigen::Index j = 0; j < Z.cols(); ++j) {
            cols.push_back(Z.col(j) * canonical_sign(Z.col(j)));
            col_bcs.push_back(bc);
        }
    const auto idx = independent_subset(cols, n, tol::rank);
    c.vanishing_span_dim = static_cast<int>(idx.size());
    if (static_cast<int>(idx.size()) == n) {
        CriterionFails f;
        for (std::size_t i : idx) {
            f.normals.push_back(cols[i]);
            f.bcs.push_back(col_bcs[i]);
        }
        c.verdict = f;
        return c;
    }
    Mat W(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) W.col(static_cast<Eigen::Index>(j)) = cols[idx[j]];
    const auto v = holds_or_degenerate(complement_basis(column_span(W), n));
    if (std::holds_alternative<CriterionHolds>(v)) {
        c.verdict = v;
        return c;
    }
    // A numerically vanishing normal outside the exact span: report it together with the span.
    CriterionFails f = std::get<CriterionFails>(v);
    for (std::size_t i : idx) {
        f.normals.push_back(cols[i]);
        f.bcs.push_back(col_bcs[i]);
    }
    c.verdict = f;
    return c;
}

inline Certificate certify(const MeasurementPlan& plan, const CertifyOptions& opt) {
    validate(plan);
    const bool sampled = std::any_of(plan.waves.begin(), plan.waves.end(), is_mixed);
    Certificate c = sampled ? from_oracle(plan, opt) : analytic(plan);
    verify_witness(c, plan, opt.radius);
    fill_details(c, plan);
    return c;
}

}  // namespace detail

//! Sufficient condition for general scatterers: no hyperplane on which every wave's boundary modulus vanishes.
inline Certificate certify_general(MeasurementPlan plan, const CertifyOptions& opt = {}) {
    if (plan.scatterer_class != ScattererClass::General)
        throw PreconditionError("certify_general requires scatterer class 'general'");
    return detail::certify(plan, opt);
}

//! Sufficient condition for polyhedral obstacles: vanishing normals do not span ℝᴺ.
inline Certificate certify_obstacle(MeasurementPlan plan, const CertifyOptions& opt = {}) {
    if (plan.scatterer_class != ScattererClass::Obstacle)
        throw PreconditionError("certify_obstacle requires scatterer class 'obstacle'");
    return detail::certify(plan, opt);
}

inline double margin_of(const Certificate& c) {
    return c.holds() ? std::get<CriterionHolds>(c.verdict).margin : 0.0;
}

}  // namespace polyref
