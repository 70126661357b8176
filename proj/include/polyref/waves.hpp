// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/boundary.hpp"
#include "polyref/geom/hyperplane.hpp"

#include <random>
#include <variant>

namespace polyref {

inline constexpr cplx I{0.0, 1.0};

struct AcousticWave {
    double omega = 1.0;
    Vec d;
};

//! EM plane wave with polarisation p ⊥ d; q = p × d.
struct EMWave {
    double omega = 1.0;
    Vec d;
    Vec p;
    Vec q() const { return cross(p, d); }
};

struct ElasticWave {
    double lambda = 1.0, mu = 1.0, rho = 1.0, omega = 1.0;
    Vec d, q;
    cplx cp{1.0, 0.0}, cs{0.0, 0.0};

    double omega_p() const { return std::sqrt(rho * omega * omega / (lambda + 2.0 * mu)); }
    double omega_s() const { return std::sqrt(rho * omega * omega / mu); }
    bool pure_longitudinal() const { return std::abs(cs) == 0.0; }
    bool pure_transversal() const { return std::abs(cp) == 0.0; }
};

using IncidentWave = std::variant<AcousticWave, EMWave, ElasticWave>;

inline WaveFamily family_of(const IncidentWave& w) {
    return static_cast<WaveFamily>(w.index());
}

inline int dimension_of(const IncidentWave& w) {
    return std::visit([](const auto& v) { return static_cast<int>(v.d.size()); }, w);
}

//! Throws InvariantError naming `id` when a parameter invariant is violated.
inline void validate(const IncidentWave& w, const std::string& id = "wave") {
    auto unit = [&](const Vec& v, const char* what) {
        if (std::abs(v.norm() - 1.0) > tol::unit) throw InvariantError(id, std::string(what) + " must be a unit vector");
    };
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if (v.d.size() != 2 && v.d.size() != 3) throw InvariantError(id, "dimension must be 2 or 3");
            unit(v.d, "direction d");
            if (!(v.omega > 0.0)) throw InvariantError(id, "omega must be positive");
            if constexpr (std::is_same_v<T, EMWave>) {
                if (v.d.size() != 3) throw InvariantError(id, "electromagnetic waves require N = 3");
                if (v.p.size() != 3 || v.p.norm() <= tol::unit) throw InvariantError(id, "polarisation p must be a nonzero 3-vector");
                if (std::abs(v.p.dot(v.d)) > tol::unit * std::max(1.0, v.p.norm())) throw InvariantError(id, "p must be orthogonal to d");
            } else if constexpr (std::is_same_v<T, ElasticWave>) {
                if (!(v.mu > 0.0)) throw InvariantError(id, "mu must be positive");
                if (!(v.lambda + 2.0 * v.mu > 0.0)) throw InvariantError(id, "lambda + 2 mu must be positive");
                if (!(v.rho > 0.0)) throw InvariantError(id, "rho must be positive");
                if (v.q.size() != v.d.size()) throw InvariantError(id, "q must have the dimension of d");
                unit(v.q, "polarisation q");
                if (std::abs(v.q.dot(v.d)) > tol::unit) throw InvariantError(id, "q must be orthogonal to d");
                if (std::abs(std::norm(v.cp) + std::norm(v.cs) - 1.0) > tol::unit)
                    throw InvariantError(id, "|cp|^2 + |cs|^2 must equal 1");
            }
        },
        w);
}

inline void require_compatible(BoundaryCondition bc, WaveFamily f) {
    if (family_of(bc) != f)
        throw PreconditionError(std::string("boundary condition ") + to_string(bc) + " does not apply to " + to_string(f) +
                                " waves");
}

// ---------------------------------------------------------------------------
// Plane-wave superpositions

enum class TermKind { Scalar, Electromagnetic, Longitudinal, Transversal };

//! amp · exp(i κ d·x); amp has 1 (acoustic), 6 (E stacked over H) or N (elastic) entries.
struct PlaneTerm {
    CVec amp;
    Vec dir;
    double kappa = 1.0;
    TermKind kind = TermKind::Scalar;
};

struct Medium {
    double omega = 1.0;
    double lambda = 0.0, mu = 0.0, rho = 0.0;
    double omega_p() const { return std::sqrt(rho * omega * omega / (lambda + 2.0 * mu)); }
    double omega_s() const { return std::sqrt(rho * omega * omega / mu); }
};

struct Field {
    WaveFamily family = WaveFamily::Acoustic;
    int dim = 3;
    Medium medium;
    std::vector<PlaneTerm> terms;

    int components() const {
        switch (family) {
            case WaveFamily::Acoustic: return 1;
            case WaveFamily::Electromagnetic: return 6;
            case WaveFamily::Elastic: return dim;
        }
        return 0;
    }

    CVec value(const Vec& x) const {
        CVec v = CVec::Zero(components());
        for (const auto& t : terms) v += t.amp * std::exp(I * t.kappa * t.dir.dot(x));
        return v;
    }

    //! J(a, j) = ∂u_a / ∂x_j.
    CMat jacobian(const Vec& x) const {
        CMat j = CMat::Zero(components(), dim);
        for (const auto& t : terms)
            j += (I * t.kappa * std::exp(I * t.kappa * t.dir.dot(x))) * t.amp * t.dir.transpose().cast<cplx>();
        return j;
    }

    Field operator+(const Field& o) const {
        Field f = *this;
        f.terms.insert(f.terms.end(), o.terms.begin(), o.terms.end());
        return f;
    }
    Field scaled(cplx s) const {
        Field f = *this;
        for (auto& t : f.terms) t.amp *= s;
        return f;
    }
};

inline Field to_field(const IncidentWave& w) {
    return std::visit(
        [](const auto& v) -> Field {
            using T = std::decay_t<decltype(v)>;
            Field f;
            f.dim = static_cast<int>(v.d.size());
            f.medium.omega = v.omega;
            if constexpr (std::is_same_v<T, AcousticWave>) {
                f.family = WaveFamily::Acoustic;
                f.terms.push_back({CVec::Ones(1), v.d, v.omega, TermKind::Scalar});
            } else if constexpr (std::is_same_v<T, EMWave>) {
                f.family = WaveFamily::Electromagnetic;
                CVec amp(6);
                amp.head(3) = (-I * v.omega) * cross(v.q(), v.d).template cast<cplx>();
                amp.tail(3) = (-I * v.omega) * cross(v.p, v.d).template cast<cplx>();
                f.terms.push_back({amp, v.d, v.omega, TermKind::Electromagnetic});
            } else {
                f.family = WaveFamily::Elastic;
                f.medium.lambda = v.lambda;
                f.medium.mu = v.mu;
                f.medium.rho = v.rho;
                if (v.cp != cplx(0.0)) f.terms.push_back({v.cp * v.d.template cast<cplx>(), v.d, v.omega_p(), TermKind::Longitudinal});
                if (v.cs != cplx(0.0)) f.terms.push_back({v.cs * v.q.template cast<cplx>(), v.d, v.omega_s(), TermKind::Transversal});
            }
            return f;
        },
        w);
}

inline CVec eval_field(const IncidentWave& w, const Vec& x) { return to_field(w).value(x); }

// ---------------------------------------------------------------------------
// Boundary operators

inline Vec tangential(const Vec& v, const Vec& nu) { return v - v.dot(nu) * nu; }
inline CVec tangential(const CVec& v, const Vec& nu) {
    const CVec n = nu.cast<cplx>();
    return v - (n.transpose() * v)(0) * n;
}
inline CVec cross_c(const CVec& a, const Vec& b) {
    CVec c(3);
    c << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
    return c;
}

//! σ = μ(J + Jᵀ) + λ tr(J) I for an elastic field.
inline CMat stress(const Field& f, const Vec& x) {
    const CMat j = f.jacobian(x);
    return f.medium.mu * (j + j.transpose()) + (f.medium.lambda * j.trace()) * CMat::Identity(f.dim, f.dim);
}

//! Boundary operator of a superposition at x ∈ Π with unit normal ν.
inline CVec boundary_operator(BoundaryCondition bc, const Field& f, const Vec& x, const Vec& nu) {
    require_compatible(bc, f.family);
    const CVec n = nu.cast<cplx>();
    switch (bc) {
        case BoundaryCondition::Dirichlet: return f.value(x);
        case BoundaryCondition::Neumann: return f.jacobian(x) * n;
        case BoundaryCondition::PEC: return cross_c(f.value(x).head(3), nu);
        case BoundaryCondition::PMC: return cross_c(f.value(x).tail(3), nu);
        case BoundaryCondition::ElasticThird: {
            const CVec u = f.value(x);
            const CVec tr = stress(f, x) * n;
            CVec out(1 + f.dim);
            out(0) = (n.transpose() * u)(0);
            out.tail(f.dim) = tangential(tr, nu);
            return out;
        }
        case BoundaryCondition::ElasticFourth: {
            const CVec u = f.value(x);
            const CVec tr = stress(f, x) * n;
            CVec out(f.dim + 1);
            out.head(f.dim) = tangential(u, nu);
            out(f.dim) = (n.transpose() * tr)(0);
            return out;
        }
    }
    return {};
}

//! σ(uⁱ) and Tr(uⁱ) = σν of an incident elastic wave, in closed form.
inline std::pair<CMat, CVec> stress_and_traction(const ElasticWave& w, const Vec& x, const Vec& nu) {
    const int n = static_cast<int>(w.d.size());
    const cplx ep = std::exp(I * w.omega_p() * w.d.dot(x)), es = std::exp(I * w.omega_s() * w.d.dot(x));
    const Mat dd = w.d * w.d.transpose(), dq = w.d * w.q.transpose();
    CMat sigma = (w.cp * I * w.omega_p() * ep) * (2.0 * w.mu * dd + w.lambda * Mat::Identity(n, n)).cast<cplx>() +
                 (w.cs * I * w.omega_s() * es * w.mu) * (dq + dq.transpose()).cast<cplx>();
    CVec tr = sigma * nu.cast<cplx>();
    return {sigma, tr};
}

/*!
 * Boundary operator of a single incident wave, assembled term by term from
 * the closed-form displays (no Jacobian).
 */
inline CVec eval_boundary_operator(BoundaryCondition bc, const IncidentWave& wave, const Vec& x, const Vec& nu) {
    require_compatible(bc, family_of(wave));
    if (const auto* a = std::get_if<AcousticWave>(&wave)) {
        const cplx e = std::exp(I * a->omega * a->d.dot(x));
        CVec out(1);
        out(0) = bc == BoundaryCondition::Dirichlet ? e : I * a->omega * a->d.dot(nu) * e;
        return out;
    }
    if (const auto* m = std::get_if<EMWave>(&wave)) {
        const cplx e = std::exp(I * m->omega * m->d.dot(x));
        const Vec base = bc == BoundaryCondition::PEC ? cross(m->q(), m->d) : cross(m->p, m->d);
        return (-I * m->omega * e) * cross(base, nu).cast<cplx>();
    }
    const auto& w = std::get<ElasticWave>(wave);
    const int n = static_cast<int>(w.d.size());
    const cplx ep = w.cp * std::exp(I * w.omega_p() * w.d.dot(x));
    const cplx es = w.cs * std::exp(I * w.omega_s() * w.d.dot(x));
    const double dn = w.d.dot(nu), qn = w.q.dot(nu);
    const Vec dt = tangential(w.d, nu), qt = tangential(w.q, nu);
    CVec out(n + 1);
    if (bc == BoundaryCondition::ElasticThird) {
        out(0) = ep * dn + es * qn;
        out.tail(n) = (ep * I * w.omega_p() * 2.0 * w.mu * dn) * dt.cast<cplx>() +
                      (es * I * w.omega_s() * w.mu) * (qn * dt + dn * qt).cast<cplx>();
    } else {
        out.head(n) = ep * dt.cast<cplx>() + es * qt.cast<cplx>();
        out(n) = ep * I * w.omega_p() * (2.0 * w.mu * dn * dn + w.lambda) + es * I * w.omega_s() * 2.0 * w.mu * qn * dn;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Modulus profiles on a hyperplane

struct ConstantProfile {
    double value = 0.0;
};
struct SampledMinProfile {
    double value = 0.0;
    Vec argmin;
    std::size_t samples = 0;
};
using ModulusProfile = std::variant<ConstantProfile, SampledMinProfile>;

inline double profile_value(const ModulusProfile& p) {
    return std::visit([](const auto& v) { return v.value; }, p);
}

//! Sampling density of SampledMin profiles (points per unit length).
inline constexpr int profile_samples_per_unit = 256;

/*!
 * |Bu| on Π ∖ B_R.  Constant when every term has the same tangential wave
 * vector on Π (relative phases are then fixed along Π); otherwise the minimum
 * over 256 points per unit length along each frame direction of Π, for points
 * with R ≤ ‖z‖ ≤ R + 10.
 */
inline ModulusProfile boundary_modulus_profile(BoundaryCondition bc, const Field& f, const Hyperplane& plane,
                                               double R = 1.0) {
    require_compatible(bc, f.family);
    const Vec& nu = plane.normal();
    const Vec foot = plane.foot();
    bool constant = true;
    for (std::size_t k = 1; k < f.terms.size() && constant; ++k) {
        const Vec a = tangential(Vec(f.terms[0].kappa * f.terms[0].dir), nu);
        const Vec b = tangential(Vec(f.terms[k].kappa * f.terms[k].dir), nu);
        constant = (a - b).norm() <= 1e-14 * std::max(1.0, a.norm());
    }
    if (constant) return ConstantProfile{boundary_operator(bc, f, foot, nu).norm()};

    const Mat frame = plane.frame();
    const double c2 = foot.squaredNorm();
    const double t_in = std::sqrt(std::max(0.0, R * R - c2));
    const double t_out = std::sqrt(std::max(0.0, (R + 10.0) * (R + 10.0) - c2));
    const double step = 1.0 / profile_samples_per_unit;
    SampledMinProfile best{std::numeric_limits<double>::infinity(), foot, 0};
    for (Eigen::Index k = 0; k < frame.cols(); ++k) {
        for (int sign : {1, -1}) {
            for (double t = t_in; t <= t_out; t += step) {
                const Vec z = foot + sign * t * frame.col(k);
                const double m = boundary_operator(bc, f, z, nu).norm();
                ++best.samples;
                if (m < best.value) {
                    best.value = m;
                    best.argmin = z;
                }
            }
        }
    }
    return best;
}

inline ModulusProfile boundary_modulus_profile(BoundaryCondition bc, const IncidentWave& w, const Hyperplane& plane,
                                               double R = 1.0) {
    return boundary_modulus_profile(bc, to_field(w), plane, R);
}

// ---------------------------------------------------------------------------
// Reflection operators

/*!
 * T̃(u ∘ T_Π) in closed form.  A term a·e^{iκ d·x} becomes
 * S(a)·e^{2iκc(d·ν)}·e^{iκ (T₀d)·x}, with S the boundary condition's action on
 * amplitudes: −1 / +1 (Dirichlet / Neumann), (−T₀E, T₀H) / (T₀E, −T₀H)
 * (PEC / PMC), +T₀ / −T₀ (third / fourth elastic).
 */
inline Field reflect_field(BoundaryCondition bc, const Field& f, const Hyperplane& plane) {
    require_compatible(bc, f.family);
    const Vec& nu = plane.normal();
    const Mat q = Mat::Identity(f.dim, f.dim) - 2.0 * nu * nu.transpose();
    const CMat qc = q.cast<cplx>();
    Field out = f;
    for (auto& t : out.terms) {
        const cplx phase = std::exp(I * t.kappa * 2.0 * plane.offset() * t.dir.dot(nu));
        CVec a = t.amp;
        switch (bc) {
            case BoundaryCondition::Dirichlet: a = -a; break;
            case BoundaryCondition::Neumann: break;
            case BoundaryCondition::PEC:
                a.head(3) = -(qc * t.amp.head(3));
                a.tail(3) = qc * t.amp.tail(3);
                break;
            case BoundaryCondition::PMC:
                a.head(3) = qc * t.amp.head(3);
                a.tail(3) = -(qc * t.amp.tail(3));
                break;
            case BoundaryCondition::ElasticThird: a = qc * t.amp; break;
            case BoundaryCondition::ElasticFourth: a = -(qc * t.amp); break;
        }
        t.amp = a * phase;
        t.dir = q * t.dir;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-difference checks

//! Δu by central differences of the closed-form gradient.
inline CVec fd_laplacian(const Field& f, const Vec& x, double h) {
    CVec lap = CVec::Zero(f.components());
    for (int j = 0; j < f.dim; ++j) {
        Vec e = Vec::Zero(f.dim);
        e(j) = h;
        lap += (f.jacobian(x + e).col(j) - f.jacobian(x - e).col(j)) / (2.0 * h);
    }
    return lap;
}

//! ∇div u by central differences of the closed-form gradient.
inline CVec fd_grad_div(const Field& f, const Vec& x, double h) {
    CVec g(f.dim);
    for (int a = 0; a < f.dim; ++a) {
        Vec e = Vec::Zero(f.dim);
        e(a) = h;
        g(a) = (f.jacobian(x + e).trace() - f.jacobian(x - e).trace()) / (2.0 * h);
    }
    return g;
}

//! curl of a 3-vector block (rows `offset`..offset+2 of the field) by central differences of values.
inline CVec fd_curl(const Field& f, const Vec& x, double h, int offset) {
    CMat j(3, 3);
    for (int k = 0; k < 3; ++k) {
        Vec e = Vec::Zero(3);
        e(k) = h;
        j.col(k) = (f.value(x + e).segment(offset, 3) - f.value(x - e).segment(offset, 3)) / (2.0 * h);
    }
    CVec c(3);
    c << j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1);
    return c;
}

//! Residual of the family's operator at x with step h.
inline CVec pde_residual_at(const Field& f, const Vec& x, double h) {
    const Medium& m = f.medium;
    switch (f.family) {
        case WaveFamily::Acoustic: return fd_laplacian(f, x, h) + m.omega * m.omega * f.value(x);
        case WaveFamily::Electromagnetic: {
            const CVec u = f.value(x);
            CVec r(6);
            r.head(3) = fd_curl(f, x, h, 0) - I * m.omega * u.tail(3);
            r.tail(3) = fd_curl(f, x, h, 3) + I * m.omega * u.head(3);
            return r;
        }
        case WaveFamily::Elastic:
            return m.mu * fd_laplacian(f, x, h) + (m.lambda + m.mu) * fd_grad_div(f, x, h) +
                   m.rho * m.omega * m.omega * f.value(x);
    }
    return {};
}

//! max over points of ‖A u‖ by central differences.
inline double pde_residual(const Field& f, const std::vector<Vec>& points, double h = 1e-5) {
    if (!(h > 0.0)) throw PreconditionError("finite-difference step must be positive");
    double r = 0.0;
    for (const auto& x : points) r = std::max(r, pde_residual_at(f, x, h).norm());
    return r;
}

//! (c_p·u_p, c_s·u_s) of an elastic incident wave.
inline std::pair<Field, Field> helmholtz_decompose(const ElasticWave& w) {
    Field all = to_field(IncidentWave{w});
    Field lon = all, tra = all;
    lon.terms.clear();
    tra.terms.clear();
    for (const auto& t : all.terms) (t.kind == TermKind::Longitudinal ? lon : tra).terms.push_back(t);
    return {lon, tra};
}

//! Defect of u_p = −∇div u / ω_p² and u_s = (∇div u − Δu) / ω_s² at x.
inline std::pair<double, double> helmholtz_defect(const ElasticWave& w, const Vec& x, double h = 1e-5) {
    const Field u = to_field(IncidentWave{w});
    const auto [lon, tra] = helmholtz_decompose(w);
    const CVec gd = fd_grad_div(u, x, h), lap = fd_laplacian(u, x, h);
    const double wp2 = w.omega_p() * w.omega_p(), ws2 = w.omega_s() * w.omega_s();
    return {(lon.value(x) + gd / wp2).norm(), (tra.value(x) - (gd - lap) / ws2).norm()};
}

struct ReflectionReport {
    double max_boundary = 0.0;  // max |Bu| on Π
    double max_residual = 0.0;  // max PDE residual of the glued field near Π
    double max_jump = 0.0;      // max |u − T̃(u∘T)| and of its Jacobian on Π
};

/*!
 * Image-method check of the reflection principle: u = uⁱ + T̃(uⁱ∘T_Π).  On Π,
 * Bu must vanish and u must agree with its own reflection T̃(u∘T_Π) together
 * with first derivatives; the glued field must solve the PDE on both sides.
 */
inline ReflectionReport verify_reflection_principle(BoundaryCondition bc, const IncidentWave& wave,
                                                    const Hyperplane& plane, int samples = 16, double h = 1e-5,
                                                    std::uint64_t seed = 0) {
    const Field ui = to_field(wave);
    require_compatible(bc, ui.family);
    const Field u = ui + reflect_field(bc, ui, plane);
    const Field mirrored = reflect_field(bc, u, plane);
    const Mat frame = plane.frame();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    ReflectionReport rep;
    std::vector<Vec> near;
    for (int k = 0; k < samples; ++k) {
        Vec t(frame.cols());
        for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = uni(rng);
        const Vec z = plane.foot() + frame * t;
        rep.max_boundary = std::max(rep.max_boundary, boundary_operator(bc, u, z, plane.normal()).norm());
        rep.max_jump = std::max(rep.max_jump, (u.value(z) - mirrored.value(z)).norm());
        rep.max_jump = std::max(rep.max_jump, (u.jacobian(z) - mirrored.jacobian(z)).norm());
        const double off = 0.5 * uni(rng);
        near.push_back(z + off * plane.normal());
        near.push_back(z - off * plane.normal());
    }
    rep.max_residual = pde_residual(u, near, h);
    return rep;
}

}  // namespace polyref
