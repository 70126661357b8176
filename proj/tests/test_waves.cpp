// SPDX-License-Identifier: Apache-2.0
#include "polyref/waves.hpp"
#include "test_helpers.hpp"

#include <gtest/gtest.h>

using namespace polyref;
using namespace polyref::testing;
using BC = BoundaryCondition;

namespace {

IncidentWave random_wave(std::mt19937_64& rng, BC bc, int n = 3) {
    switch (family_of(bc)) {
        case WaveFamily::Acoustic: return random_acoustic(rng, n);
        case WaveFamily::Electromagnetic: return random_em(rng);
        case WaveFamily::Elastic: return random_elastic(rng, n, ElasticKind::Mixed);
    }
    return {};
}

}  // namespace

TEST(Waves, Validation) {
    EXPECT_THROW(validate(IncidentWave{AcousticWave{1.0, vec2(1, 1)}}, "w1"), InvariantError);
    try {
        validate(IncidentWave{AcousticWave{1.0, vec2(1, 1)}}, "w1");
    } catch (const InvariantError& e) {
        EXPECT_EQ(e.element(), "w1");
    }
    EXPECT_THROW(validate(IncidentWave{EMWave{1.0, vec3(1, 0, 0), vec3(1, 1, 0)}}), InvariantError);
    ElasticWave bad;
    bad.d = vec2(1, 0);
    bad.q = vec2(0, 1);
    bad.cp = 1.0;
    bad.cs = 1.0;
    EXPECT_THROW(validate(IncidentWave{bad}), InvariantError);
}

TEST(EvalField, Examples) {
    const AcousticWave a{2.0, vec3(0, 0, 1)};
    EXPECT_NEAR(std::abs(eval_field(a, vec3(3, -1, 0))(0) - cplx(1.0)), 0.0, 1e-15);

    std::mt19937_64 rng(1);
    const EMWave m{1.7, vec3(0, 0, 1), vec3(1, 0, 0)};
    const CVec eh = eval_field(m, Vec::Zero(3));
    EXPECT_LE((eh.head(3) - (-I * m.omega) * cross(m.q(), m.d).cast<cplx>()).norm(), 1e-15);
    EXPECT_LE((eh.tail(3) - (-I * m.omega) * cross(m.p, m.d).cast<cplx>()).norm(), 1e-15);
    // Oracle: (p × d) × d = −p for orthonormal p, d.
    EXPECT_LE((cross(cross(m.p, m.d), m.d) + m.p).norm(), 1e-15);
    EXPECT_LE((cross(m.q(), m.d) + m.p).norm(), 1e-15);

    const auto w = random_elastic(rng, 3, ElasticKind::Mixed);
    EXPECT_LE((eval_field(w, Vec::Zero(3)) - (w.cp * w.d.cast<cplx>() + w.cs * w.q.cast<cplx>())).norm(), 1e-15);
    EXPECT_NEAR(eval_field(w, random_vec(rng, 3, 5)).norm(), 1.0, 1e-12);
}

TEST(EvalField, EMStructuralIdentities) {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 100; ++k) {
        const auto m = random_em(rng);
        const CVec eh = eval_field(m, random_vec(rng, 3, 5));
        const CVec e = eh.head(3), h = eh.tail(3);
        const CVec dc = m.d.cast<cplx>();
        EXPECT_LE(std::abs((dc.transpose() * e)(0)), 1e-12);
        EXPECT_LE(std::abs((dc.transpose() * h)(0)), 1e-12);
        CVec dxe(3);
        dxe << dc(1) * e(2) - dc(2) * e(1), dc(2) * e(0) - dc(0) * e(2), dc(0) * e(1) - dc(1) * e(0);
        EXPECT_LE((h - dxe).norm(), 1e-12);
    }
}

TEST(BoundaryOperator, Examples) {
    const AcousticWave a{2.0, vec3(1, 0, 0)};
    EXPECT_NEAR(eval_boundary_operator(BC::Neumann, a, vec3(0.3, 1, 2), vec3(0, 0, 1)).norm(), 0.0, 1e-15);
    EXPECT_NEAR(eval_boundary_operator(BC::Neumann, a, vec3(0.3, 1, 2), vec3(1, 0, 0)).norm(), 2.0, 1e-14);

    ElasticWave w;
    w.lambda = 0.7;
    w.mu = 1.3;
    w.rho = 1.1;
    w.omega = 2.0;
    w.d = vec3(1, 0, 0);
    w.q = vec3(0, 1, 0);
    const CVec b4 = eval_boundary_operator(BC::ElasticFourth, w, vec3(0.2, 0.1, -1), w.d);
    EXPECT_NEAR(std::abs(b4(3)), w.omega_p() * (2 * w.mu + w.lambda), 1e-12);
    EXPECT_THROW(eval_boundary_operator(BC::PEC, a, Vec::Zero(3), vec3(1, 0, 0)), PreconditionError);
}

TEST(BoundaryOperator, ClosedFormMatchesJacobianRoute) {
    std::mt19937_64 rng(3);
    for (BC bc : all_boundary_conditions) {
        for (int n : {2, 3}) {
            if (family_of(bc) == WaveFamily::Electromagnetic && n == 2) continue;
            for (int k = 0; k < 30; ++k) {
                const auto w = random_wave(rng, bc, n);
                const Vec x = random_vec(rng, n, 3), nu = random_unit(rng, n);
                const CVec a = eval_boundary_operator(bc, w, x, nu);
                const CVec b = boundary_operator(bc, to_field(w), x, nu);
                EXPECT_LE((a - b).norm(), 1e-12 * std::max(1.0, a.norm())) << to_string(bc);
            }
        }
    }
}

TEST(BoundaryOperator, TangentialPartsAreTangential) {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 100; ++k) {
        const auto w = random_elastic(rng, 3, ElasticKind::Mixed);
        const Vec nu = random_unit(rng, 3), x = random_vec(rng, 3, 3);
        const CVec b3 = eval_boundary_operator(BC::ElasticThird, w, x, nu);
        const CVec b4 = eval_boundary_operator(BC::ElasticFourth, w, x, nu);
        EXPECT_LE(std::abs((nu.cast<cplx>().transpose() * b3.tail(3))(0)), 1e-14 * std::max(1.0, b3.norm()));
        EXPECT_LE(std::abs((nu.cast<cplx>().transpose() * b4.head(3))(0)), 1e-14);
    }
}

TEST(StressTraction, Examples) {
    ElasticWave w;
    w.lambda = 0.4;
    w.mu = 1.2;
    w.rho = 2.0;
    w.omega = 1.5;
    w.d = vec3(1, 0, 0);
    w.q = vec3(0, 0, 1);
    const auto [sigma, tr] = stress_and_traction(w, Vec::Zero(3), w.d);
    EXPECT_LE((tr - (I * w.omega_p() * (2 * w.mu + w.lambda)) * w.d.cast<cplx>()).norm(), 1e-14);

    ElasticWave t = w;
    t.cp = 0.0;
    t.cs = 1.0;
    t.q = vec3(0, 1, 0);
    const Vec nu = vec3(0, 0, 1);
    const auto [s2, tr2] = stress_and_traction(t, vec3(0.3, 0.2, 0.1), nu);
    EXPECT_NEAR(std::abs((nu.cast<cplx>().transpose() * tr2)(0)), 0.0, 1e-15);
}

TEST(StressTraction, MatchesFiniteDifferenceAssembly) {
    std::mt19937_64 rng(5);
    const double h = 1e-5;
    for (int k = 0; k < 50; ++k) {
        const auto w = random_elastic(rng, 3, ElasticKind::Mixed);
        const Vec x = random_vec(rng, 3, 2), nu = random_unit(rng, 3);
        const Field f = to_field(w);
        CMat j(3, 3);
        for (int c = 0; c < 3; ++c) {
            Vec e = Vec::Zero(3);
            e(c) = h;
            j.col(c) = (f.value(x + e) - f.value(x - e)) / (2 * h);
        }
        const CMat eu = 0.5 * (j + j.transpose());
        const CMat fd = 2 * w.mu * eu + (w.lambda * eu.trace()) * CMat::Identity(3, 3);
        const auto [sigma, tr] = stress_and_traction(w, x, nu);
        EXPECT_LE((sigma - fd).norm(), 1e-6 * sigma.norm());
        EXPECT_LE((tr - fd * nu.cast<cplx>()).norm(), 1e-6 * sigma.norm());
    }
}

TEST(ModulusProfile, Examples) {
    std::mt19937_64 rng(6);
    const auto a = random_acoustic(rng, 3);
    const auto p = boundary_modulus_profile(BC::Dirichlet, IncidentWave{a}, random_plane(rng, 3));
    ASSERT_TRUE(std::holds_alternative<ConstantProfile>(p));
    EXPECT_NEAR(profile_value(p), 1.0, 1e-15);

    const auto m = random_em(rng);
    const Hyperplane par = Hyperplane::from_raw(cross(m.q(), m.d), 0.4);
    const auto pe = boundary_modulus_profile(BC::PEC, IncidentWave{m}, par);
    ASSERT_TRUE(std::holds_alternative<ConstantProfile>(pe));
    EXPECT_LE(profile_value(pe), 1e-14);
}

TEST(ModulusProfile, MixedElasticSampledAgainstDenseSampling) {
    std::mt19937_64 rng(7);
    ElasticWave w = random_elastic(rng, 3, ElasticKind::Mixed);
    w.cp = w.cs = 1.0 / std::sqrt(2.0);
    const Hyperplane plane = random_plane(rng, 3, 1.0);
    const double R = 2.0;
    for (BC bc : {BC::ElasticThird, BC::ElasticFourth}) {
        const auto prof = boundary_modulus_profile(bc, IncidentWave{w}, plane, R);
        ASSERT_TRUE(std::holds_alternative<SampledMinProfile>(prof));
        const auto& s = std::get<SampledMinProfile>(prof);
        // Oracle: 10× denser sampling of the same lines.
        const Field f = to_field(w);
        const Mat frame = plane.frame();
        const double c2 = plane.foot().squaredNorm();
        const double t0 = std::sqrt(std::max(0.0, R * R - c2)), t1 = std::sqrt((R + 10) * (R + 10) - c2);
        double dense = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 2; ++k)
            for (int sg : {1, -1})
                for (double t = t0; t <= t1; t += 1.0 / 2560)
                    dense = std::min(dense, boundary_operator(bc, f, plane.foot() + sg * t * frame.col(k), plane.normal()).norm());
        EXPECT_LE(dense, s.value + 1e-12);
        EXPECT_NEAR(dense, s.value, 1e-3 * std::max(1.0, s.value));
        EXPECT_LE(std::abs(plane.signed_distance(s.argmin)), 1e-10);
        EXPECT_GE(s.argmin.norm(), R - 1e-9);
    }
}

TEST(ReflectField, DirichletFormulaAndInvolution) {
    std::mt19937_64 rng(8);
    const auto a = random_acoustic(rng, 3);
    const Hyperplane pi0 = Hyperplane::from_raw(random_unit(rng, 3), 0.0);
    const Field r = reflect_field(BC::Dirichlet, to_field(a), pi0);
    const Vec nu = pi0.normal();
    EXPECT_LE((r.terms[0].dir - (a.d - 2 * a.d.dot(nu) * nu)).norm(), 1e-15);
    EXPECT_LE((r.terms[0].amp + CVec::Ones(1)).norm(), 1e-15);

    for (BC bc : all_boundary_conditions) {
        const auto w = random_wave(rng, bc, 3);
        const Hyperplane plane = random_plane(rng, 3);
        const Field f = to_field(w);
        const Field back = reflect_field(bc, reflect_field(bc, f, plane), plane);
        ASSERT_EQ(back.terms.size(), f.terms.size());
        for (std::size_t k = 0; k < f.terms.size(); ++k) {
            EXPECT_LE((back.terms[k].amp - f.terms[k].amp).norm(), 1e-12);
            EXPECT_LE((back.terms[k].dir - f.terms[k].dir).norm(), 1e-12);
        }
    }
}

TEST(ReflectField, PECReflectionSolvesMaxwell) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 20; ++k) {
        const Field f = reflect_field(BC::PEC, to_field(random_em(rng)), random_plane(rng, 3));
        std::vector<Vec> pts;
        for (int j = 0; j < 10; ++j) pts.push_back(random_vec(rng, 3, 3));
        EXPECT_LT(pde_residual(f, pts, 1e-5), 1e-8);
    }
}

TEST(ReflectField, ModulusConsistencyOnPlane) {
    std::mt19937_64 rng(10);
    for (BC bc : all_boundary_conditions) {
        for (int k = 0; k < 10; ++k) {
            const auto w = random_wave(rng, bc, 3);
            const Hyperplane plane = random_plane(rng, 3);
            const Field f = to_field(w), r = reflect_field(bc, f, plane);
            for (int j = 0; j < 5; ++j) {
                const Vec z = plane.foot() + plane.frame() * random_vec(rng, 2, 3);
                EXPECT_NEAR(boundary_operator(bc, f, z, plane.normal()).norm(),
                            boundary_operator(bc, r, z, plane.normal()).norm(), 1e-12);
            }
        }
    }
}

TEST(ReflectField, MixedConditionTransport) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        const Hyperplane plane = random_plane(rng, 3);
        const Isometry t = Isometry::reflection(plane);
        // Neumann: Π₁ with normal ⊥ d.
        const auto a = random_acoustic(rng, 3);
        const Hyperplane p1 = Hyperplane::from_raw(random_orthogonal_unit(rng, a.d), 0.3);
        ASSERT_LE(profile_value(boundary_modulus_profile(BC::Neumann, IncidentWave{a}, p1)), 1e-12);
        const Field ra = reflect_field(BC::Neumann, to_field(a), plane);
        EXPECT_LE(profile_value(boundary_modulus_profile(BC::Neumann, ra, t.apply(p1))), 1e-12);
        // PEC: Π₁ with normal ∥ q × d.
        const auto m = random_em(rng);
        const Hyperplane p2 = Hyperplane::from_raw(cross(m.q(), m.d), -0.2);
        ASSERT_LE(profile_value(boundary_modulus_profile(BC::PEC, IncidentWave{m}, p2)), 1e-12);
        const Field rm = reflect_field(BC::PEC, to_field(m), plane);
        EXPECT_LE(profile_value(boundary_modulus_profile(BC::PEC, rm, t.apply(p2))), 1e-12);
        // Third elastic condition, pure longitudinal: Π₁ with normal ⊥ d.
        const auto w = random_elastic(rng, 3, ElasticKind::Longitudinal);
        const Hyperplane p3 = Hyperplane::from_raw(random_orthogonal_unit(rng, w.d), 0.1);
        ASSERT_LE(profile_value(boundary_modulus_profile(BC::ElasticThird, IncidentWave{w}, p3)), 1e-12);
        const Field rw = reflect_field(BC::ElasticFourth, to_field(w), plane);
        EXPECT_LE(profile_value(boundary_modulus_profile(BC::ElasticThird, rw, t.apply(p3))), 1e-12);
    }
}

TEST(PdeResidual, SecondOrderDecay) {
    std::mt19937_64 rng(12);
    const std::vector<Field> fields{to_field(random_acoustic(rng, 3)), to_field(random_em(rng)),
                                    to_field(random_elastic(rng, 3, ElasticKind::Mixed))};
    const std::vector<Vec> pts{random_vec(rng, 3, 2)};
    for (const auto& f : fields) {
        const double r2 = pde_residual(f, pts, 1e-2), r3 = pde_residual(f, pts, 1e-3), r4 = pde_residual(f, pts, 1e-4);
        EXPECT_NEAR(std::log10(r2 / r3), 2.0, 0.2);
        EXPECT_NEAR(std::log10(r3 / r4), 2.0, 0.2);
    }
}

TEST(PdeResidual, ZeroFieldAndWrongFrequency) {
    std::mt19937_64 rng(13);
    const auto a = random_acoustic(rng, 3);
    Field zero = to_field(a);
    zero.terms.clear();
    EXPECT_EQ(pde_residual(zero, {vec3(0, 1, 2)}, 1e-3), 0.0);
    Field wrong = to_field(a);
    wrong.medium.omega *= 1.1;
    // Analytic residual: (ω′² − ω²)·u with |u| = 1.
    EXPECT_NEAR(pde_residual(wrong, {vec3(0.1, 0.2, 0.3)}, 1e-4), 0.21 * a.omega * a.omega, 1e-6);
}

TEST(Helmholtz, Decomposition) {
    std::mt19937_64 rng(14);
    const auto lw = random_elastic(rng, 3, ElasticKind::Longitudinal);
    auto [l1, t1] = helmholtz_decompose(lw);
    EXPECT_EQ(t1.terms.size(), 0u);
    EXPECT_LE((l1.value(vec3(1, 2, 3)) - eval_field(lw, vec3(1, 2, 3))).norm(), 1e-15);
    const auto tw = random_elastic(rng, 3, ElasticKind::Transversal);
    auto [l2, t2] = helmholtz_decompose(tw);
    EXPECT_EQ(l2.terms.size(), 0u);

    for (int k = 0; k < 20; ++k) {
        auto w = random_elastic(rng, 3, ElasticKind::Mixed);
        w.cp = w.cs = 1.0 / std::sqrt(2.0);
        const Vec x = random_vec(rng, 3, 2);
        const auto [dp, ds] = helmholtz_defect(w, x, 1e-5);
        EXPECT_LT(dp, 1e-6);
        EXPECT_LT(ds, 1e-6);
        auto [lon, tra] = helmholtz_decompose(w);
        EXPECT_LT((fd_laplacian(lon, x, 1e-5) + w.omega_p() * w.omega_p() * lon.value(x)).norm(), 1e-6);
        EXPECT_LT((fd_laplacian(tra, x, 1e-5) + w.omega_s() * w.omega_s() * tra.value(x)).norm(), 1e-6);
    }
}

TEST(ReflectionPrinciple, ScalarExamples) {
    const double omega = 1.3;
    const Vec nu = vec3(0, 0, 1);
    const Hyperplane pi0(nu, 0.0);
    const IncidentWave a = AcousticWave{omega, nu};
    const Field fd = to_field(a) + reflect_field(BC::Dirichlet, to_field(a), pi0);
    const Field fn = to_field(a) + reflect_field(BC::Neumann, to_field(a), pi0);
    for (double z : {-0.7, 0.0, 0.4}) {
        EXPECT_LE(std::abs(fd.value(vec3(0.3, -0.1, z))(0) - 2.0 * I * std::sin(omega * z)), 1e-14);
        EXPECT_LE(std::abs(fn.value(vec3(0.3, -0.1, z))(0) - 2.0 * std::cos(omega * z)), 1e-14);
    }
    EXPECT_LE(verify_reflection_principle(BC::Dirichlet, a, pi0).max_boundary, 1e-14);
    EXPECT_LE(verify_reflection_principle(BC::Neumann, a, pi0).max_boundary, 1e-14);
}

TEST(ReflectionPrinciple, AllConditionsRandom) {
    std::mt19937_64 rng(15);
    for (BC bc : all_boundary_conditions) {
        for (int k = 0; k < 10; ++k) {
            const auto w = random_wave(rng, bc, 3);
            const auto rep = verify_reflection_principle(bc, w, random_plane(rng, 3), 8, 1e-5, k);
            EXPECT_LT(rep.max_boundary, 1e-8) << to_string(bc);
            EXPECT_LT(rep.max_residual, 1e-6) << to_string(bc);
            EXPECT_LT(rep.max_jump, 1e-8) << to_string(bc);
        }
    }
}
