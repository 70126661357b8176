// SPDX-License-Identifier: Apache-2.0
#include "polyref/refgroup.hpp"
#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace polyref;
using namespace polyref::testing;

namespace {

Hyperplane line_at(double normal_angle, double offset = 0.0) {
    return Hyperplane::from_raw(vec2(std::cos(normal_angle), std::sin(normal_angle)), offset);
}

// Independent oracle: lines through the origin as normal angles mod π,
// closed under β ↦ 2α − β.
std::vector<double> angle_closure(std::vector<double> angles) {
    auto norm = [](double a) {
        a = std::fmod(a, pi);
        if (a < 0) a += pi;
        return a > pi - 1e-9 ? 0.0 : a;
    };
    for (auto& a : angles) a = norm(a);
    for (bool grew = true; grew && angles.size() < 1000;) {
        grew = false;
        const auto snap = angles;
        for (double a : snap)
            for (double b : snap) {
                const double c = norm(2 * a - b);
                if (std::none_of(angles.begin(), angles.end(), [&](double x) { return std::abs(x - c) < 1e-9; })) {
                    angles.push_back(c);
                    grew = true;
                }
            }
    }
    return angles;
}

// Independent oracle: group of 2×2 matrices generated by the line reflections.
std::size_t matrix_group_order(const std::vector<double>& angles) {
    std::vector<Eigen::Matrix2d> els{Eigen::Matrix2d::Identity()};
    std::vector<Eigen::Matrix2d> gens;
    for (double a : angles) {
        Eigen::Matrix2d r;
        r << std::cos(2 * a), std::sin(2 * a), std::sin(2 * a), -std::cos(2 * a);
        gens.push_back(-r);  // reflection across the line with normal angle a
    }
    for (std::size_t h = 0; h < els.size() && els.size() < 5000; ++h)
        for (const auto& g : gens) {
            const Eigen::Matrix2d m = g * els[h];
            if (std::none_of(els.begin(), els.end(), [&](const auto& e) { return (e - m).cwiseAbs().maxCoeff() < 1e-9; }))
                els.push_back(m);
        }
    return els.size();
}

}  // namespace

TEST(ReflectionSet, DedupAndOrder) {
    const ReflectionSet rs({line_at(0.3), line_at(0.3 + pi, 0.0), line_at(1.0)});
    EXPECT_EQ(rs.size(), 2u);
    EXPECT_THROW(ReflectionSet(std::vector<Hyperplane>{}), PreconditionError);
}

TEST(NormalSpan, Examples) {
    EXPECT_EQ(normal_span_dim(ReflectionSet({Hyperplane(vec2(0, 1), 0), Hyperplane(vec2(0, 1), 1)})), 1);
    EXPECT_EQ(normal_span_dim(ReflectionSet({line_at(0), line_at(1)})), 2);
    std::vector<Hyperplane> planes;
    for (double a : {0.0, 0.7, 2.0}) planes.push_back(Hyperplane::from_raw(vec3(std::cos(a), std::sin(a), 0), 0));
    EXPECT_EQ(normal_span_dim(ReflectionSet(planes)), 2);
}

TEST(CommonSubspace, Examples) {
    auto two = common_subspace(ReflectionSet({line_at(0.2), line_at(1.3)}));
    ASSERT_TRUE(two);
    EXPECT_EQ(two->dim(), 0);
    EXPECT_LE(two->point.norm(), 1e-12);

    std::vector<Hyperplane> planes;
    for (double a : {0.0, 0.7, 2.0}) planes.push_back(Hyperplane::from_raw(vec3(std::cos(a), std::sin(a), 0), 0));
    auto axis = common_subspace(ReflectionSet(planes));
    ASSERT_TRUE(axis);
    EXPECT_EQ(axis->dim(), 1);
    EXPECT_NEAR(std::abs(axis->directions(2, 0)), 1.0, 1e-12);

    // Triangle sides: stacked system [A | b] has rank 3 > rank A = 2.
    const ReflectionSet tri({Hyperplane(vec2(0, 1), 0), Hyperplane(vec2(1, 0), 0), Hyperplane::from_raw(vec2(1, 1), 1)});
    Mat ab(3, 3);
    ab << tri.normal_matrix(), Vec(Eigen::Vector3d(tri[0].offset(), tri[1].offset(), tri[2].offset()));
    ASSERT_GT(matrix_rank(ab), matrix_rank(tri.normal_matrix()));
    EXPECT_FALSE(common_subspace(tri));
}

TEST(Closure, QuarterPiPencil) {
    const auto oracle = angle_closure({0.0, pi / 4});
    const auto res = closure(ReflectionSet({line_at(0), line_at(pi / 4)}));
    ASSERT_EQ(res.group.status, ClosureStatus::Finite);
    EXPECT_EQ(res.planes.size(), oracle.size());
    EXPECT_EQ(res.planes.size(), 4u);
    EXPECT_EQ(res.group.order(), matrix_group_order(oracle));
    EXPECT_EQ(res.group.order(), 8u);
    EXPECT_EQ(sector_count(res.planes), 8);
}

TEST(Closure, ParallelPairExceedsCap) {
    const auto res = closure(ReflectionSet({Hyperplane(vec2(0, 1), 0), Hyperplane(vec2(0, 1), 1)}));
    EXPECT_EQ(res.group.status, ClosureStatus::ExceededCap);
}

TEST(Closure, SingleHyperplane) {
    const auto res = closure(ReflectionSet({Hyperplane(vec3(0, 0, 1), 2)}));
    EXPECT_EQ(res.planes.size(), 1u);
    EXPECT_EQ(res.group.order(), 2u);
    EXPECT_EQ(sector_count(res.planes), 2);
    EXPECT_THROW(closure(ReflectionSet({line_at(0), line_at(1)}), {1, 512}), PreconditionError);
}

TEST(Closure, PencilsAndProperties) {
    std::mt19937_64 rng(17);
    for (int m = 2; m <= 8; ++m) {
        const Vec centre = random_vec(rng, 2, 2);
        const double phase = random_vec(rng, 1, 1)(0);
        auto mk = [&](double a) { return Hyperplane::through(centre, vec2(std::cos(a), std::sin(a))); };
        const auto res = closure(ReflectionSet({mk(phase), mk(phase + pi / m)}));
        ASSERT_EQ(res.group.status, ClosureStatus::Finite);
        EXPECT_EQ(res.planes.size(), static_cast<std::size_t>(m));
        EXPECT_EQ(res.group.order(), static_cast<std::size_t>(2 * m));
        EXPECT_EQ(sector_count(res.planes), 2 * m);
        for (const auto& g : res.group.elements) {
            std::vector<Hyperplane> img;
            for (const auto& p : res.planes.planes()) img.push_back(g.apply(p));
            EXPECT_TRUE(ReflectionSet(img).same_set(res.planes));
        }
        const auto before = common_subspace(ReflectionSet({mk(phase), mk(phase + pi / m)}));
        const auto after = common_subspace(res.planes);
        ASSERT_TRUE(before && after);
        EXPECT_LE((before->point - after->point).norm(), 1e-9);
    }
}

TEST(Closure, OrderIndependent) {
    std::vector<Hyperplane> gens{line_at(0.1), line_at(0.1 + pi / 3), line_at(0.1 + 2 * pi / 3)};
    const auto ref = closure(ReflectionSet(gens));
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
        std::shuffle(gens.begin(), gens.end(), rng);
        const auto res = closure(ReflectionSet(gens));
        EXPECT_TRUE(res.planes.same_set(ref.planes));
        EXPECT_EQ(res.group.order(), ref.group.order());
    }
}

TEST(SectorCount, Examples) {
    EXPECT_EQ(sector_count(ReflectionSet({line_at(0), line_at(pi / 2)})), 4);
    EXPECT_THROW(sector_count(ReflectionSet({Hyperplane(vec2(0, 1), 0), Hyperplane(vec2(0, 1), 1)})), PreconditionError);
}

TEST(Symmetrize, Examples) {
    const ReflectionSet xaxis({Hyperplane(vec2(0, 1), 0)});
    const auto g = closure(xaxis).group;
    const auto sym = obstacles(2, {box2(-1, -1, 1, 1)});
    EXPECT_EQ(symmetrize(sym, g).obstacles.size(), 1u);

    const auto above = obstacles(2, {box2(0, 1, 1, 2)});
    const auto two = symmetrize(above, g);
    ASSERT_EQ(two.obstacles.size(), 2u);
    EXPECT_TRUE(two.obstacles[1].same_shape(box2(0, -2, 1, -1)));

    const auto oct = closure(ReflectionSet({line_at(0), line_at(pi / 4)}));
    const auto off = obstacles(2, {box2(2, 0.5, 2.5, 1.0)});
    const auto eight = symmetrize(off, oct.group);
    EXPECT_EQ(eight.obstacles.size(), 8u);
    EXPECT_TRUE(is_symmetric(eight, oct.planes));
    EXPECT_FALSE(is_symmetric(off, oct.planes));
    EXPECT_EQ(symmetrize(eight, oct.group).obstacles.size(), 8u);

    const auto cap = closure(ReflectionSet({Hyperplane(vec2(0, 1), 0), Hyperplane(vec2(0, 1), 1)}));
    EXPECT_THROW(symmetrize(off, cap.group), PreconditionError);
}

namespace {

// Oracle: every vertex of the polyline avoids Σ and stays off the lines; every
// segment avoids Σ (dense sampling); it ends outside B_{R0+2}.
void check_path(const PolyhedralScatterer& s, const ReflectionSet& rs, const std::vector<Vec>& path, double res) {
    ASSERT_GE(path.size(), 2u);
    for (std::size_t i = 1; i < path.size(); ++i) {
        for (const auto& p : rs.planes()) EXPECT_GT(std::abs(p.signed_distance(path[i])), 0.5 * res);
        for (int k = 0; k <= 50; ++k) EXPECT_GT(s.distance(path[i - 1] + (path[i] - path[i - 1]) * (k / 50.0)), 0.0);
    }
    EXPECT_GE(path.back().norm(), bounding_radius(s) + 2.0);
}

}  // namespace

TEST(EscapePath, Examples) {
    const ReflectionSet vertical({Hyperplane(vec2(1, 0), 0)});
    const PolyhedralScatterer empty{2, {}, {}};
    const auto r1 = escape_path_2d(empty, vertical, vec2(0.5, 0.2), 0.05);
    ASSERT_TRUE(std::holds_alternative<std::vector<Vec>>(r1));
    check_path(empty, vertical, std::get<0>(r1), 0.05);
    for (const auto& v : std::get<0>(r1)) EXPECT_GT(v(0), 0.0);

    const auto pair = obstacles(2, {box2(0.5, -0.5, 1.5, 0.5, "r"), box2(-1.5, -0.5, -0.5, 0.5, "l")});
    const auto r2 = escape_path_2d(pair, vertical, vec2(0.2, 0.0), 0.02);
    ASSERT_TRUE(std::holds_alternative<std::vector<Vec>>(r2));
    check_path(pair, vertical, std::get<0>(r2), 0.02);
    for (const auto& v : std::get<0>(r2)) EXPECT_GT(v(0), 0.0);

    // Pocket: closed symmetric box of screens around the start point.
    PolyhedralScatterer pocket{2, {}, {}};
    const double c[4][4] = {{-1, -1, 1, -1}, {1, -1, 1, 1}, {1, 1, -1, 1}, {-1, 1, -1, -1}};
    for (int k = 0; k < 4; ++k)
        pocket.screens.push_back(Cell::from_points({vec2(c[k][0], c[k][1]), vec2(c[k][2], c[k][3])},
                                                   BoundaryCondition::Dirichlet, "w" + std::to_string(k)));
    const auto r3 = escape_path_2d(pocket, vertical, vec2(0.3, 0.0), 0.02);
    ASSERT_TRUE(std::holds_alternative<EscapeFailure>(r3));
    EXPECT_GT(std::get<EscapeFailure>(r3).reached_cells, 0u);

    EXPECT_THROW(escape_path_2d(obstacles(2, {box2(0.5, 0, 1, 1)}), vertical, vec2(0.2, 2.0), 0.05), PreconditionError);
}
