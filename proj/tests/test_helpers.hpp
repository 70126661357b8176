// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polyref/geom.hpp"

#include <random>

namespace polyref::testing {

inline ConvexPolytope box2(double x0, double y0, double x1, double y1, std::string id = "box") {
    return ConvexPolytope::from_vertices({vec2(x0, y0), vec2(x1, y0), vec2(x1, y1), vec2(x0, y1)}, std::move(id));
}

inline ConvexPolytope box3(const Vec& lo, const Vec& hi, std::string id = "box") {
    std::vector<Vec> v;
    for (int i = 0; i < 8; ++i)
        v.push_back(vec3(i & 1 ? hi(0) : lo(0), i & 2 ? hi(1) : lo(1), i & 4 ? hi(2) : lo(2)));
    return ConvexPolytope::from_vertices(v, std::move(id));
}

inline PolyhedralScatterer obstacles(int dim, std::vector<ConvexPolytope> parts) {
    return {dim, std::move(parts), {}};
}

inline Vec random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Vec v(n);
    do {
        for (int i = 0; i < n; ++i) v(i) = g(rng);
    } while (v.norm() < 1e-3);
    return v.normalized();
}

inline Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    return v;
}

}  // namespace polyref::testing

#include "polyref/waves.hpp"

namespace polyref::testing {

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

inline Vec random_orthogonal_unit(std::mt19937_64& rng, const Vec& d) {
    Vec q;
    do {
        q = random_unit(rng, static_cast<int>(d.size()));
        q -= q.dot(d) * d;
    } while (q.norm() < 1e-2);
    return q.normalized();
}

inline AcousticWave random_acoustic(std::mt19937_64& rng, int n) {
    return {uniform(rng, 0.5, 3.0), random_unit(rng, n)};
}

inline EMWave random_em(std::mt19937_64& rng) {
    EMWave w{uniform(rng, 0.5, 3.0), random_unit(rng, 3), Vec()};
    w.p = random_orthogonal_unit(rng, w.d) * uniform(rng, 0.5, 2.0);
    return w;
}

enum class ElasticKind { Longitudinal, Transversal, Mixed };

inline ElasticWave random_elastic(std::mt19937_64& rng, int n, ElasticKind kind) {
    ElasticWave w;
    w.mu = uniform(rng, 0.5, 2.0);
    w.lambda = uniform(rng, -0.5 * w.mu, 2.0);
    w.rho = uniform(rng, 0.5, 2.0);
    w.omega = uniform(rng, 0.5, 3.0);
    w.d = random_unit(rng, n);
    w.q = random_orthogonal_unit(rng, w.d);
    if (kind == ElasticKind::Longitudinal) {
        w.cp = 1.0;
        w.cs = 0.0;
    } else if (kind == ElasticKind::Transversal) {
        w.cp = 0.0;
        w.cs = 1.0;
    } else {
        const cplx a(uniform(rng, -1, 1), uniform(rng, -1, 1)), b(uniform(rng, -1, 1), uniform(rng, -1, 1));
        const double s = std::sqrt(std::norm(a) + std::norm(b));
        w.cp = a / s;
        w.cs = b / s;
    }
    return w;
}

inline Hyperplane random_plane(std::mt19937_64& rng, int n, double offset_scale = 2.0) {
    return Hyperplane::from_raw(random_unit(rng, n), uniform(rng, -offset_scale, offset_scale));
}

}  // namespace polyref::testing
