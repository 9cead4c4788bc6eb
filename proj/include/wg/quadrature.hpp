#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "wg/mesh.hpp"

namespace wg {

/// Barycentric quadrature node on the reference triangle. Weights sum to 1;
/// the physical integral is |T| * sum(w * f).
struct TriQuadPoint {
    double l0, l1, l2, w;
};

/// 7-point rule, exact for polynomials of total degree <= 5.
inline const std::array<TriQuadPoint, 7>& triangle_rule() {
    static const std::array<TriQuadPoint, 7> rule = [] {
        const double s15 = std::sqrt(15.0);
        const double a1 = (6.0 - s15) / 21.0;
        const double w1 = (155.0 - s15) / 1200.0;
        const double a2 = (6.0 + s15) / 21.0;
        const double w2 = (155.0 + s15) / 1200.0;
        std::array<TriQuadPoint, 7> r{};
        r[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0};
        r[1] = {1.0 - 2.0 * a1, a1, a1, w1};
        r[2] = {a1, 1.0 - 2.0 * a1, a1, w1};
        r[3] = {a1, a1, 1.0 - 2.0 * a1, w1};
        r[4] = {1.0 - 2.0 * a2, a2, a2, w2};
        r[5] = {a2, 1.0 - 2.0 * a2, a2, w2};
        r[6] = {a2, a2, 1.0 - 2.0 * a2, w2};
        return r;
    }();
    return rule;
}

/// Gauss node on [0,1]. Weights sum to 1; the physical line integral is
/// |e| * sum(w * f).
struct EdgeQuadPoint {
    double s, w;
};

/// 3-point Gauss rule, exact for polynomials of degree <= 5.
inline const std::array<EdgeQuadPoint, 3>& edge_rule() {
    static const std::array<EdgeQuadPoint, 3> rule = [] {
        const double d = 0.5 * std::sqrt(3.0 / 5.0);
        return std::array<EdgeQuadPoint, 3>{{
            {0.5 - d, 5.0 / 18.0},
            {0.5, 8.0 / 18.0},
            {0.5 + d, 5.0 / 18.0},
        }};
    }();
    return rule;
}

/// Integrates f(x, y, time) over triangle t.
template <typename F>
double integrate_cell(F&& f, const Mesh& mesh, int t, double time = 0.0) {
    if (t < 0 || t >= mesh.num_triangles()) {
        throw std::out_of_range("integrate_cell: triangle index out of range");
    }
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.vertices[tri[0]];
    const Vec2 p1 = mesh.vertices[tri[1]];
    const Vec2 p2 = mesh.vertices[tri[2]];
    const double area = 0.5 * cross(p1 - p0, p2 - p0);

    double sum = 0.0;
    for (const auto& q : triangle_rule()) {
        const Vec2 p = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
        const double v = f(p.x, p.y, time);
        if (!std::isfinite(v)) {
            throw std::domain_error("integrate_cell: non-finite field sample");
        }
        sum += q.w * v;
    }
    return area * sum;
}

/// Integrates f(x, y, time) over edge e (arc-length measure).
template <typename F>
double integrate_edge(F&& f, const Mesh& mesh, int e, double time = 0.0) {
    if (e < 0 || e >= mesh.num_edges()) {
        throw std::out_of_range("integrate_edge: edge index out of range");
    }
    const Vec2 pa = mesh.vertices[mesh.edges[e][0]];
    const Vec2 pb = mesh.vertices[mesh.edges[e][1]];
    const double len = norm(pb - pa);

    double sum = 0.0;
    for (const auto& q : edge_rule()) {
        const Vec2 p = pa + q.s * (pb - pa);
        const double v = f(p.x, p.y, time);
        if (!std::isfinite(v)) {
            throw std::domain_error("integrate_edge: non-finite field sample");
        }
        sum += q.w * v;
    }
    return len * sum;
}

}  // namespace wg
