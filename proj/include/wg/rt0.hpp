#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wg/geometry.hpp"
#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"
#include "wg/wg_function.hpp"

namespace wg {

/// Lowest-order Raviart-Thomas basis on one triangle,
///
///   phi_i(x) = (x - p_i) / (2|T|),
///
/// with p_i the vertex opposite local edge i. With counterclockwise vertex
/// ordering this is normalized to unit outward flux: the integral of
/// phi_i . n_j over local edge j equals delta_ij, and div phi_i = 1/|T|.
/// A field sum(c_i phi_i) therefore carries the integrated outward normal
/// flux c_j through local edge j.
struct Rt0Basis {
    std::array<Vec2, 3> opposite{};
    double area = 0.0;

    Vec2 value(int i, Vec2 p) const { return (0.5 / area) * (p - opposite[i]); }
    double divergence() const { return 1.0 / area; }
};

inline Rt0Basis rt0_basis(const Mesh& mesh, int t) {
    if (t < 0 || t >= mesh.num_triangles()) {
        throw std::out_of_range("rt0_basis: triangle index out of range");
    }
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.vertices[tri[0]];
    const Vec2 p1 = mesh.vertices[tri[1]];
    const Vec2 p2 = mesh.vertices[tri[2]];
    return Rt0Basis{{p0, p1, p2}, 0.5 * cross(p1 - p0, p2 - p0)};
}

/// Evaluates sum(c_i phi_i) at a point.
inline Vec2 rt0_eval(const Rt0Basis& basis, const Vec3& c, Vec2 p) {
    Vec2 v{};
    for (int i = 0; i < 3; ++i) v = v + c[i] * basis.value(i, p);
    return v;
}

/// Per-triangle RT0 coefficient vectors; houses discrete weak gradients and
/// RT0-projected flux fields.
struct Rt0Field {
    std::vector<Vec3> coeff;

    static Rt0Field zeros(const Mesh& mesh) {
        Rt0Field f;
        f.coeff.assign(mesh.num_triangles(), Vec3{});
        return f;
    }
};

/// M_ij = integral over T of (coeff phi_j) . phi_i, by the module quadrature.
/// The coefficient sample must be SPD at every quadrature point.
template <typename A>
Mat3 rt0_mass_matrix(const Mesh& mesh, int t, A&& coeff, double time = 0.0) {
    const Rt0Basis basis = rt0_basis(mesh, t);
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.vertices[tri[0]];
    const Vec2 p1 = mesh.vertices[tri[1]];
    const Vec2 p2 = mesh.vertices[tri[2]];

    Mat3 m{};
    for (const auto& q : triangle_rule()) {
        const Vec2 p = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
        const Mat2 a = coeff(p.x, p.y, time);
        if (!is_spd(a)) {
            throw std::domain_error("rt0_mass_matrix: coefficient sample is not SPD");
        }
        std::array<Vec2, 3> phi;
        std::array<Vec2, 3> aphi;
        for (int i = 0; i < 3; ++i) {
            phi[i] = basis.value(i, p);
            aphi[i] = apply(a, phi[i]);
        }
        const double w = q.w * basis.area;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                m[i][j] += w * dot(aphi[j], phi[i]);
            }
        }
    }
    return m;
}

/// Identity-coefficient RT0 mass matrix (the Gram matrix of the basis).
inline Mat3 rt0_mass_matrix_identity(const Mesh& mesh, int t) {
    return rt0_mass_matrix(mesh, t, [](double, double, double) { return identity_mat2(); });
}

/// Discrete weak gradient on one element: the RT0 coefficients g solving
///
///   integral(grad_d v . q) = -integral(v0 div q) + integral(v_b q.n)
///
/// for all RT0 test fields q. With the unit-flux basis the right side
/// collapses to b_i = vb_i - v0.
inline Vec3 weak_gradient_local(const Mesh& mesh, int t, double v0, const Vec3& vb) {
    const Mat3 m = rt0_mass_matrix_identity(mesh, t);
    return solve3(m, {vb[0] - v0, vb[1] - v0, vb[2] - v0});
}

/// Linearization of weak_gradient_local over the local DOFs [v0, vb1, vb2, vb3].
/// The v0 column is the negated sum of the edge columns; constant DOF vectors
/// are annihilated to a rounding of the column sums.
inline Mat3x4 local_gradient_map(const Mesh& mesh, int t) {
    const Lu3 lu(rt0_mass_matrix_identity(mesh, t));
    Mat3x4 g{};
    for (int j = 0; j < 3; ++j) {
        Vec3 e{};
        e[j] = 1.0;
        const Vec3 col = lu.solve(e);
        for (int i = 0; i < 3; ++i) {
            g[i][1 + j] = col[i];
            g[i][0] -= col[i];
        }
    }
    return g;
}

/// Applies the local gradient map to the DOFs of u restricted to triangle t.
inline Vec3 apply_gradient_map(const Mat3x4& g, const Mesh& mesh, int t, const WgFunction& u) {
    const auto& te = mesh.tri_edges[t];
    const std::array<double, 4> local{u.interior[t], u.edge[te[0]], u.edge[te[1]], u.edge[te[2]]};
    Vec3 r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) r[i] += g[i][j] * local[j];
    }
    return r;
}

/// L2 projection of a vector field onto RT0 on one triangle.
template <typename F>
Vec3 project_rt0_local(F&& field, const Mesh& mesh, int t, double time = 0.0) {
    const Rt0Basis basis = rt0_basis(mesh, t);
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.vertices[tri[0]];
    const Vec2 p1 = mesh.vertices[tri[1]];
    const Vec2 p2 = mesh.vertices[tri[2]];

    Vec3 rhs{};
    for (const auto& q : triangle_rule()) {
        const Vec2 p = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
        const Vec2 v = field(p.x, p.y, time);
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            throw std::domain_error("project_rt0: non-finite field sample");
        }
        const double w = q.w * basis.area;
        for (int i = 0; i < 3; ++i) rhs[i] += w * dot(v, basis.value(i, p));
    }
    return solve3(rt0_mass_matrix_identity(mesh, t), rhs);
}

/// Flux interpolant onto RT0 on one triangle: coefficient i is the outward
/// normal flux of the field through local edge i, by edge quadrature. This is
/// the divergence-preserving interpolant (the mean divergence is determined
/// by the boundary fluxes), as opposed to the elementwise L2 projection.
template <typename F>
Vec3 rt_flux_interpolant_local(F&& field, const Mesh& mesh, int t, double time = 0.0) {
    const auto& tri = mesh.triangles[t];
    const TriGeometry geo = element_geometry(mesh, t);
    Vec3 c{};
    for (int i = 0; i < 3; ++i) {
        const Vec2 pa = mesh.vertices[tri[(i + 1) % 3]];
        const Vec2 pb = mesh.vertices[tri[(i + 2) % 3]];
        double s = 0.0;
        for (const auto& q : edge_rule()) {
            const Vec2 p = pa + q.s * (pb - pa);
            const Vec2 v = field(p.x, p.y, time);
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
                throw std::domain_error("rt_flux_interpolant: non-finite field sample");
            }
            s += q.w * dot(v, geo.normal[i]);
        }
        c[i] = s * geo.edge_length[i];
    }
    return c;
}

/// Elementwise L2 projection of a vector field onto the broken RT0 space.
template <typename F>
Rt0Field project_rt0(F&& field, const Mesh& mesh, double time = 0.0) {
    Rt0Field out = Rt0Field::zeros(mesh);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        out.coeff[t] = project_rt0_local(field, mesh, t, time);
    }
    return out;
}

/// Weak gradient of a WG function on every element.
inline Rt0Field weak_gradient(const Mesh& mesh, const WgFunction& u) {
    Rt0Field out = Rt0Field::zeros(mesh);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& te = mesh.tri_edges[t];
        out.coeff[t] = weak_gradient_local(
            mesh, t, u.interior[t], {u.edge[te[0]], u.edge[te[1]], u.edge[te[2]]});
    }
    return out;
}

}  // namespace wg
