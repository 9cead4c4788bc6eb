#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wg/mesh.hpp"
#include "wg/problem.hpp"
#include "wg/rt0.hpp"
#include "wg/wg_function.hpp"

namespace wg {

/// The five error measures reported per mesh level, for e = {e0, e_b}:
///   inf_T   max over triangles of |e0|
///   inf_dT  max over edges of |e_b|
///   grad_d  sqrt(sum over T of g' M_T g), g the RT0 coefficients of grad_d e
///   l2_T    sqrt(sum over T of |T| e0^2)
///   l2_dT   sqrt(sum over edges of h_e |e| e_b^2), with h_e = |e|
struct ErrorNorms {
    double inf_T = 0.0;
    double inf_dT = 0.0;
    double grad_d = 0.0;
    double l2_T = 0.0;
    double l2_dT = 0.0;
};

/// ||v||_{L2,T}: interior part only.
inline double wg_l2_norm(const Mesh& mesh, const WgFunction& v) {
    double s = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        s += element_geometry(mesh, t).area * v.interior[t] * v.interior[t];
    }
    return std::sqrt(s);
}

/// ||grad_d v||: RT0 mass-matrix energy of the local weak gradients.
inline double wg_grad_norm(const Mesh& mesh, const WgFunction& v) {
    double s = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& te = mesh.tri_edges[t];
        const Vec3 g = weak_gradient_local(mesh, t, v.interior[t],
                                           {v.edge[te[0]], v.edge[te[1]], v.edge[te[2]]});
        s += quadratic_form(rt0_mass_matrix_identity(mesh, t), g);
    }
    return std::sqrt(s);
}

inline ErrorNorms wg_norms(const Mesh& mesh, const WgFunction& v) {
    ErrorNorms n;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        n.inf_T = std::max(n.inf_T, std::abs(v.interior[t]));
    }
    double l2_dt = 0.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        n.inf_dT = std::max(n.inf_dT, std::abs(v.edge[e]));
        const double len = edge_length(mesh, e);
        l2_dt += len * len * v.edge[e] * v.edge[e];
    }
    n.l2_dT = std::sqrt(l2_dt);
    n.l2_T = wg_l2_norm(mesh, v);
    n.grad_d = wg_grad_norm(mesh, v);
    return n;
}

/// RT0-projected flux Q~_h(a grad_d U) on one element, in basis coefficients
/// (coefficient j is the integrated outward flux through local edge j).
inline Vec3 projected_flux_local(const Mesh& mesh, const ProblemDefinition& problem, int t,
                                 const WgFunction& U, double time) {
    const auto& te = mesh.tri_edges[t];
    const Vec3 g = weak_gradient_local(mesh, t, U.interior[t],
                                       {U.edge[te[0]], U.edge[te[1]], U.edge[te[2]]});
    const Rt0Basis basis = rt0_basis(mesh, t);
    return project_rt0_local(
        [&](double x, double y, double time_) {
            return apply(problem.a(x, y, time_), rt0_eval(basis, g, {x, y}));
        },
        mesh, t, time);
}

/// Discrete-gradient (flux) error on one element: the RT0 coefficients of
/// the difference between the flux interpolant of the exact a grad(u) and the
/// RT0-projected numerical flux Q~_h(a grad_d U). Measuring the flux against
/// its interpolant (rather than comparing weak gradients through the
/// elementwise L2 projection) is what makes the second-order closeness of
/// the discrete gradient visible; the interpolant and the L2 projection of
/// the same smooth field already differ at first order. For a = I this is
/// the difference between grad_d U and the interpolated exact gradient.
inline Vec3 grad_error_local(const Mesh& mesh, const ProblemDefinition& problem, int t,
                             const WgFunction& U, double time) {
    const Vec3 interp = rt_flux_interpolant_local(
        [&](double x, double y, double time_) {
            return apply(problem.a(x, y, time_), problem.exact_grad(x, y, time_));
        },
        mesh, t, time);
    const Vec3 flux = projected_flux_local(mesh, problem, t, U, time);
    return {interp[0] - flux[0], interp[1] - flux[1], interp[2] - flux[2]};
}

/// Error e_h = Q_h u(t) - U against the problem's exact solution. The four
/// value columns come from the DOF differences; the grad_d column measures
/// the weak gradient against the interpolated exact gradient.
inline ErrorNorms error_norms(const WgFunction& U, const ProblemDefinition& problem,
                              const Mesh& mesh, double t) {
    if (!problem.has_exact() || !problem.exact_grad) {
        throw std::invalid_argument("error_norms: problem '" + problem.name +
                                    "' has no exact solution with gradient");
    }
    const WgFunction qh = project_qh(problem.exact, mesh, t);
    ErrorNorms n = wg_norms(mesh, qh - U);
    double grad = 0.0;
    for (int tri = 0; tri < mesh.num_triangles(); ++tri) {
        const Vec3 d = grad_error_local(mesh, problem, tri, U, t);
        grad += quadratic_form(rt0_mass_matrix_identity(mesh, tri), d);
    }
    n.grad_d = std::sqrt(grad);
    return n;
}

/// Least-squares slope of log(error) against log(h).
inline double fit_rate(const std::vector<std::pair<double, double>>& levels) {
    if (levels.size() < 2) throw std::invalid_argument("fit_rate: need at least 2 levels");
    double sx = 0.0, sy = 0.0;
    for (const auto& [h, err] : levels) {
        if (!(h > 0.0) || !(err > 0.0)) {
            throw std::invalid_argument("fit_rate: levels require positive h and error");
        }
        sx += std::log(h);
        sy += std::log(err);
    }
    const double mx = sx / levels.size();
    const double my = sy / levels.size();
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [h, err] : levels) {
        const double dx = std::log(h) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(err) - my);
    }
    return sxy / sxx;
}

/// Per-element residual of the discrete balance
///   |K| (U - U_prev)/k - flux out of K - cell source,
/// which the backward Euler scheme enforces up to the linear solver residual.
inline std::vector<double> energy_balance(const Mesh& mesh, const ProblemDefinition& problem,
                                          const WgFunction& U_prev, const WgFunction& U_curr,
                                          double t_n, double k) {
    std::vector<double> residual(mesh.num_triangles(), 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Vec3 flux = projected_flux_local(mesh, problem, t, U_curr, t_n);
        const double area = element_geometry(mesh, t).area;
        const double net_outflux = flux[0] + flux[1] + flux[2];
        const double source = integrate_cell(problem.f, mesh, t, t_n);
        residual[t] = area * (U_curr.interior[t] - U_prev.interior[t]) / k - net_outflux - source;
    }
    return residual;
}

struct FluxContinuity {
    double max_jump = 0.0;
    double max_flux = 0.0;
};

/// Mismatch of the numerical flux -Q~_h(a grad_d U).n across interior edges,
/// integrated per edge. The RT0 normal trace is constant along an edge, so
/// the per-edge basis coefficients carry the whole integral.
inline FluxContinuity flux_continuity(const Mesh& mesh, const ProblemDefinition& problem,
                                      const WgFunction& U, double time) {
    std::vector<Vec3> flux(mesh.num_triangles());
    FluxContinuity out;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        flux[t] = projected_flux_local(mesh, problem, t, U, time);
        for (int i = 0; i < 3; ++i) out.max_flux = std::max(out.max_flux, std::abs(flux[t][i]));
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.is_boundary_edge(e)) continue;
        double outflux_sum = 0.0;
        for (int side = 0; side < 2; ++side) {
            const int t = mesh.edge_tris[e][side];
            for (int i = 0; i < 3; ++i) {
                if (mesh.tri_edges[t][i] == e) outflux_sum += flux[t][i];
            }
        }
        out.max_jump = std::max(out.max_jump, std::abs(outflux_sum));
    }
    return out;
}

namespace detail {

/// Box-Muller on top of mt19937; avoids std::normal_distribution so draws
/// are identical across standard libraries.
class NormalSampler {
  public:
    explicit NormalSampler(unsigned seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    double uniform() {
        return (static_cast<double>(rng_()) + 0.5) / (static_cast<double>(rng_.max()) + 1.0);
    }
    std::mt19937 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace detail

/// Draws a WG function with standard-normal DOFs, zero on Dirichlet edges.
inline WgFunction random_wg_function(const Mesh& mesh, detail::NormalSampler& normal) {
    WgFunction v = WgFunction::zeros(mesh);
    for (double& u : v.interior) u = normal();
    for (int e = 0; e < mesh.num_edges(); ++e) {
        v.edge[e] = mesh.boundary_tag[e] == EdgeKind::Dirichlet ? 0.0 : normal();
    }
    return v;
}

/// Max over elements and basis indices of the RT0 coefficient difference
/// between grad_d(Q_h w) and Q~_h(grad w); the two sides agree whenever the
/// quadrature integrates the fields involved exactly.
template <typename W, typename GradW>
double commutativity_residual(const Mesh& mesh, W&& w, GradW&& grad_w, double time = 0.0) {
    const WgFunction qh = project_qh(w, mesh, time);
    double worst = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& te = mesh.tri_edges[t];
        const Vec3 lhs = weak_gradient_local(mesh, t, qh.interior[t],
                                             {qh.edge[te[0]], qh.edge[te[1]], qh.edge[te[2]]});
        const Vec3 rhs = project_rt0_local(grad_w, mesh, t, time);
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    }
    return worst;
}

/// Max over random trials of ||phi|| / ||grad_d phi|| for phi in S_h^0 with
/// standard-normal DOFs. Degenerate draws (zero gradient) are redrawn.
inline double poincare_ratio(const Mesh& mesh, int trials, unsigned seed) {
    if (trials < 1) throw std::invalid_argument("poincare_ratio: trials must be >= 1");
    detail::NormalSampler normal(seed);
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        double ratio = 0.0;
        for (;;) {
            const WgFunction phi = random_wg_function(mesh, normal);
            const double denom = wg_grad_norm(mesh, phi);
            if (denom > 0.0) {
                ratio = wg_l2_norm(mesh, phi) / denom;
                break;
            }
        }
        worst = std::max(worst, ratio);
    }
    return worst;
}

}  // namespace wg
