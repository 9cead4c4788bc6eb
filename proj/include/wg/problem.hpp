#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "wg/geometry.hpp"
#include "wg/mesh.hpp"

namespace wg {

using ScalarField = std::function<double(double x, double y, double t)>;
using VectorField = std::function<Vec2(double x, double y, double t)>;
using TensorField = std::function<Mat2(double x, double y, double t)>;

/// Initial-boundary value problem u_t - div(a grad u) = f on the unit square,
/// with Dirichlet data g and, under RobinOnRight, Robin data
/// r = a grad(u).n + u on the segment x = 1.
///
/// The manufactured-solution fields (exact, exact_dt, exact_grad) are
/// optional and only consumed by error measurements.
struct ProblemDefinition {
    std::string name;
    BoundaryRule boundary = BoundaryRule::AllDirichlet;

    TensorField a;
    bool a_time_independent = true;
    ScalarField f;
    ScalarField g;
    ScalarField robin;  // unused when boundary == AllDirichlet
    std::function<double(double x, double y)> psi;
    double t_final = 1.0;

    ScalarField exact;
    ScalarField exact_dt;
    VectorField exact_grad;

    bool has_exact() const { return static_cast<bool>(exact); }
};

/// Spot-checks the manufactured data for internal consistency: psi must be
/// the initial trace of the exact solution and g its boundary trace.
inline void validate_problem(const ProblemDefinition& p) {
    if (!p.a || !p.f || !p.g || !p.psi) {
        throw std::invalid_argument("problem '" + p.name + "': missing coefficient or data field");
    }
    if (!(p.t_final > 0.0)) {
        throw std::invalid_argument("problem '" + p.name + "': t_final must be positive");
    }
    if (!p.has_exact()) return;

    const double samples[] = {0.0, 0.31, 0.5, 0.77, 1.0};
    for (double x : samples) {
        for (double y : samples) {
            if (std::abs(p.psi(x, y) - p.exact(x, y, 0.0)) > 1e-12) {
                throw std::invalid_argument("problem '" + p.name +
                                            "': psi does not match the exact solution at t=0");
            }
        }
    }
    for (double s : samples) {
        for (double t : {0.0, 0.4, 1.0}) {
            const Vec2 boundary_points[] = {{s, 0.0}, {s, 1.0}, {0.0, s}, {1.0, s}};
            for (const Vec2 q : boundary_points) {
                if (p.boundary == BoundaryRule::RobinOnRight && q.x == 1.0) continue;
                if (std::abs(p.g(q.x, q.y, t) - p.exact(q.x, q.y, t)) > 1e-12) {
                    throw std::invalid_argument(
                        "problem '" + p.name + "': g does not match the exact boundary trace");
                }
            }
        }
    }
}

}  // namespace wg
