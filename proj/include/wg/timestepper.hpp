#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg/assembly.hpp"
#include "wg/linsolve.hpp"
#include "wg/problem.hpp"
#include "wg/wg_function.hpp"

namespace wg {

/// U^0 = Q_h psi.
inline WgFunction initial_state(const ProblemDefinition& problem, const Mesh& mesh) {
    return project_qh([&](double x, double y, double) { return problem.psi(x, y); }, mesh, 0.0);
}

namespace detail {

inline void check_mesh_matches_rule(const Mesh& mesh, BoundaryRule rule, const char* where) {
    int robin = 0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.boundary_tag[e] == EdgeKind::Robin) ++robin;
    }
    const bool want_robin = rule == BoundaryRule::RobinOnRight;
    if (want_robin != (robin > 0)) {
        throw std::invalid_argument(std::string(where) +
                                    ": mesh boundary tags do not match the problem's rule");
    }
}

}  // namespace detail

/// One backward Euler system (M + k A) U = M U_prev + k F, set up once per
/// (problem, mesh, k) and reused across steps. For time-independent
/// coefficients the operator and its constraint split are cached; the free
/// part of the previous solution warm-starts the next CG solve.
class BackwardEulerSystem {
  public:
    BackwardEulerSystem(const ProblemDefinition& problem, const Mesh& mesh, double k,
                        double tol = 1e-10)
        : problem_(&problem), mesh_(&mesh), k_(k), tol_(tol) {
        if (!(k > 0.0)) throw std::invalid_argument("backward_euler: step size must be positive");
        detail::check_mesh_matches_rule(mesh, problem.boundary, "backward_euler");
        dofs_ = make_dof_map(mesh);
        mass_ = mass_diagonal(mesh);
        if (problem.a_time_independent) rebuild_operator(0.0);
    }

    /// Advances U_prev at time t_n - k to the solution at t_n.
    WgFunction step(const WgFunction& U_prev, double t_n) {
        if (!problem_->a_time_independent) rebuild_operator(t_n);

        std::vector<double> rhs = assemble_load(*mesh_, problem_->f, t_n);
        for (double& v : rhs) v *= k_;
        for (int t = 0; t < dofs_.n_tri; ++t) {
            rhs[dofs_.tri_dof(t)] += mass_[dofs_.tri_dof(t)] * U_prev.interior[t];
        }
        if (robin_enabled() && problem_->robin) {
            const std::vector<double> rl = assemble_robin_load(*mesh_, problem_->robin, t_n);
            for (int d = 0; d < dofs_.size(); ++d) rhs[d] += k_ * rl[d];
        }

        const std::vector<double> values = dirichlet_values(*mesh_, problem_->g, t_n);
        const std::vector<double> reduced = detail::reduce_rhs(split_, rhs, values);

        if (warm_.empty()) {
            warm_.resize(split_.free_dofs.size());
            for (std::size_t i = 0; i < warm_.size(); ++i) {
                const int d = split_.free_dofs[i];
                warm_[i] = d < dofs_.n_tri ? U_prev.interior[d] : U_prev.edge[d - dofs_.n_tri];
            }
        }
        SolveResult result = solve_spd(split_.a_ff, reduced, tol_, -1, &warm_);
        if (!result.report.converged) {
            throw SolverFailure("backward_euler: linear solver did not converge", result.report);
        }
        last_report_ = result.report;
        warm_ = result.x;
        return compose_solution(*mesh_, dofs_, split_.free_dofs, result.x, values);
    }

    const SolveReport& last_report() const { return last_report_; }

  private:
    bool robin_enabled() const { return problem_->boundary == BoundaryRule::RobinOnRight; }

    void rebuild_operator(double time) {
        const SparseMatrix stiffness =
            assemble_stiffness(*mesh_, problem_->a, time, robin_enabled());
        const SparseMatrix system = scale_add_diagonal(stiffness, k_, mass_);
        split_ = split_constraints(system, dofs_);
    }

    const ProblemDefinition* problem_;
    const Mesh* mesh_;
    double k_;
    double tol_;
    DofMap dofs_;
    std::vector<double> mass_;
    ConstraintSplit split_;
    std::vector<double> warm_;
    SolveReport last_report_;
};

/// Single backward Euler step; convenience wrapper over BackwardEulerSystem.
inline WgFunction backward_euler_step(const ProblemDefinition& problem, const Mesh& mesh,
                                      const WgFunction& U_prev, double t_n, double k,
                                      double tol = 1e-10) {
    BackwardEulerSystem system(problem, mesh, k, tol);
    return system.step(U_prev, t_n);
}

/// Called after each step with (n, t_n, U^{n-1}, U^n).
using StepObserver =
    std::function<void(int n, double t_n, const WgFunction& prev, const WgFunction& curr)>;

namespace detail {
inline int step_count(double t_final, double k) {
    const double ratio = t_final / k;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 16.0 * 1e-16 * ratio) {
        throw std::invalid_argument("solve_parabolic: t_final must be an integer multiple of k");
    }
    return static_cast<int>(rounded);
}
}  // namespace detail

/// Runs the backward Euler loop to t_final, keeping only two states in
/// memory. The observer sees every consecutive state pair.
inline WgFunction solve_parabolic(const ProblemDefinition& problem, const Mesh& mesh, double k,
                                  const StepObserver& observer = {}, double tol = 1e-10) {
    const int steps = detail::step_count(problem.t_final, k);
    BackwardEulerSystem system(problem, mesh, k, tol);
    WgFunction prev = initial_state(problem, mesh);
    for (int n = 1; n <= steps; ++n) {
        const double t_n = (n == steps) ? problem.t_final : n * k;
        WgFunction curr = system.step(prev, t_n);
        if (observer) observer(n, t_n, prev, curr);
        prev = std::move(curr);
    }
    return prev;
}

/// Full trajectory (U^0 .. U^N at t_n = n k); intended for small runs.
inline std::vector<WgFunction> solve_parabolic_trajectory(const ProblemDefinition& problem,
                                                          const Mesh& mesh, double k,
                                                          double tol = 1e-10) {
    const int steps = detail::step_count(problem.t_final, k);
    std::vector<WgFunction> states;
    states.reserve(steps + 1);
    states.push_back(initial_state(problem, mesh));
    BackwardEulerSystem system(problem, mesh, k, tol);
    for (int n = 1; n <= steps; ++n) {
        const double t_n = (n == steps) ? problem.t_final : n * k;
        states.push_back(system.step(states.back(), t_n));
    }
    return states;
}

/// Weak Galerkin solution of the stationary problem -div(a grad u) = f with
/// the problem's boundary data; coefficients are sampled at t = 0.
inline WgFunction solve_elliptic(const ProblemDefinition& problem, const Mesh& mesh,
                                 double tol = 1e-10) {
    detail::check_mesh_matches_rule(mesh, problem.boundary, "solve_elliptic");
    const bool robin = problem.boundary == BoundaryRule::RobinOnRight;
    const DofMap dofs = make_dof_map(mesh);

    SparseSpdSystem system;
    system.matrix = assemble_stiffness(mesh, problem.a, 0.0, robin);
    system.rhs = assemble_load(mesh, problem.f, 0.0);
    system.dofs = dofs;
    if (robin && problem.robin) {
        const std::vector<double> rl = assemble_robin_load(mesh, problem.robin, 0.0);
        for (int d = 0; d < dofs.size(); ++d) system.rhs[d] += rl[d];
    }

    ConstrainedSystem constrained = apply_dirichlet(system, mesh, problem.g, 0.0);
    SolveResult result = solve_spd(constrained.matrix, constrained.rhs, tol);
    if (!result.report.converged) {
        throw SolverFailure("solve_elliptic: linear solver did not converge", result.report);
    }
    return compose_solution(mesh, dofs, constrained.free_dofs, result.x,
                            constrained.boundary_values);
}

}  // namespace wg
