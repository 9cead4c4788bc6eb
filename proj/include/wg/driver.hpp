#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wg/analysis.hpp"
#include "wg/registry.hpp"
#include "wg/timestepper.hpp"

namespace wg {

enum class KRule { H, H2 };
enum class OutFormat { Csv, Markdown };

inline std::string to_string(KRule r) { return r == KRule::H ? "h" : "h2"; }

/// Validated run description: which problem, which refinement levels, how the
/// time step couples to the mesh size, and what to emit.
struct RunConfig {
    std::string problem = "example1-dirichlet";
    std::vector<int> levels{8, 16, 32, 64};
    KRule k_rule = KRule::H2;
    double t_final = 1.0;
    double tol = 1e-10;
    OutFormat format = OutFormat::Csv;
    std::string out_path;  // empty -> stdout
    bool check = false;

    bool diag_energy = false;
    bool diag_flux = false;
    bool diag_poincare = false;
    bool diag_commutativity = false;
    unsigned seed = 20240808;

    bool any_diagnostics() const {
        return diag_energy || diag_flux || diag_poincare || diag_commutativity;
    }
};

inline void validate_config(const RunConfig& config) {
    registry_lookup(config.problem);  // throws on unknown id
    if (config.levels.empty()) throw std::invalid_argument("config: no mesh levels given");
    for (std::size_t i = 0; i < config.levels.size(); ++i) {
        if (config.levels[i] < 1) throw std::invalid_argument("config: levels must be >= 1");
        if (i > 0 && config.levels[i] <= config.levels[i - 1]) {
            throw std::invalid_argument("config: levels must be strictly ascending");
        }
    }
    if (!(config.tol > 0.0 && config.tol < 1.0)) {
        throw std::invalid_argument("config: tol must lie in (0, 1)");
    }
    if (!(config.t_final > 0.0)) throw std::invalid_argument("config: t-final must be positive");
}

struct LevelResult {
    int n = 0;
    double h = 0.0;
    double k = 0.0;
    ErrorNorms norms;
};

struct ConvergenceReport {
    std::string problem_id;
    KRule k_rule = KRule::H2;
    std::vector<LevelResult> levels;
    /// Fitted rate per norm column (inf_T, inf_dT, grad_d, l2_T, l2_dT);
    /// NaN when some level's error is at roundoff and no rate applies.
    std::array<double, 5> rates{};
    bool solver_failed = false;
    int failed_level = 0;
    std::string failure_message;
};

namespace detail {

inline std::array<double, 5> norm_array(const ErrorNorms& n) {
    return {n.inf_T, n.inf_dT, n.grad_d, n.l2_T, n.l2_dT};
}

inline const std::array<const char*, 5>& norm_names() {
    static const std::array<const char*, 5> names{"inf_T", "inf_dT", "grad_d", "l2_T", "l2_dT"};
    return names;
}

inline std::array<double, 5> fit_rates(const std::vector<LevelResult>& levels) {
    std::array<double, 5> rates{};
    rates.fill(std::numeric_limits<double>::quiet_NaN());
    if (levels.size() < 2) return rates;
    for (int c = 0; c < 5; ++c) {
        std::vector<std::pair<double, double>> pts;
        bool usable = true;
        for (const auto& level : levels) {
            const double err = norm_array(level.norms)[c];
            if (!(err > 1e-12)) {
                usable = false;
                break;
            }
            pts.emplace_back(level.h, err);
        }
        if (usable) rates[c] = fit_rate(pts);
    }
    return rates;
}

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace detail

/// Runs the configured convergence study: per level, build and classify the
/// mesh, march to t_final with k tied to h by the k-rule, and record the
/// error norms at the final time. A solver failure stops the sweep and is
/// recorded in the report instead of thrown.
inline ConvergenceReport run_convergence(const RunConfig& config) {
    validate_config(config);
    ProblemDefinition problem = registry_lookup(config.problem);
    problem.t_final = config.t_final;
    validate_problem(problem);

    ConvergenceReport report;
    report.problem_id = config.problem;
    report.k_rule = config.k_rule;

    for (int n : config.levels) {
        const double h = 1.0 / n;
        const double k = config.k_rule == KRule::H ? h : h * h;
        const Mesh mesh = classify_boundary(build_uniform_mesh(n), problem.boundary);
        try {
            const WgFunction U = solve_parabolic(problem, mesh, k, {}, config.tol);
            report.levels.push_back({n, h, k, error_norms(U, problem, mesh, problem.t_final)});
        } catch (const SolverFailure& failure) {
            report.solver_failed = true;
            report.failed_level = n;
            report.failure_message = failure.what();
            break;
        }
    }
    report.rates = detail::fit_rates(report.levels);
    return report;
}

/// Full-precision CSV: one row per level, then a rate row tagged "rate".
inline void emit_csv(const ConvergenceReport& report, std::ostream& out) {
    out << "h,k,inf_T,inf_dT,grad_d,l2_T,l2_dT\n";
    for (const auto& level : report.levels) {
        out << detail::fmt("%.17g", level.h) << ',' << detail::fmt("%.17g", level.k);
        for (double v : detail::norm_array(level.norms)) out << ',' << detail::fmt("%.17g", v);
        out << '\n';
    }
    out << "rate,";
    for (double r : report.rates) {
        out << ',' << (std::isnan(r) ? std::string("n/a") : detail::fmt("%.17g", r));
    }
    out << '\n';
    if (report.solver_failed) {
        out << "failed,1/" << report.failed_level << '\n';
    }
}

/// Markdown table in the layout of the reference results: one row per mesh
/// size, three-significant-digit scientific entries, closing rate row.
inline void emit_markdown(const ConvergenceReport& report, std::ostream& out) {
    out << "Problem: " << report.problem_id << ", k-rule: k=" << to_string(report.k_rule)
        << "\n\n";
    out << "| h | inf_T | inf_dT | grad_d | l2_T | l2_dT |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& level : report.levels) {
        out << "| 1/" << level.n;
        for (double v : detail::norm_array(level.norms)) {
            out << " | " << detail::fmt("%.2e", v);
        }
        out << " |\n";
    }
    out << "| O(h^r) r=";
    for (double r : report.rates) {
        out << " | " << (std::isnan(r) ? std::string("n/a") : detail::fmt("%.4f", r));
    }
    out << " |\n";
    if (report.solver_failed) {
        out << "\nsolver failure at h=1/" << report.failed_level << ": "
            << report.failure_message << '\n';
    }
}

inline void emit(const ConvergenceReport& report, OutFormat format, std::ostream& out) {
    if (format == OutFormat::Csv) {
        emit_csv(report, out);
    } else {
        emit_markdown(report, out);
    }
}

/// Rate-window checks behind the --check flag. The windows for the studied
/// problem/k-rule pairs follow the regression targets pinned in the
/// acceptance suite; constant-sanity instead requires roundoff-level errors.
inline std::vector<std::string> check_violations(const ConvergenceReport& report) {
    std::vector<std::string> violations;
    if (report.solver_failed) {
        violations.push_back("solver failed at level 1/" + std::to_string(report.failed_level));
        return violations;
    }

    const auto& names = detail::norm_names();
    if (report.problem_id == "constant-sanity") {
        for (const auto& level : report.levels) {
            const auto norms = detail::norm_array(level.norms);
            for (int c = 0; c < 5; ++c) {
                if (norms[c] > 1e-10) {
                    violations.push_back(std::string(names[c]) + " at 1/" +
                                         std::to_string(level.n) + " exceeds 1e-10");
                }
            }
        }
        return violations;
    }

    const auto require = [&](int c, double lo, double hi) {
        const double r = report.rates[c];
        if (std::isnan(r) || r < lo || r > hi) {
            violations.push_back(std::string(names[c]) + " rate " +
                                 (std::isnan(r) ? std::string("n/a") : detail::fmt("%.4f", r)) +
                                 " outside [" + detail::fmt("%.2f", lo) + ", " +
                                 detail::fmt("%.2f", hi) + "]");
        }
    };
    const double inf = std::numeric_limits<double>::infinity();
    if (report.k_rule == KRule::H2) {
        if (report.problem_id == "example1-robin") {
            for (int c = 0; c < 5; ++c) require(c, 1.75, inf);
        } else {
            for (int c = 0; c < 5; ++c) require(c, 1.75, 2.25);
        }
    } else {
        // First order in time dominates; the weak-gradient column is allowed
        // to superconverge.
        const double lo = report.problem_id == "example1-robin" ? 0.75 : 0.85;
        const double hi = report.problem_id == "example2-tensor" ? 1.35 : 1.25;
        for (int c : {0, 1, 3, 4}) require(c, lo, hi);
        require(2, 0.95, inf);
    }
    return violations;
}

/// Key/value diagnostics report.
struct DiagnosticsReport {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, double value) {
        entries.emplace_back(key, detail::fmt("%.6e", value));
    }
};

inline void emit_keyvalue(const DiagnosticsReport& report, std::ostream& out) {
    for (const auto& [key, value] : report.entries) out << key << '=' << value << '\n';
}

/// Runs the enabled diagnostics. Energy and flux checks march the configured
/// problem on each level; the commutativity check always uses its reference
/// meshes n = 2, 4, 8; Poincare ratios use 100 draws per level.
inline DiagnosticsReport run_diagnostics(const RunConfig& config) {
    validate_config(config);
    ProblemDefinition problem = registry_lookup(config.problem);
    problem.t_final = config.t_final;
    validate_problem(problem);

    DiagnosticsReport report;
    for (int n : config.levels) {
        const double h = 1.0 / n;
        const double k = config.k_rule == KRule::H ? h : h * h;
        const Mesh mesh = classify_boundary(build_uniform_mesh(n), problem.boundary);
        const std::string suffix = ".n" + std::to_string(n);

        if (config.diag_energy || config.diag_flux) {
            double max_energy_residual = 0.0;
            const WgFunction U = solve_parabolic(
                problem, mesh, k,
                [&](int, double t_n, const WgFunction& prev, const WgFunction& curr) {
                    if (!config.diag_energy) return;
                    for (double r : energy_balance(mesh, problem, prev, curr, t_n, k)) {
                        max_energy_residual = std::max(max_energy_residual, std::abs(r));
                    }
                },
                config.tol);
            if (config.diag_energy) report.add("energy.max_residual" + suffix, max_energy_residual);
            if (config.diag_flux) {
                const FluxContinuity flux = flux_continuity(mesh, problem, U, problem.t_final);
                report.add("flux.max_jump" + suffix, flux.max_jump);
                report.add("flux.max_flux" + suffix, flux.max_flux);
            }
        }
        if (config.diag_poincare) {
            report.add("poincare.max_ratio" + suffix, poincare_ratio(mesh, 100, config.seed));
        }
    }

    if (config.diag_commutativity) {
        double worst = 0.0;
        for (int n : {2, 4, 8}) {
            const Mesh mesh = build_uniform_mesh(n);
            const std::vector<std::pair<ScalarField, VectorField>> fields = {
                {[](double, double, double) { return 1.0; },
                 [](double, double, double) { return Vec2{0.0, 0.0}; }},
                {[](double x, double, double) { return x; },
                 [](double, double, double) { return Vec2{1.0, 0.0}; }},
                {[](double, double y, double) { return y; },
                 [](double, double, double) { return Vec2{0.0, 1.0}; }},
                {[](double x, double, double) { return x * x; },
                 [](double x, double, double) { return Vec2{2.0 * x, 0.0}; }},
                {[](double x, double y, double) { return x * y; },
                 [](double x, double y, double) { return Vec2{y, x}; }},
                {[](double, double y, double) { return y * y; },
                 [](double, double y, double) { return Vec2{0.0, 2.0 * y}; }},
            };
            for (const auto& [w, grad_w] : fields) {
                worst = std::max(worst, commutativity_residual(mesh, w, grad_w));
            }
        }
        report.add("commutativity.max_residual", worst);
    }
    return report;
}

}  // namespace wg
