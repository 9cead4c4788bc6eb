// Command-line front end: regenerates the convergence tables for the built-in
// manufactured problems and runs the conservation/property diagnostics.
//
// Exit codes: 0 success, 1 usage error, 2 solver failure, 3 failed --check.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wg/driver.hpp"

namespace {

int run(const wg::RunConfig& config) {
    std::ofstream file;
    if (!config.out_path.empty()) {
        file.open(config.out_path);
        if (!file) {
            std::cerr << "error: cannot open output file '" << config.out_path << "'\n";
            return 1;
        }
    }
    std::ostream& out = config.out_path.empty() ? std::cout : file;

    if (config.any_diagnostics()) {
        const wg::DiagnosticsReport report = wg::run_diagnostics(config);
        wg::emit_keyvalue(report, out);
        return 0;
    }

    const wg::ConvergenceReport report = wg::run_convergence(config);
    wg::emit(report, config.format, out);
    if (report.solver_failed) {
        std::cerr << "error: " << report.failure_message << " (level 1/" << report.failed_level
                  << ")\n";
        return 2;
    }
    if (config.check) {
        const std::vector<std::string> violations = wg::check_violations(report);
        for (const auto& v : violations) std::cerr << "check: " << v << '\n';
        if (!violations.empty()) return 3;
        std::cerr << "check: ok\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak Galerkin finite element solver for the heat equation on the unit square"};
    app.set_config("--config", "", "Read options from a key=value file");

    wg::RunConfig config;
    std::string k_rule = "h2";
    std::string format = "csv";
    std::vector<std::string> diagnostics;

    app.add_option("--problem", config.problem,
                   "Problem id: example1-dirichlet, example1-robin, example2-tensor, "
                   "constant-sanity")
        ->capture_default_str();
    app.add_option("--levels", config.levels, "Mesh subdivisions per side, ascending")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--k-rule", k_rule, "Time step rule: h (k=h) or h2 (k=h^2)")
        ->check(CLI::IsMember({"h", "h2"}))
        ->capture_default_str();
    app.add_option("--t-final", config.t_final, "Final time")->capture_default_str();
    app.add_option("--tol", config.tol, "Linear solver relative residual tolerance")
        ->capture_default_str();
    app.add_option("--format", format, "Table format: csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    app.add_option("--out", config.out_path, "Output path (default: stdout)");
    app.add_option("--diagnostics", diagnostics,
                   "Diagnostics to run instead of the convergence table: energy, flux, "
                   "poincare, commutativity, all")
        ->delimiter(',');
    app.add_flag("--check", config.check, "Verify fitted rates against the expected windows");
    app.add_option("--seed", config.seed, "Seed for the Poincare ratio draws")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    config.k_rule = k_rule == "h" ? wg::KRule::H : wg::KRule::H2;
    config.format = format == "csv" ? wg::OutFormat::Csv : wg::OutFormat::Markdown;
    for (const auto& d : diagnostics) {
        if (d == "energy" || d == "all") config.diag_energy = true;
        if (d == "flux" || d == "all") config.diag_flux = true;
        if (d == "poincare" || d == "all") config.diag_poincare = true;
        if (d == "commutativity" || d == "all") config.diag_commutativity = true;
        if (d != "energy" && d != "flux" && d != "poincare" && d != "commutativity" &&
            d != "all") {
            std::cerr << "error: unknown diagnostic '" << d << "'\n";
            return 1;
        }
    }

    try {
        return run(config);
    } catch (const wg::SolverFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
