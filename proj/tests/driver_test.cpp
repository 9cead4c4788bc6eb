#include "wg/driver.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace wg;

TEST(Registry, CoefficientSamples) {
    const ProblemDefinition ex1 = registry_lookup("example1-dirichlet");
    const Mat2 a1 = ex1.a(0.3, 0.7, 0.2);
    EXPECT_EQ(a1.xx, 1.0);
    EXPECT_EQ(a1.xy, 0.0);
    EXPECT_EQ(a1.yy, 1.0);

    const ProblemDefinition ex2 = registry_lookup("example2-tensor");
    const Mat2 a2 = ex2.a(1.0, 1.0, 0.9);
    EXPECT_EQ(a2.xx, 3.0);
    EXPECT_EQ(a2.xy, 1.0);
    EXPECT_EQ(a2.yy, 3.0);
}

TEST(Registry, RobinDataVanishesOnRightBoundary) {
    // The exact solution satisfies a grad(u).n + u = 0 on x = 1: the outward
    // flux is u_x = -u there.
    const ProblemDefinition p = registry_lookup("example1-robin");
    for (double t : {0.0, 0.17, 0.5, 0.81, 1.0}) {
        for (double y : {0.1, 0.5, 0.9}) {
            const Vec2 grad = p.exact_grad(1.0, y, t);
            const double residual = grad.x + p.exact(1.0, y, t);
            EXPECT_NEAR(residual, 0.0, 1e-14);
            EXPECT_EQ(p.robin(1.0, y, t), 0.0);
        }
    }
}

TEST(Registry, ManufacturedSourcesMatchFiniteDifferences) {
    // f = u_t - div(a grad u), verified against central differences of the
    // closed-form exact solution.
    for (const std::string id : {"example1-dirichlet", "example1-robin", "example2-tensor"}) {
        const ProblemDefinition p = registry_lookup(id);
        const double eps = 1e-5;
        for (const auto& [x, y, t] : {std::array<double, 3>{0.3, 0.4, 0.6},
                                      std::array<double, 3>{0.72, 0.15, 0.33}}) {
            const double u_t = (p.exact(x, y, t + eps) - p.exact(x, y, t - eps)) / (2 * eps);
            const auto flux_x = [&](double xx) {
                return apply(p.a(xx, y, t), p.exact_grad(xx, y, t)).x;
            };
            const auto flux_y = [&](double yy) {
                return apply(p.a(x, yy, t), p.exact_grad(x, yy, t)).y;
            };
            const double div_flux = (flux_x(x + eps) - flux_x(x - eps)) / (2 * eps) +
                                    (flux_y(y + eps) - flux_y(y - eps)) / (2 * eps);
            EXPECT_NEAR(p.f(x, y, t), u_t - div_flux, 1e-5) << id;
        }
    }
}

TEST(Registry, GradientsMatchFiniteDifferences) {
    for (const std::string& id : registry_ids()) {
        const ProblemDefinition p = registry_lookup(id);
        const double eps = 1e-6;
        const double x = 0.37, y = 0.61, t = 0.45;
        const Vec2 g = p.exact_grad(x, y, t);
        EXPECT_NEAR(g.x, (p.exact(x + eps, y, t) - p.exact(x - eps, y, t)) / (2 * eps), 1e-8) << id;
        EXPECT_NEAR(g.y, (p.exact(x, y + eps, t) - p.exact(x, y - eps, t)) / (2 * eps), 1e-8) << id;
        validate_problem(p);
    }
}

TEST(Registry, UnknownIdListsValidOnes) {
    try {
        registry_lookup("no-such-problem");
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("example1-dirichlet"), std::string::npos);
        EXPECT_NE(msg.find("constant-sanity"), std::string::npos);
    }
}

TEST(Config, Validation) {
    RunConfig config;
    config.levels = {4, 2};
    EXPECT_THROW(validate_config(config), std::invalid_argument);
    config.levels = {};
    EXPECT_THROW(validate_config(config), std::invalid_argument);
    config.levels = {2, 4};
    config.tol = 2.0;
    EXPECT_THROW(validate_config(config), std::invalid_argument);
    config.tol = 1e-10;
    config.problem = "bogus";
    EXPECT_THROW(validate_config(config), std::invalid_argument);
    config.problem = "constant-sanity";
    config.t_final = -1.0;
    EXPECT_THROW(validate_config(config), std::invalid_argument);
}

TEST(RunConvergence, ConstantSanityIsExact) {
    RunConfig config;
    config.problem = "constant-sanity";
    config.levels = {2, 4};
    config.k_rule = KRule::H;
    const ConvergenceReport report = run_convergence(config);
    ASSERT_EQ(report.levels.size(), 2u);
    for (const auto& level : report.levels) {
        EXPECT_LE(level.norms.inf_T, 1e-10);
        EXPECT_LE(level.norms.inf_dT, 1e-10);
        EXPECT_LE(level.norms.grad_d, 1e-10);
        EXPECT_LE(level.norms.l2_T, 1e-10);
        EXPECT_LE(level.norms.l2_dT, 1e-10);
    }
    for (double r : report.rates) EXPECT_TRUE(std::isnan(r));

    std::ostringstream csv;
    emit_csv(report, csv);
    EXPECT_NE(csv.str().find("rate,,n/a"), std::string::npos);
    EXPECT_TRUE(check_violations(report).empty());
}

TEST(RunConvergence, ByteReproducible) {
    RunConfig config;
    config.problem = "example1-dirichlet";
    config.levels = {2, 4};
    config.k_rule = KRule::H;
    std::ostringstream first, second;
    emit(run_convergence(config), OutFormat::Csv, first);
    emit(run_convergence(config), OutFormat::Csv, second);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_FALSE(first.str().empty());
}

TEST(RunConvergence, CsvAndMarkdownCarryTheSameNumbers) {
    RunConfig config;
    config.problem = "example1-dirichlet";
    config.levels = {2, 4};
    config.k_rule = KRule::H;
    const ConvergenceReport report = run_convergence(config);
    std::ostringstream csv_stream, md_stream;
    emit_csv(report, csv_stream);
    emit_markdown(report, md_stream);
    const std::string csv = csv_stream.str();
    const std::string md = md_stream.str();

    // Parse both tables and compare: markdown entries are the CSV values
    // rounded to three significant digits.
    std::istringstream csv_in(csv);
    std::string line;
    std::getline(csv_in, line);  // header
    std::vector<std::vector<double>> csv_rows;
    while (std::getline(csv_in, line) && line.rfind("rate", 0) != 0) {
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
        csv_rows.push_back(row);
    }

    std::istringstream md_in(md);
    std::vector<std::vector<double>> md_rows;
    while (std::getline(md_in, line)) {
        if (line.rfind("| 1/", 0) != 0) continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        std::getline(fields, field, '|');  // leading empty
        std::getline(fields, field, '|');  // h as 1/n
        row.push_back(1.0 / std::stod(field.substr(field.find('/') + 1)));
        while (std::getline(fields, field, '|')) {
            if (field.find_first_not_of(" \t") == std::string::npos) continue;
            row.push_back(std::stod(field));
        }
        md_rows.push_back(row);
    }

    ASSERT_EQ(csv_rows.size(), md_rows.size());
    for (std::size_t r = 0; r < csv_rows.size(); ++r) {
        ASSERT_EQ(csv_rows[r].size(), 7u);
        ASSERT_EQ(md_rows[r].size(), 6u);
        EXPECT_NEAR(md_rows[r][0], csv_rows[r][0], 1e-14);  // h
        for (int c = 0; c < 5; ++c) {
            const double exact = csv_rows[r][2 + c];
            char rounded[32];
            std::snprintf(rounded, sizeof(rounded), "%.2e", exact);
            EXPECT_DOUBLE_EQ(md_rows[r][1 + c], std::stod(rounded));
        }
    }
}

TEST(RunConvergence, SolverFailureIsRecordedWithMarkerRow) {
    RunConfig config;
    config.problem = "example1-dirichlet";
    config.levels = {2};
    config.k_rule = KRule::H;
    config.tol = 1e-30;
    const ConvergenceReport report = run_convergence(config);
    EXPECT_TRUE(report.solver_failed);
    EXPECT_EQ(report.failed_level, 2);
    std::ostringstream csv;
    emit_csv(report, csv);
    EXPECT_NE(csv.str().find("failed,1/2"), std::string::npos);
    const auto violations = check_violations(report);
    ASSERT_FALSE(violations.empty());
}

TEST(RunDiagnostics, EmitsRequestedKeys) {
    RunConfig config;
    config.problem = "example1-dirichlet";
    config.levels = {4};
    config.k_rule = KRule::H;
    config.diag_energy = true;
    config.diag_flux = true;
    config.diag_poincare = true;
    config.diag_commutativity = true;
    const DiagnosticsReport report = run_diagnostics(config);
    std::ostringstream out;
    emit_keyvalue(report, out);
    const std::string text = out.str();
    EXPECT_NE(text.find("energy.max_residual.n4="), std::string::npos);
    EXPECT_NE(text.find("flux.max_jump.n4="), std::string::npos);
    EXPECT_NE(text.find("poincare.max_ratio.n4="), std::string::npos);
    EXPECT_NE(text.find("commutativity.max_residual="), std::string::npos);

    // Commutativity residual over the polynomial set is at roundoff.
    for (const auto& [key, value] : report.entries) {
        if (key == "commutativity.max_residual") {
            EXPECT_LE(std::stod(value), 1e-12);
        }
    }
}

#ifdef WG_SOLVER_BIN
namespace {

int run_solver(const std::string& args, std::string* output = nullptr) {
    const std::string out_path = ::testing::TempDir() + "/wg_solver_out.txt";
    const std::string cmd = std::string(WG_SOLVER_BIN) + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(out_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        *output = buffer.str();
    }
    return WEXITSTATUS(status);
}

}  // namespace

TEST(CliBinary, ExitCodes) {
    EXPECT_EQ(run_solver("--help"), 0);
    EXPECT_EQ(run_solver("--no-such-flag"), 1);
    EXPECT_EQ(run_solver("--problem bogus --levels 2"), 1);
    EXPECT_EQ(run_solver("--diagnostics bogus"), 1);
    EXPECT_EQ(run_solver("--problem constant-sanity --levels 2,4 --k-rule h"), 0);
    EXPECT_EQ(run_solver("--problem constant-sanity --levels 2,4 --k-rule h --check"), 0);
    // Unreachable solver tolerance: exit 2 with the failure marker row.
    std::string output;
    EXPECT_EQ(run_solver("--problem example1-dirichlet --levels 2 --k-rule h --tol 1e-30", &output), 2);
    EXPECT_NE(output.find("failed,1/2"), std::string::npos);
    // Rates far outside the expected windows on coarse meshes: exit 3.
    EXPECT_EQ(run_solver("--problem example1-dirichlet --levels 2,4 --k-rule h --check"), 3);
}

TEST(CliBinary, ConfigFileWithFlagOverride) {
    const std::string config_path = ::testing::TempDir() + "/wg_solver_config.txt";
    {
        std::ofstream config(config_path);
        config << "problem=constant-sanity\n";
        config << "levels=2,4\n";
        config << "k-rule=h\n";
        config << "format=markdown\n";
    }
    std::string output;
    EXPECT_EQ(run_solver("--config " + config_path, &output), 0);
    EXPECT_NE(output.find("constant-sanity"), std::string::npos);
    EXPECT_NE(output.find("| 1/4"), std::string::npos);

    // Flags win over the config file.
    EXPECT_EQ(run_solver("--config " + config_path + " --format csv", &output), 0);
    EXPECT_NE(output.find("h,k,inf_T"), std::string::npos);
}

TEST(CliBinary, MarkdownAndOutFile) {
    const std::string out_path = ::testing::TempDir() + "/wg_table.md";
    EXPECT_EQ(run_solver("--problem constant-sanity --levels 2 --k-rule h --format markdown --out " +
                         out_path),
              0);
    std::ifstream in(out_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    EXPECT_NE(buffer.str().find("| h | inf_T | inf_dT | grad_d | l2_T | l2_dT |"),
              std::string::npos);
}
#endif
