#include "wg/wg_function.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

using namespace wg;

TEST(ProjectQh, ReproducesConstants) {
    const Mesh mesh = build_uniform_mesh(3);
    const WgFunction u = project_qh([](double, double, double) { return 4.25; }, mesh, 0.0);
    for (double v : u.interior) EXPECT_NEAR(v, 4.25, 1e-14);
    for (double v : u.edge) EXPECT_NEAR(v, 4.25, 1e-14);
}

TEST(ProjectQh, LinearFieldOnReferenceTriangle) {
    const Mesh mesh = wgtest::reference_triangle_mesh();
    const WgFunction u = project_qh([](double x, double, double) { return x; }, mesh, 0.0);
    EXPECT_NEAR(u.interior[0], 1.0 / 3.0, 1e-15);
    const int bottom = wgtest::find_edge(mesh, {0.0, 0.0}, {1.0, 0.0});
    EXPECT_NEAR(u.edge[bottom], 0.5, 1e-15);
}

TEST(ProjectQh, QuadraticEdgeMean) {
    const Mesh mesh = wgtest::reference_triangle_mesh();
    const WgFunction u = project_qh([](double x, double, double) { return x * x; }, mesh, 0.0);
    const int bottom = wgtest::find_edge(mesh, {0.0, 0.0}, {1.0, 0.0});
    EXPECT_NEAR(u.edge[bottom], 1.0 / 3.0, 1e-15);
}

TEST(ProjectQh, ReproducesPiecewiseConstantData) {
    // A field constant on each cell and along each edge: the mesh line
    // x = 1/2 splits the square, and quadrature points of edges on that line
    // all evaluate on the line itself.
    const Mesh mesh = build_uniform_mesh(8);
    const auto field = [](double x, double, double) { return x < 0.5 ? 2.0 : 5.0; };
    const WgFunction u = project_qh(field, mesh, 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double cx = element_geometry(mesh, t).centroid.x;
        EXPECT_NEAR(u.interior[t], cx < 0.5 ? 2.0 : 5.0, 1e-14);
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const double mx = edge_midpoint(mesh, e).x;
        const double xa = mesh.vertices[mesh.edges[e][0]].x;
        const double xb = mesh.vertices[mesh.edges[e][1]].x;
        const bool on_line = xa == 0.5 && xb == 0.5;
        const double expected = (on_line || mx >= 0.5) ? 5.0 : 2.0;
        EXPECT_NEAR(u.edge[e], expected, 1e-14);
    }
}

TEST(ProjectQh, Linearity) {
    const Mesh mesh = build_uniform_mesh(4);
    const auto f = [](double x, double y, double) { return std::sin(3.0 * x) + y; };
    const auto g = [](double x, double y, double) { return std::exp(x - y); };
    const double alpha = 1.7, beta = -0.43;
    const WgFunction combined = project_qh(
        [&](double x, double y, double t) { return alpha * f(x, y, t) + beta * g(x, y, t); },
        mesh, 0.0);
    const WgFunction uf = project_qh(f, mesh, 0.0);
    const WgFunction ug = project_qh(g, mesh, 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        EXPECT_NEAR(combined.interior[t], alpha * uf.interior[t] + beta * ug.interior[t], 1e-13);
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        EXPECT_NEAR(combined.edge[e], alpha * uf.edge[e] + beta * ug.edge[e], 1e-13);
    }
}

TEST(ProjectQh, TimeIsPassedThrough) {
    const Mesh mesh = build_uniform_mesh(2);
    const auto f = [](double, double, double t) { return 3.0 * t; };
    const WgFunction u = project_qh(f, mesh, 0.5);
    for (double v : u.interior) EXPECT_NEAR(v, 1.5, 1e-14);
}

TEST(ProjectQh, RejectsNonFiniteField) {
    const Mesh mesh = build_uniform_mesh(2);
    EXPECT_THROW(
        project_qh([](double, double, double) { return std::numeric_limits<double>::infinity(); },
                   mesh, 0.0),
        std::domain_error);
}

TEST(WgFunction, ZerosMatchesMesh) {
    const Mesh mesh = build_uniform_mesh(5);
    const WgFunction u = WgFunction::zeros(mesh);
    EXPECT_TRUE(u.matches(mesh));
    EXPECT_EQ(static_cast<int>(u.interior.size()), 50);
    EXPECT_EQ(static_cast<int>(u.edge.size()), 85);
}
