#include "wg/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace wg;

TEST(Mesh, SmallestMeshCounts) {
    const Mesh mesh = build_uniform_mesh(1);
    EXPECT_EQ(mesh.num_triangles(), 2);
    EXPECT_EQ(mesh.num_vertices(), 4);
    EXPECT_EQ(mesh.num_edges(), 5);
    int boundary = 0;
    for (int e = 0; e < mesh.num_edges(); ++e) boundary += mesh.is_boundary_edge(e);
    EXPECT_EQ(boundary, 4);
}

TEST(Mesh, CountsAtN8) {
    // 2 n (n+1) axis-aligned edges plus n^2 diagonals = 208 at n = 8.
    const Mesh mesh = build_uniform_mesh(8);
    EXPECT_EQ(mesh.num_triangles(), 128);
    EXPECT_EQ(mesh.num_vertices(), 81);
    EXPECT_EQ(mesh.num_edges(), 208);
}

TEST(Mesh, UniformAreasAtN2) {
    const Mesh mesh = build_uniform_mesh(2);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        EXPECT_NEAR(element_geometry(mesh, t).area, 0.125, 1e-15);
    }
}

TEST(Mesh, RejectsZeroSubdivisions) { EXPECT_THROW(build_uniform_mesh(0), std::invalid_argument); }

TEST(Mesh, ConnectivityInvariantsExhaustive) {
    for (int n = 1; n <= 32; ++n) {
        const Mesh mesh = build_uniform_mesh(n);
        ASSERT_EQ(mesh.num_triangles(), 2 * n * n);
        ASSERT_EQ(mesh.num_vertices(), (n + 1) * (n + 1));
        ASSERT_EQ(mesh.num_edges(), 3 * n * n + 2 * n);
        // Euler relation V - E + F = 1, faces counting triangles only.
        ASSERT_EQ(mesh.num_vertices() - mesh.num_edges() + mesh.num_triangles(), 1);

        int boundary = 0;
        std::vector<int> adjacency(mesh.num_edges(), 0);
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            for (int i = 0; i < 3; ++i) {
                const int e = mesh.tri_edges[t][i];
                ++adjacency[e];
                // The local edge must connect the two vertices opposite local vertex i.
                const int a = mesh.triangles[t][(i + 1) % 3];
                const int b = mesh.triangles[t][(i + 2) % 3];
                ASSERT_EQ(std::min(a, b), mesh.edges[e][0]);
                ASSERT_EQ(std::max(a, b), mesh.edges[e][1]);
            }
        }
        for (int e = 0; e < mesh.num_edges(); ++e) {
            if (mesh.is_boundary_edge(e)) {
                ++boundary;
                ASSERT_EQ(adjacency[e], 1);
            } else {
                ASSERT_EQ(adjacency[e], 2);
            }
        }
        ASSERT_EQ(boundary, 4 * n);

        // Kahan summation so the check measures the areas, not the
        // accumulation order.
        double total_area = 0.0, compensation = 0.0;
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            const double area = element_geometry(mesh, t).area;
            ASSERT_GT(area, 0.0);
            ASSERT_NEAR(area, 0.5 / (n * n), 1e-14);
            const double y = area - compensation;
            const double s = total_area + y;
            compensation = (s - total_area) - y;
            total_area = s;
        }
        ASSERT_NEAR(total_area, 1.0, 1e-14);
    }
}

TEST(Mesh, AdjacentOutwardNormalsOppose) {
    for (int n : {1, 2, 3, 8}) {
        const Mesh mesh = build_uniform_mesh(n);
        for (int e = 0; e < mesh.num_edges(); ++e) {
            if (mesh.is_boundary_edge(e)) continue;
            Vec2 normals[2];
            for (int side = 0; side < 2; ++side) {
                const int t = mesh.edge_tris[e][side];
                for (int i = 0; i < 3; ++i) {
                    if (mesh.tri_edges[t][i] == e) normals[side] = element_geometry(mesh, t).normal[i];
                }
            }
            ASSERT_NEAR(normals[0].x + normals[1].x, 0.0, 1e-14);
            ASSERT_NEAR(normals[0].y + normals[1].y, 0.0, 1e-14);
        }
    }
}

TEST(Mesh, TriEdgeSignMatchesGlobalNormal) {
    const Mesh mesh = build_uniform_mesh(4);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const TriGeometry geo = element_geometry(mesh, t);
        for (int i = 0; i < 3; ++i) {
            const Vec2 global = edge_normal(mesh, mesh.tri_edges[t][i]);
            const double sign = mesh.tri_edge_sign[t][i];
            EXPECT_NEAR(geo.normal[i].x, sign * global.x, 1e-14);
            EXPECT_NEAR(geo.normal[i].y, sign * global.y, 1e-14);
        }
    }
}

TEST(Mesh, ClassifyAllDirichlet) {
    const Mesh mesh = classify_boundary(build_uniform_mesh(8), BoundaryRule::AllDirichlet);
    int dirichlet = 0, robin = 0;
    for (auto tag : mesh.boundary_tag) {
        dirichlet += tag == EdgeKind::Dirichlet;
        robin += tag == EdgeKind::Robin;
    }
    EXPECT_EQ(dirichlet, 32);
    EXPECT_EQ(robin, 0);
}

TEST(Mesh, ClassifyRobinOnRight) {
    const Mesh mesh = classify_boundary(build_uniform_mesh(8), BoundaryRule::RobinOnRight);
    int dirichlet = 0, robin = 0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.boundary_tag[e] == EdgeKind::Robin) {
            ++robin;
            EXPECT_DOUBLE_EQ(mesh.vertices[mesh.edges[e][0]].x, 1.0);
            EXPECT_DOUBLE_EQ(mesh.vertices[mesh.edges[e][1]].x, 1.0);
        }
        dirichlet += mesh.boundary_tag[e] == EdgeKind::Dirichlet;
        if (!mesh.is_boundary_edge(e)) {
            EXPECT_EQ(mesh.boundary_tag[e], EdgeKind::Interior);
        }
    }
    EXPECT_EQ(robin, 8);
    EXPECT_EQ(dirichlet, 24);

    const Mesh tiny = classify_boundary(build_uniform_mesh(1), BoundaryRule::RobinOnRight);
    int tiny_robin = 0, tiny_dirichlet = 0;
    for (auto tag : tiny.boundary_tag) {
        tiny_robin += tag == EdgeKind::Robin;
        tiny_dirichlet += tag == EdgeKind::Dirichlet;
    }
    EXPECT_EQ(tiny_robin, 1);
    EXPECT_EQ(tiny_dirichlet, 3);
}

TEST(Mesh, ReclassifyIsIdempotentOnInterior) {
    Mesh mesh = classify_boundary(build_uniform_mesh(4), BoundaryRule::RobinOnRight);
    mesh = classify_boundary(std::move(mesh), BoundaryRule::AllDirichlet);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e)) {
            EXPECT_EQ(mesh.boundary_tag[e], EdgeKind::Interior);
        } else {
            EXPECT_EQ(mesh.boundary_tag[e], EdgeKind::Dirichlet);
        }
    }
}

TEST(ElementGeometry, ReferenceTriangle) {
    const Mesh mesh = wgtest::reference_triangle_mesh();
    const TriGeometry geo = element_geometry(mesh, 0);
    EXPECT_NEAR(geo.area, 0.5, 1e-15);
    EXPECT_NEAR(geo.centroid.x, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(geo.centroid.y, 1.0 / 3.0, 1e-15);
    // Local edge 0 is the hypotenuse.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(geo.normal[0].x, inv_sqrt2, 1e-15);
    EXPECT_NEAR(geo.normal[0].y, inv_sqrt2, 1e-15);
    EXPECT_NEAR(geo.edge_length[0], std::sqrt(2.0), 1e-15);
}

TEST(ElementGeometry, UniformMeshArea) {
    const Mesh mesh = build_uniform_mesh(4);
    EXPECT_NEAR(element_geometry(mesh, 7).area, 1.0 / 32.0, 1e-15);
}

TEST(ElementGeometry, IndexOutOfRange) {
    const Mesh mesh = build_uniform_mesh(2);
    EXPECT_THROW(element_geometry(mesh, -1), std::out_of_range);
    EXPECT_THROW(element_geometry(mesh, 8), std::out_of_range);
}
