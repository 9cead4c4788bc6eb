#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wg/geometry.hpp"

namespace wg {

enum class EdgeKind { Interior, Dirichlet, Robin };

/// Boundary partitions used by the problem registry: Dirichlet everywhere,
/// or Robin on the segment x = 1 and Dirichlet on the remaining three sides.
enum class BoundaryRule { AllDirichlet, RobinOnRight };

/// Uniform triangulation of the unit square (0,1)^2.
///
/// Each of the n*n grid cells is split along the diagonal from its lower-left
/// to its upper-right corner. Triangles are stored counterclockwise; edges are
/// stored with the lower vertex index first, which fixes a global normal
/// direction per edge (used for flux-jump bookkeeping).
struct Mesh {
    int n = 0;
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;

    /// Edge endpoints, low vertex index first.
    std::vector<std::array<int, 2>> edges;

    /// Per triangle: edge index of local edge i, where local edge i is the
    /// one opposite local vertex i.
    std::vector<std::array<int, 3>> tri_edges;

    /// +1 when the counterclockwise traversal of the local edge runs from the
    /// low vertex index to the high one, -1 otherwise. The outward normal of
    /// a triangle on local edge i equals tri_edge_sign * edge_normal(e).
    std::vector<std::array<int, 3>> tri_edge_sign;

    /// Adjacent triangles per edge; second entry is -1 on the boundary.
    std::vector<std::array<int, 2>> edge_tris;

    std::vector<EdgeKind> boundary_tag;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    bool is_boundary_edge(int e) const { return edge_tris[e][1] < 0; }
    double mesh_size() const { return 1.0 / n; }
};

/// Geometry of one element: area, centroid, and per local edge its length
/// and outward unit normal.
struct TriGeometry {
    double area = 0.0;
    Vec2 centroid;
    std::array<double, 3> edge_length{};
    std::array<Vec2, 3> normal{};
};

inline Mesh build_uniform_mesh(int n) {
    if (n < 1) throw std::invalid_argument("build_uniform_mesh: n must be >= 1");

    Mesh mesh;
    mesh.n = n;
    const double h = 1.0 / n;
    mesh.vertices.reserve((n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            mesh.vertices.push_back({i * h, j * h});
        }
    }
    const auto vid = [n](int i, int j) { return j * (n + 1) + i; };

    mesh.triangles.reserve(2 * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int ll = vid(i, j);
            const int lr = vid(i + 1, j);
            const int ur = vid(i + 1, j + 1);
            const int ul = vid(i, j + 1);
            mesh.triangles.push_back({ll, lr, ur});
            mesh.triangles.push_back({ll, ur, ul});
        }
    }

    std::map<std::pair<int, int>, int> edge_id;
    mesh.tri_edges.resize(mesh.triangles.size());
    mesh.tri_edge_sign.resize(mesh.triangles.size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            // Local edge i is opposite vertex i, traversed counterclockwise.
            const int a = tri[(i + 1) % 3];
            const int b = tri[(i + 2) % 3];
            const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            auto [it, inserted] = edge_id.try_emplace(key, mesh.num_edges());
            if (inserted) {
                mesh.edges.push_back({key.first, key.second});
                mesh.edge_tris.push_back({t, -1});
            } else {
                mesh.edge_tris[it->second][1] = t;
            }
            mesh.tri_edges[t][i] = it->second;
            mesh.tri_edge_sign[t][i] = (a < b) ? 1 : -1;
        }
    }

    mesh.boundary_tag.assign(mesh.num_edges(), EdgeKind::Interior);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.is_boundary_edge(e)) mesh.boundary_tag[e] = EdgeKind::Dirichlet;
    }
    return mesh;
}

inline Mesh classify_boundary(Mesh mesh, BoundaryRule rule) {
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e)) {
            mesh.boundary_tag[e] = EdgeKind::Interior;
            continue;
        }
        if (rule == BoundaryRule::RobinOnRight) {
            const Vec2 pa = mesh.vertices[mesh.edges[e][0]];
            const Vec2 pb = mesh.vertices[mesh.edges[e][1]];
            const bool on_right = pa.x == 1.0 && pb.x == 1.0;
            mesh.boundary_tag[e] = on_right ? EdgeKind::Robin : EdgeKind::Dirichlet;
        } else {
            mesh.boundary_tag[e] = EdgeKind::Dirichlet;
        }
    }
    return mesh;
}

inline TriGeometry element_geometry(const Mesh& mesh, int t) {
    if (t < 0 || t >= mesh.num_triangles()) {
        throw std::out_of_range("element_geometry: triangle index out of range");
    }
    const auto& tri = mesh.triangles[t];
    const Vec2 p0 = mesh.vertices[tri[0]];
    const Vec2 p1 = mesh.vertices[tri[1]];
    const Vec2 p2 = mesh.vertices[tri[2]];

    TriGeometry g;
    g.area = 0.5 * cross(p1 - p0, p2 - p0);
    g.centroid = (1.0 / 3.0) * (p0 + p1 + p2);
    const std::array<Vec2, 3> corner{p0, p1, p2};
    for (int i = 0; i < 3; ++i) {
        // Counterclockwise traversal of the edge opposite vertex i.
        const Vec2 d = corner[(i + 2) % 3] - corner[(i + 1) % 3];
        const double len = norm(d);
        g.edge_length[i] = len;
        g.normal[i] = (1.0 / len) * Vec2{d.y, -d.x};
    }
    return g;
}

inline double edge_length(const Mesh& mesh, int e) {
    return norm(mesh.vertices[mesh.edges[e][1]] - mesh.vertices[mesh.edges[e][0]]);
}

inline Vec2 edge_midpoint(const Mesh& mesh, int e) {
    return 0.5 * (mesh.vertices[mesh.edges[e][0]] + mesh.vertices[mesh.edges[e][1]]);
}

/// Unit normal associated with the canonical (low -> high) edge orientation.
inline Vec2 edge_normal(const Mesh& mesh, int e) {
    const Vec2 d = mesh.vertices[mesh.edges[e][1]] - mesh.vertices[mesh.edges[e][0]];
    return (1.0 / norm(d)) * Vec2{d.y, -d.x};
}

}  // namespace wg
