#pragma once

#include <cassert>
#include <vector>

#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"

namespace wg {

/// A weak Galerkin function in S_h(0,0): one constant per triangle interior
/// and one constant per edge. Members of S_h^0 additionally carry a zero
/// value on every Dirichlet boundary edge.
struct WgFunction {
    std::vector<double> interior;
    std::vector<double> edge;

    static WgFunction zeros(const Mesh& mesh) {
        WgFunction u;
        u.interior.assign(mesh.num_triangles(), 0.0);
        u.edge.assign(mesh.num_edges(), 0.0);
        return u;
    }

    bool matches(const Mesh& mesh) const {
        return static_cast<int>(interior.size()) == mesh.num_triangles() &&
               static_cast<int>(edge.size()) == mesh.num_edges();
    }
};

inline WgFunction operator-(const WgFunction& a, const WgFunction& b) {
    assert(a.interior.size() == b.interior.size() && a.edge.size() == b.edge.size());
    WgFunction d = a;
    for (std::size_t i = 0; i < d.interior.size(); ++i) d.interior[i] -= b.interior[i];
    for (std::size_t i = 0; i < d.edge.size(); ++i) d.edge[i] -= b.edge[i];
    return d;
}

/// L2 projection Q_h = {Q_0, Q_b}: cell means on triangles, edge means on
/// edges, both evaluated with the module quadrature at the given time.
template <typename F>
WgFunction project_qh(F&& field, const Mesh& mesh, double time) {
    WgFunction u = WgFunction::zeros(mesh);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double area = element_geometry(mesh, t).area;
        u.interior[t] = integrate_cell(field, mesh, t, time) / area;
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        u.edge[e] = integrate_edge(field, mesh, e, time) / edge_length(mesh, e);
    }
    return u;
}

}  // namespace wg
