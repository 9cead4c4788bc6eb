#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"
#include "wg/rt0.hpp"
#include "wg/sparse.hpp"
#include "wg/wg_function.hpp"

namespace wg {

/// Global DOF numbering: interior DOFs first (one per triangle), then edge
/// DOFs. Dirichlet boundary edges form the constrained set.
struct DofMap {
    int n_tri = 0;
    int n_edge = 0;
    std::vector<std::uint8_t> constrained;

    int size() const { return n_tri + n_edge; }
    int tri_dof(int t) const { return t; }
    int edge_dof(int e) const { return n_tri + e; }
};

inline DofMap make_dof_map(const Mesh& mesh) {
    DofMap map;
    map.n_tri = mesh.num_triangles();
    map.n_edge = mesh.num_edges();
    map.constrained.assign(map.size(), 0);
    for (int e = 0; e < map.n_edge; ++e) {
        if (mesh.boundary_tag[e] == EdgeKind::Dirichlet) map.constrained[map.edge_dof(e)] = 1;
    }
    return map;
}

/// Bilinear form a(w, v) = (a grad_d w, grad_d v), plus the Robin pairing
/// <w_b, v_b> on Robin edges when requested. Per element the local matrix is
/// G' M_a G over the DOFs [v0, vb1, vb2, vb3].
template <typename A>
SparseMatrix assemble_stiffness(const Mesh& mesh, A&& coeff, double time, bool robin) {
    const DofMap dofs = make_dof_map(mesh);
    CooBuilder builder(dofs.size(), dofs.size());

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Mat3x4 g = local_gradient_map(mesh, t);
        const Mat3 ma = rt0_mass_matrix(mesh, t, coeff, time);

        // local = G' * M_a * G  (4x4, symmetric)
        std::array<std::array<double, 4>, 3> mg{};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 4; ++j) {
                for (int k = 0; k < 3; ++k) mg[i][j] += ma[i][k] * g[k][j];
            }
        }
        std::array<std::array<double, 4>, 4> local{};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                for (int k = 0; k < 3; ++k) local[i][j] += g[k][i] * mg[k][j];
            }
        }

        const auto& te = mesh.tri_edges[t];
        const std::array<int, 4> gdof{dofs.tri_dof(t), dofs.edge_dof(te[0]),
                                      dofs.edge_dof(te[1]), dofs.edge_dof(te[2])};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) builder.add(gdof[i], gdof[j], local[i][j]);
        }
    }

    if (robin) {
        for (int e = 0; e < mesh.num_edges(); ++e) {
            if (mesh.boundary_tag[e] == EdgeKind::Robin) {
                builder.add(dofs.edge_dof(e), dofs.edge_dof(e), edge_length(mesh, e));
            }
        }
    }
    return builder.compress();
}

/// Mass pairing (w0, v0): diagonal |T| on interior DOFs, zero on edge DOFs.
inline std::vector<double> mass_diagonal(const Mesh& mesh) {
    const DofMap dofs = make_dof_map(mesh);
    std::vector<double> d(dofs.size(), 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        d[dofs.tri_dof(t)] = element_geometry(mesh, t).area;
    }
    return d;
}

inline SparseMatrix assemble_mass(const Mesh& mesh) {
    const DofMap dofs = make_dof_map(mesh);
    const std::vector<double> d = mass_diagonal(mesh);
    CooBuilder builder(dofs.size(), dofs.size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        builder.add(dofs.tri_dof(t), dofs.tri_dof(t), d[dofs.tri_dof(t)]);
    }
    return builder.compress();
}

/// Load pairing (f, v0): per interior DOF the cell integral of f at the given
/// time; edge entries stay zero.
template <typename F>
std::vector<double> assemble_load(const Mesh& mesh, F&& f, double time) {
    const DofMap dofs = make_dof_map(mesh);
    std::vector<double> v(dofs.size(), 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        v[dofs.tri_dof(t)] = integrate_cell(f, mesh, t, time);
    }
    return v;
}

/// Robin data pairing <r, v_b> on Robin edges.
template <typename F>
std::vector<double> assemble_robin_load(const Mesh& mesh, F&& r, double time) {
    const DofMap dofs = make_dof_map(mesh);
    std::vector<double> v(dofs.size(), 0.0);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.boundary_tag[e] == EdgeKind::Robin) {
            v[dofs.edge_dof(e)] = integrate_edge(r, mesh, e, time);
        }
    }
    return v;
}

/// Edge means of the Dirichlet data, stored per global DOF (zero elsewhere).
template <typename G>
std::vector<double> dirichlet_values(const Mesh& mesh, G&& g, double time) {
    const DofMap dofs = make_dof_map(mesh);
    std::vector<double> v(dofs.size(), 0.0);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.boundary_tag[e] == EdgeKind::Dirichlet) {
            v[dofs.edge_dof(e)] = integrate_edge(g, mesh, e, time) / edge_length(mesh, e);
        }
    }
    return v;
}

/// Full symmetric operator with right-hand side over the complete DOF set,
/// before constraint elimination.
struct SparseSpdSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
    DofMap dofs;
};

/// Index bookkeeping of the symmetric Dirichlet elimination. A_ff is the
/// operator restricted to free DOFs; A_fc carries the coupling of free DOFs
/// to constrained ones (columns indexed by position in constrained_dofs).
struct ConstraintSplit {
    SparseMatrix a_ff;
    SparseMatrix a_fc;
    std::vector<int> free_dofs;
    std::vector<int> free_index;
    std::vector<int> constrained_dofs;
    std::vector<int> constrained_index;
};

inline ConstraintSplit split_constraints(const SparseMatrix& a, const DofMap& dofs) {
    assert(a.rows == dofs.size() && a.cols == dofs.size());
    ConstraintSplit s;
    s.free_index.assign(dofs.size(), -1);
    s.constrained_index.assign(dofs.size(), -1);
    for (int d = 0; d < dofs.size(); ++d) {
        if (dofs.constrained[d]) {
            s.constrained_index[d] = static_cast<int>(s.constrained_dofs.size());
            s.constrained_dofs.push_back(d);
        } else {
            s.free_index[d] = static_cast<int>(s.free_dofs.size());
            s.free_dofs.push_back(d);
        }
    }

    const int nf = static_cast<int>(s.free_dofs.size());
    const int nc = static_cast<int>(s.constrained_dofs.size());
    CooBuilder ff(nf, nf);
    CooBuilder fc(nf, nc);
    for (int i = 0; i < a.rows; ++i) {
        const int fi = s.free_index[i];
        if (fi < 0) continue;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            const int j = a.col[k];
            if (s.free_index[j] >= 0) {
                ff.add(fi, s.free_index[j], a.val[k]);
            } else {
                fc.add(fi, s.constrained_index[j], a.val[k]);
            }
        }
    }
    s.a_ff = ff.compress();
    s.a_fc = fc.compress();
    return s;
}

/// System after symmetric Dirichlet elimination: constrained DOFs carry the
/// edge mean of the boundary data and their coupling moves to the right side.
struct ConstrainedSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
    std::vector<int> free_dofs;
    std::vector<int> free_index;
    std::vector<double> boundary_values;
};

namespace detail {
inline std::vector<double> reduce_rhs(const ConstraintSplit& split,
                                      const std::vector<double>& full_rhs,
                                      const std::vector<double>& values) {
    std::vector<double> xc(split.constrained_dofs.size());
    for (std::size_t c = 0; c < split.constrained_dofs.size(); ++c) {
        xc[c] = values[split.constrained_dofs[c]];
    }
    std::vector<double> coupling = split.a_fc.multiply(xc);
    std::vector<double> rhs(split.free_dofs.size());
    for (std::size_t i = 0; i < split.free_dofs.size(); ++i) {
        rhs[i] = full_rhs[split.free_dofs[i]] - coupling[i];
    }
    return rhs;
}
}  // namespace detail

template <typename G>
ConstrainedSystem apply_dirichlet(const SparseSpdSystem& system, const Mesh& mesh, G&& g,
                                  double time) {
    const ConstraintSplit split = split_constraints(system.matrix, system.dofs);
    ConstrainedSystem out;
    out.boundary_values = dirichlet_values(mesh, g, time);
    out.rhs = detail::reduce_rhs(split, system.rhs, out.boundary_values);
    out.matrix = split.a_ff;
    out.free_dofs = split.free_dofs;
    out.free_index = split.free_index;
    return out;
}

/// Reassembles a WG function from the reduced solution vector and the
/// constrained boundary values.
inline WgFunction compose_solution(const Mesh& mesh, const DofMap& dofs,
                                   const std::vector<int>& free_dofs,
                                   const std::vector<double>& x_free,
                                   const std::vector<double>& boundary_values) {
    std::vector<double> full = boundary_values;
    full.resize(dofs.size(), 0.0);
    for (std::size_t i = 0; i < free_dofs.size(); ++i) full[free_dofs[i]] = x_free[i];

    WgFunction u = WgFunction::zeros(mesh);
    for (int t = 0; t < dofs.n_tri; ++t) u.interior[t] = full[dofs.tri_dof(t)];
    for (int e = 0; e < dofs.n_edge; ++e) u.edge[e] = full[dofs.edge_dof(e)];
    return u;
}

}  // namespace wg
