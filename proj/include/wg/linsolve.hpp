#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg/sparse.hpp"

namespace wg {

struct SolveReport {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

/// Thrown by callers of solve_spd when a converged solution is required.
class SolverFailure : public std::runtime_error {
  public:
    SolverFailure(const std::string& what, SolveReport rep)
        : std::runtime_error(what), report(rep) {}
    SolveReport report;
};

namespace detail {
inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }
}  // namespace detail

/// Conjugate gradients with Jacobi preconditioning.
///
/// Success means ||b - A x|| <= tol * ||b|| measured on the true residual,
/// which is recomputed before declaring convergence (the recursive residual
/// can drift). Non-convergence is reported, not thrown; negative curvature
/// (a non-SPD operator) throws.
inline SolveResult solve_spd(const SparseMatrix& a, const std::vector<double>& b,
                             double tol = 1e-10, int max_iter = -1,
                             const std::vector<double>* x0 = nullptr) {
    const int n = a.rows;
    if (a.cols != n || static_cast<int>(b.size()) != n) {
        throw std::invalid_argument("solve_spd: dimension mismatch");
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        throw std::invalid_argument("solve_spd: tol must lie in (0, 1)");
    }
    for (double v : b) {
        if (!std::isfinite(v)) throw std::domain_error("solve_spd: non-finite right-hand side");
    }
    if (max_iter < 0) max_iter = 20 * n;

    SolveResult out;
    const double bnorm = detail::norm2(b);
    if (bnorm == 0.0) {
        out.x.assign(n, 0.0);
        out.report = {0, 0.0, true};
        return out;
    }

    std::vector<double> inv_diag(n);
    {
        const std::vector<double> d = a.diagonal();
        for (int i = 0; i < n; ++i) {
            if (!(d[i] > 0.0)) {
                throw std::domain_error("solve_spd: non-positive diagonal, matrix not SPD");
            }
            inv_diag[i] = 1.0 / d[i];
        }
    }

    std::vector<double> x = x0 ? *x0 : std::vector<double>(n, 0.0);
    std::vector<double> r(n), z(n), p(n), ap(n);
    a.multiply(x, ap);
    for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];

    auto precondition = [&] {
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    };
    precondition();
    p = z;
    double rz = detail::dot(r, z);

    int iter = 0;
    double rel = detail::norm2(r) / bnorm;
    while (rel > tol && iter < max_iter) {
        a.multiply(p, ap);
        const double curvature = detail::dot(p, ap);
        if (!(curvature > 0.0)) {
            // Distinguish an indefinite operator from stagnation at roundoff:
            // measure the curvature against the diagonal quadratic form.
            double scale = 0.0;
            for (int i = 0; i < n; ++i) scale += p[i] * p[i] / inv_diag[i];
            if (curvature < -1e-12 * scale) {
                throw std::domain_error("solve_spd: negative curvature, matrix not SPD");
            }
            break;
        }
        const double alpha = rz / curvature;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        ++iter;

        rel = detail::norm2(r) / bnorm;
        if (rel <= tol || iter % 50 == 0) {
            // Refresh the true residual; keep iterating if the recursion drifted.
            a.multiply(x, ap);
            for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
            rel = detail::norm2(r) / bnorm;
            if (rel <= tol) break;
            precondition();
            p = z;
            rz = detail::dot(r, z);
            continue;
        }

        precondition();
        const double rz_next = detail::dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    out.x = std::move(x);
    out.report = {iter, rel, rel <= tol};
    return out;
}

}  // namespace wg
