#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg/problem.hpp"

namespace wg {

inline const std::vector<std::string>& registry_ids() {
    static const std::vector<std::string> ids{
        "example1-dirichlet",
        "example1-robin",
        "example2-tensor",
        "constant-sanity",
    };
    return ids;
}

namespace detail {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Time factor sin(2 pi (t^2 + 1) + pi/2) = cos(2 pi t^2) and its derivative.
inline double time_factor(double t) { return std::cos(kTwoPi * t * t); }
inline double time_factor_dt(double t) { return -kTwoPi * 2.0 * t * std::sin(kTwoPi * t * t); }

/// Full-tensor coefficient [[x^2+y^2+1, xy], [xy, x^2+y^2+1]].
inline Mat2 tensor_coefficient(double x, double y) {
    return {x * x + y * y + 1.0, x * y, x * x + y * y + 1.0};
}

inline ProblemDefinition make_example1_dirichlet() {
    ProblemDefinition p;
    p.name = "example1-dirichlet";
    p.boundary = BoundaryRule::AllDirichlet;
    p.a = [](double, double, double) { return identity_mat2(); };

    // u = S(t) cos(2 pi x) cos(2 pi y); with a = I, -lap(u) = 8 pi^2 u.
    auto u = [](double x, double y, double t) {
        return time_factor(t) * std::cos(kTwoPi * x) * std::cos(kTwoPi * y);
    };
    p.exact = u;
    p.exact_dt = [](double x, double y, double t) {
        return time_factor_dt(t) * std::cos(kTwoPi * x) * std::cos(kTwoPi * y);
    };
    p.exact_grad = [](double x, double y, double t) {
        const double s = time_factor(t);
        return Vec2{-kTwoPi * s * std::sin(kTwoPi * x) * std::cos(kTwoPi * y),
                    -kTwoPi * s * std::cos(kTwoPi * x) * std::sin(kTwoPi * y)};
    };
    p.f = [](double x, double y, double t) {
        return (time_factor_dt(t) + 8.0 * kPi * kPi * time_factor(t)) * std::cos(kTwoPi * x) *
               std::cos(kTwoPi * y);
    };
    p.g = u;
    p.psi = [u](double x, double y) { return u(x, y, 0.0); };
    return p;
}

inline ProblemDefinition make_example1_robin() {
    ProblemDefinition p;
    p.name = "example1-robin";
    p.boundary = BoundaryRule::RobinOnRight;
    p.a = [](double, double, double) { return identity_mat2(); };

    // u = S(t) sin(pi y) e^{-x}; lap(u) = (1 - pi^2) u, and on x = 1 the
    // outward flux is u_x = -u, so a grad(u).n + u vanishes identically.
    auto u = [](double x, double y, double t) {
        return time_factor(t) * std::sin(kPi * y) * std::exp(-x);
    };
    p.exact = u;
    p.exact_dt = [](double x, double y, double t) {
        return time_factor_dt(t) * std::sin(kPi * y) * std::exp(-x);
    };
    p.exact_grad = [u](double x, double y, double t) {
        return Vec2{-u(x, y, t), time_factor(t) * kPi * std::cos(kPi * y) * std::exp(-x)};
    };
    p.f = [u](double x, double y, double t) {
        return time_factor_dt(t) * std::sin(kPi * y) * std::exp(-x) -
               (1.0 - kPi * kPi) * u(x, y, t);
    };
    p.g = u;
    p.robin = [](double, double, double) { return 0.0; };
    p.psi = [u](double x, double y) { return u(x, y, 0.0); };
    return p;
}

inline ProblemDefinition make_example2_tensor() {
    ProblemDefinition p;
    p.name = "example2-tensor";
    p.boundary = BoundaryRule::AllDirichlet;
    p.a = [](double x, double y, double) { return tensor_coefficient(x, y); };

    auto u = [](double x, double y, double t) {
        return time_factor(t) * std::cos(kTwoPi * x) * std::cos(kTwoPi * y);
    };
    p.exact = u;
    p.exact_dt = [](double x, double y, double t) {
        return time_factor_dt(t) * std::cos(kTwoPi * x) * std::cos(kTwoPi * y);
    };
    p.exact_grad = [](double x, double y, double t) {
        const double s = time_factor(t);
        return Vec2{-kTwoPi * s * std::sin(kTwoPi * x) * std::cos(kTwoPi * y),
                    -kTwoPi * s * std::cos(kTwoPi * x) * std::sin(kTwoPi * y)};
    };
    // div(a grad u) = (x^2+y^2+1)(u_xx + u_yy) + 3x u_x + 3y u_y + 2xy u_xy.
    p.f = [](double x, double y, double t) {
        const double s = time_factor(t);
        const double cx = std::cos(kTwoPi * x);
        const double cy = std::cos(kTwoPi * y);
        const double dcx = -kTwoPi * std::sin(kTwoPi * x);
        const double dcy = -kTwoPi * std::sin(kTwoPi * y);
        const double u_x = s * dcx * cy;
        const double u_y = s * cx * dcy;
        const double u_xy = s * dcx * dcy;
        const double lap = -2.0 * kTwoPi * kTwoPi * s * cx * cy;
        const double div_a_grad =
            (x * x + y * y + 1.0) * lap + 3.0 * x * u_x + 3.0 * y * u_y + 2.0 * x * y * u_xy;
        return time_factor_dt(t) * cx * cy - div_a_grad;
    };
    p.g = u;
    p.psi = [u](double x, double y) { return u(x, y, 0.0); };
    return p;
}

inline ProblemDefinition make_constant_sanity() {
    ProblemDefinition p;
    p.name = "constant-sanity";
    p.boundary = BoundaryRule::AllDirichlet;
    p.a = [](double x, double y, double) { return tensor_coefficient(x, y); };
    p.exact = [](double, double, double) { return 1.0; };
    p.exact_dt = [](double, double, double) { return 0.0; };
    p.exact_grad = [](double, double, double) { return Vec2{0.0, 0.0}; };
    p.f = [](double, double, double) { return 0.0; };
    p.g = [](double, double, double) { return 1.0; };
    p.psi = [](double, double) { return 1.0; };
    return p;
}

}  // namespace detail

/// Looks up one of the built-in manufactured problems by id.
inline ProblemDefinition registry_lookup(const std::string& id) {
    if (id == "example1-dirichlet") return detail::make_example1_dirichlet();
    if (id == "example1-robin") return detail::make_example1_robin();
    if (id == "example2-tensor") return detail::make_example2_tensor();
    if (id == "constant-sanity") return detail::make_constant_sanity();

    std::string msg = "unknown problem id '" + id + "'; valid ids:";
    for (const auto& known : registry_ids()) msg += " " + known;
    throw std::invalid_argument(msg);
}

}  // namespace wg
