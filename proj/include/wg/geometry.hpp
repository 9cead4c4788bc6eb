#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace wg {

/// 2D point / vector.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// z-component of the cross product of two plane vectors.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Symmetric 2x2 matrix (diffusion coefficient sample).
struct Mat2 {
    double xx = 1.0;
    double xy = 0.0;
    double yy = 1.0;
};

inline Vec2 apply(const Mat2& m, Vec2 v) {
    return {m.xx * v.x + m.xy * v.y, m.xy * v.x + m.yy * v.y};
}

/// SPD test via leading principal minors.
inline bool is_spd(const Mat2& m) {
    return m.xx > 0.0 && m.xx * m.yy - m.xy * m.xy > 0.0;
}

inline Mat2 identity_mat2() { return {1.0, 0.0, 1.0}; }

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Linear map from local WG DOFs [v0, vb1, vb2, vb3] to 3 RT0 coefficients.
using Mat3x4 = std::array<std::array<double, 4>, 3>;

/// LU factorization with partial pivoting of a 3x3 matrix.
/// The matrices factored here are RT0 mass matrices of non-degenerate
/// triangles, which are well-conditioned; singularity is an internal error.
class Lu3 {
  public:
    explicit Lu3(Mat3 m) : lu_(m), perm_{0, 1, 2} {
        for (int k = 0; k < 3; ++k) {
            int p = k;
            for (int i = k + 1; i < 3; ++i) {
                if (std::abs(lu_[i][k]) > std::abs(lu_[p][k])) p = i;
            }
            if (std::abs(lu_[p][k]) == 0.0) {
                throw std::runtime_error("Lu3: singular 3x3 matrix");
            }
            if (p != k) {
                std::swap(lu_[p], lu_[k]);
                std::swap(perm_[p], perm_[k]);
            }
            for (int i = k + 1; i < 3; ++i) {
                lu_[i][k] /= lu_[k][k];
                for (int j = k + 1; j < 3; ++j) {
                    lu_[i][j] -= lu_[i][k] * lu_[k][j];
                }
            }
        }
    }

    Vec3 solve(const Vec3& b) const {
        Vec3 y{b[perm_[0]], b[perm_[1]], b[perm_[2]]};
        y[1] -= lu_[1][0] * y[0];
        y[2] -= lu_[2][0] * y[0] + lu_[2][1] * y[1];
        Vec3 x{};
        x[2] = y[2] / lu_[2][2];
        x[1] = (y[1] - lu_[1][2] * x[2]) / lu_[1][1];
        x[0] = (y[0] - lu_[0][1] * x[1] - lu_[0][2] * x[2]) / lu_[0][0];
        return x;
    }

  private:
    Mat3 lu_;
    std::array<int, 3> perm_;
};

/// Solves m*x = b for a single right-hand side.
inline Vec3 solve3(const Mat3& m, const Vec3& b) { return Lu3(m).solve(b); }

inline Vec3 multiply(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i) {
        r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    return r;
}

/// Quadratic form v' * m * v.
inline double quadratic_form(const Mat3& m, const Vec3& v) {
    const Vec3 mv = multiply(m, v);
    return mv[0] * v[0] + mv[1] * v[1] + mv[2] * v[2];
}

}  // namespace wg
