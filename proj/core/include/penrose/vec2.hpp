#pragma once

#include <cmath>

namespace penrose {

/// Plane vector. Value type used for grid directions, tile centers and steps.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    /// Counterclockwise quarter turn.
    constexpr Vec2 perp() const { return {-y, x}; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Symmetric 2x2 matrix (covariance / diffusion estimates).
struct Mat2Sym {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    constexpr Mat2Sym() = default;
    constexpr Mat2Sym(double xx_, double xy_, double yy_) : xx(xx_), xy(xy_), yy(yy_) {}

    constexpr Mat2Sym operator+(const Mat2Sym& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
    constexpr Mat2Sym operator-(const Mat2Sym& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
    constexpr Mat2Sym operator*(double s) const { return {xx * s, xy * s, yy * s}; }
    Mat2Sym& operator+=(const Mat2Sym& o) { xx += o.xx; xy += o.xy; yy += o.yy; return *this; }

    constexpr double trace() const { return xx + yy; }
    constexpr double det() const { return xx * yy - xy * xy; }

    /// Eigenvalues, ascending.
    struct Eigen { double lo, hi; };
    Eigen eigenvalues() const {
        const double mean = 0.5 * (xx + yy);
        const double d = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
        return {mean - d, mean + d};
    }

    static constexpr Mat2Sym outer(Vec2 v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }
};

}  // namespace penrose
