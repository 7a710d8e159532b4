#ifndef RIDGELINE_VEC2_HPP
#define RIDGELINE_VEC2_HPP

#include <cmath>

namespace ridgeline {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
    constexpr double norm_sq() const { return x * x + y * y; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr Vec2 operator*(Vec2 v, double s) { return s * v; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// 2x2 real matrix, row-major.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    constexpr Vec2 col1() const { return {a11, a21}; }
    constexpr Vec2 col2() const { return {a12, a22}; }

    constexpr Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }

    constexpr Vec2 operator*(Vec2 v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    constexpr Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
};

inline Mat2 rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, s, c};
}

} // namespace ridgeline

#endif
