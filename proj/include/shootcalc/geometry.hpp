#pragma once

#include <cmath>

namespace shootcalc {

/// 2D point/vector in meters, double precision.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }

    constexpr bool operator==(const Vec2& r) const = default;

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }

    /// z-component of the 3D cross product; sign gives orientation.
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }

    double norm() const { return std::hypot(x, y); }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    /// Reflection across the field's long axis (y -> -y).
    constexpr Vec2 mirrored() const { return {x, -y}; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

} // namespace shootcalc
