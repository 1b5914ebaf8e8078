#pragma once

#include <array>
#include <cmath>

namespace impscat {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }

    Vec3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Symmetric 2x2 matrix (Hessians of height functions).
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a12; }

    // Solve A v = rhs. Caller guarantees det != 0.
    Vec2 solve(const Vec2& rhs) const {
        double d = det();
        return {(a22 * rhs.x - a12 * rhs.y) / d, (a11 * rhs.y - a12 * rhs.x) / d};
    }
};

// Angle between unit vectors, stable near 0 and pi.
inline double angle_between(const Vec3& u, const Vec3& v) {
    double c = u.dot(v);
    Vec3 w{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
    return std::atan2(w.norm(), c);
}

}  // namespace impscat
