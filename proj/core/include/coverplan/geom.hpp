// Small 3D math types shared across the toolkit. Plain structs, double
// precision, no external linear-algebra dependency.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace coverplan {

struct Vec3 {
    double x{0.0}, y{0.0}, z{0.0};

    Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }
inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return n > 0.0 ? v / n : Vec3{0, 0, 0};
}
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

// Axis-aligned bounding box.
struct Box3 {
    Vec3 min{std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
    Vec3 max{-std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};

    void expand(const Vec3& p) {
        min.x = std::min(min.x, p.x); min.y = std::min(min.y, p.y); min.z = std::min(min.z, p.z);
        max.x = std::max(max.x, p.x); max.y = std::max(max.y, p.y); max.z = std::max(max.z, p.z);
    }
    void expand(const Box3& b) { expand(b.min); expand(b.max); }

    bool valid() const { return min.x <= max.x && min.y <= max.y && min.z <= max.z; }
    Vec3 center() const { return (min + max) * 0.5; }
    Vec3 extent() const { return max - min; }
    double longest_side() const {
        const Vec3 e = extent();
        return std::max({e.x, e.y, e.z});
    }
    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }
    // Squared distance from a point to the box (0 inside).
    double distance_sq(const Vec3& p) const {
        double d = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double lo = min[i] - p[i];
            const double hi = p[i] - max[i];
            const double g = std::max({lo, hi, 0.0});
            d += g * g;
        }
        return d;
    }
    // Lower bound on the distance between this box and another box.
    double gap_sq(const Box3& o) const {
        double d = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double g = std::max({min[i] - o.max[i], o.min[i] - max[i], 0.0});
            d += g * g;
        }
        return d;
    }
};

// Distance between point p and segment [a,b].
inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len_sq = norm_sq(ab);
    if (len_sq <= 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
    return distance(p, a + ab * t);
}

// Closest distance between segments [p1,q1] and [p2,q2].
double segment_segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2);

// Distance from point p to triangle (a,b,c).
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Distance between segment [s0,s1] and triangle (a,b,c); 0 when they intersect.
double segment_triangle_distance(const Vec3& s0, const Vec3& s1,
                                 const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace coverplan
