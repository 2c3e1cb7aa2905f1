#include "coverplan/geom.hpp"

namespace coverplan {

// Closest distance between two segments (Ericson, Real-Time Collision
// Detection, 5.1.9).
double segment_segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
    const Vec3 d1 = q1 - p1;
    const Vec3 d2 = q2 - p2;
    const Vec3 r = p1 - p2;
    const double a = norm_sq(d1);
    const double e = norm_sq(d2);
    const double f = dot(d2, r);

    double s = 0.0, t = 0.0;
    if (a <= 0.0 && e <= 0.0) {
        return norm(r);
    }
    if (a <= 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = dot(d1, r);
        if (e <= 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            if (denom > 0.0) {
                s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            }
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return distance(p1 + d1 * s, p2 + d2 * t);
}

// Closest point on triangle (Ericson 5.1.5), returned as a distance.
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;

    const double d1 = dot(ab, ap);
    const double d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return distance(p, a);

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp);
    const double d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return distance(p, b);

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return distance(p, a + ab * v);
    }

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp);
    const double d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return distance(p, c);

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return distance(p, a + ac * w);
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return distance(p, b + (c - b) * w);
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom;
    const double w = vc * denom;
    return distance(p, a + ab * v + ac * w);
}

namespace {

// Does segment [s0,s1] cross the triangle? Degenerate triangles report false
// and are handled by the edge/vertex distance terms.
bool segment_intersects_triangle(const Vec3& s0, const Vec3& s1,
                                 const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 dir = s1 - s0;
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 pvec = cross(dir, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < 1e-14) return false;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = s0 - a;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return false;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(dir, qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return false;
    const double t = dot(e2, qvec) * inv_det;
    return t >= 0.0 && t <= 1.0;
}

}  // namespace

double segment_triangle_distance(const Vec3& s0, const Vec3& s1,
                                 const Vec3& a, const Vec3& b, const Vec3& c) {
    if (segment_intersects_triangle(s0, s1, a, b, c)) return 0.0;
    double d = segment_segment_distance(s0, s1, a, b);
    d = std::min(d, segment_segment_distance(s0, s1, b, c));
    d = std::min(d, segment_segment_distance(s0, s1, c, a));
    d = std::min(d, point_triangle_distance(s0, a, b, c));
    d = std::min(d, point_triangle_distance(s1, a, b, c));
    return d;
}

}  // namespace coverplan
