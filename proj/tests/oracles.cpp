#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coverplan::oracle {

namespace {

// Edge-inclusive barycentric test, mirroring the published tolerance.
std::optional<double> moller_trumbore(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                      const Vec3& b, const Vec3& c) {
    constexpr double kBaryEps = 1e-9;
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 pvec = cross(dir, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < 1e-14) return std::nullopt;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - a;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < -kBaryEps || u > 1.0 + kBaryEps) return std::nullopt;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(dir, qvec) * inv_det;
    if (v < -kBaryEps || u + v > 1.0 + kBaryEps) return std::nullopt;
    const double t = dot(e2, qvec) * inv_det;
    if (t < 0.0) return std::nullopt;
    return t;
}

}  // namespace

std::optional<RayHit> ray_scan(const TriangleMesh& mesh, const Vec3& origin, const Vec3& dir,
                               double max_distance) {
    std::optional<RayHit> best;
    for (int tri = 0; tri < static_cast<int>(mesh.triangle_count()); ++tri) {
        const auto t = moller_trumbore(origin, dir, mesh.triangle_vertex(tri, 0),
                                       mesh.triangle_vertex(tri, 1), mesh.triangle_vertex(tri, 2));
        if (!t || *t > max_distance) continue;
        if (!best || *t < best->distance) best = RayHit{tri, *t, origin + dir * *t};
    }
    return best;
}

double segment_scan(const TriangleMesh& mesh, const Vec3& a, const Vec3& b) {
    double best = std::numeric_limits<double>::infinity();
    for (int tri = 0; tri < static_cast<int>(mesh.triangle_count()); ++tri) {
        best = std::min(best, segment_triangle_distance(a, b, mesh.triangle_vertex(tri, 0),
                                                        mesh.triangle_vertex(tri, 1),
                                                        mesh.triangle_vertex(tri, 2)));
    }
    return best;
}

double point_scan(const TriangleMesh& mesh, const Vec3& p) {
    double best = std::numeric_limits<double>::infinity();
    for (int tri = 0; tri < static_cast<int>(mesh.triangle_count()); ++tri) {
        best = std::min(best, point_triangle_distance(p, mesh.triangle_vertex(tri, 0),
                                                      mesh.triangle_vertex(tri, 1),
                                                      mesh.triangle_vertex(tri, 2)));
    }
    return best;
}

std::vector<int> snapshot_scan(const TriangleMesh& mesh, const Vec3& position,
                               const Vec3& heading, const std::vector<CameraModel>& cameras) {
    std::vector<int> out;
    for (int tri = 0; tri < static_cast<int>(mesh.triangle_count()); ++tri) {
        if (mesh.degenerate(tri)) continue;
        const Vec3 c = mesh.centroid(tri);
        const Vec3 rel = c - position;

        bool inside = false;
        for (const auto& cam : cameras) {
            Vec3 axis, up;
            if (cam.mount == CameraMount::Forward) {
                axis = heading;
                up = {0, 0, 1};
            } else {
                axis = {0, 0, -1};
                up = heading;
            }
            const Vec3 right = cross(axis, up);
            const double depth = dot(rel, axis);
            if (depth < cam.near_plane || depth > cam.far_plane) continue;
            const double ang_h = std::atan2(std::abs(dot(rel, right)), depth) * 180.0 /
                                 std::numbers::pi;
            const double ang_v = std::atan2(std::abs(dot(rel, up)), depth) * 180.0 /
                                 std::numbers::pi;
            if (ang_h <= cam.horizontal_fov_deg / 2.0 && ang_v <= cam.vertical_fov_deg / 2.0) {
                inside = true;
                break;
            }
        }
        if (!inside) continue;
        if (dot(mesh.normal(tri), position - c) <= 0.0) continue;

        const double dist = norm(rel);
        const auto hit = ray_scan(mesh, position, rel / dist, dist + 1e-6);
        if (hit && hit->triangle_id == tri) out.push_back(tri);
    }
    return out;
}

std::vector<int> path_coverage_scan(const TriangleMesh& mesh, const std::vector<Vec3>& positions,
                                    const std::vector<CameraModel>& cameras,
                                    double snapshot_spacing,
                                    const std::vector<int>& colliding_edges) {
    const Vec3 center = mesh.bbox().center();
    std::vector<int> covered;
    for (std::size_t e = 0; e + 1 < positions.size(); ++e) {
        if (std::find(colliding_edges.begin(), colliding_edges.end(), static_cast<int>(e)) !=
            colliding_edges.end())
            continue;
        const Vec3& a = positions[e];
        const Vec3& b = positions[e + 1];
        const Vec3 heading = edge_heading(a, b, center);
        const double len = distance(a, b);
        const int samples = len > 0.0
                                ? std::max(2, static_cast<int>(std::ceil(len / snapshot_spacing)) + 1)
                                : 1;
        for (int i = 0; i < samples; ++i) {
            const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
            auto ids = snapshot_scan(mesh, a + (b - a) * t, heading, cameras);
            covered.insert(covered.end(), ids.begin(), ids.end());
        }
    }
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    return covered;
}

std::vector<FrontPoint> pareto_pairwise(const std::vector<FrontPoint>& points) {
    std::vector<FrontPoint> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < points.size() && keep; ++j) {
            if (i == j) continue;
            const bool weak = weakly_dominates(points[j], points[i]);
            const bool equal = points[j].coverage_score == points[i].coverage_score &&
                               points[j].energy == points[i].energy;
            if (weak && !equal) keep = false;
            if (equal && j < i) keep = false;  // one representative per duplicate
        }
        if (keep) out.push_back(points[i]);
    }
    std::sort(out.begin(), out.end(), [](const FrontPoint& a, const FrontPoint& b) {
        return a.coverage_score < b.coverage_score;
    });
    return out;
}

double hypervolume_mc(const std::vector<FrontPoint>& points, const ReferencePoint& ref,
                      int samples, Rng& rng) {
    double min_cov = ref.coverage_ref, min_energy = ref.energy_ref;
    for (const auto& p : points) {
        min_cov = std::min(min_cov, p.coverage_score);
        min_energy = std::min(min_energy, p.energy);
    }
    const double area_box = (ref.coverage_ref - min_cov) * (ref.energy_ref - min_energy);
    if (area_box <= 0.0) return 0.0;

    int dominated = 0;
    for (int s = 0; s < samples; ++s) {
        const double cx = rng.uniform(min_cov, ref.coverage_ref);
        const double cy = rng.uniform(min_energy, ref.energy_ref);
        for (const auto& p : points) {
            if (p.coverage_score <= cx && p.energy <= cy) {
                ++dominated;
                break;
            }
        }
    }
    return area_box * dominated / samples;
}

std::vector<int> invisible_from(const TriangleMesh& mesh, const std::vector<Vec3>& viewpoints) {
    std::vector<char> seen(mesh.triangle_count(), 0);
    for (const Vec3& vp : viewpoints) {
        for (int tri = 0; tri < static_cast<int>(mesh.triangle_count()); ++tri) {
            if (seen[tri] || mesh.degenerate(tri)) continue;
            const Vec3 c = mesh.centroid(tri);
            if (dot(mesh.normal(tri), vp - c) <= 0.0) continue;
            const Vec3 rel = c - vp;
            const double dist = norm(rel);
            const auto hit = ray_scan(mesh, vp, rel / dist, dist + 1e-6);
            if (hit && hit->triangle_id == tri) seen[tri] = 1;
        }
    }
    std::vector<int> hidden;
    for (int tri = 0; tri < static_cast<int>(mesh.triangle_count()); ++tri)
        if (!seen[tri] && !mesh.degenerate(tri)) hidden.push_back(tri);
    return hidden;
}

}  // namespace coverplan::oracle
