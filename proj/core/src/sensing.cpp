#include "coverplan/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coverplan/errors.hpp"

namespace coverplan {

std::vector<CameraModel> CameraModel::default_pair() {
    CameraModel forward;
    forward.mount = CameraMount::Forward;
    CameraModel down = forward;
    down.mount = CameraMount::Down;
    return {forward, down};
}

Vec3 edge_heading(const Vec3& start, const Vec3& end, const Vec3& target_center,
                  bool* degenerate) {
    if (degenerate) *degenerate = false;
    const Vec3 mid = (start + end) * 0.5;
    const Vec3 d = end - start;
    const Vec3 dxy{d.x, d.y, 0.0};
    if (norm(dxy) > 1e-9) {
        Vec3 perp = normalized(Vec3{-d.y, d.x, 0.0});
        Vec3 to_center = target_center - mid;
        to_center.z = 0.0;
        if (dot(perp, to_center) < 0.0) perp = -perp;
        return perp;
    }
    Vec3 toward = target_center - mid;
    toward.z = 0.0;
    if (norm(toward) <= 1e-9) {
        if (degenerate) *degenerate = true;
        return {1.0, 0.0, 0.0};
    }
    return normalized(toward);
}

namespace {

struct CameraFrame {
    Vec3 axis;
    Vec3 right;
    Vec3 up;
    double tan_half_h;
    double tan_half_v;
    double near_plane;
    double far_plane;
};

CameraFrame make_frame(const CameraModel& cam, const Vec3& heading) {
    CameraFrame f;
    if (cam.mount == CameraMount::Forward) {
        f.axis = heading;
        f.up = {0.0, 0.0, 1.0};
    } else {
        // Down camera: optical axis straight down, rolled so its image "up"
        // matches the robot heading.
        f.axis = {0.0, 0.0, -1.0};
        f.up = heading;
    }
    f.right = cross(f.axis, f.up);
    f.tan_half_h = std::tan(cam.horizontal_fov_deg * std::numbers::pi / 360.0);
    f.tan_half_v = std::tan(cam.vertical_fov_deg * std::numbers::pi / 360.0);
    f.near_plane = cam.near_plane;
    f.far_plane = cam.far_plane;
    return f;
}

bool in_frustum(const CameraFrame& f, const Vec3& rel) {
    const double depth = dot(rel, f.axis);
    if (depth < f.near_plane || depth > f.far_plane) return false;
    if (std::abs(dot(rel, f.right)) > depth * f.tan_half_h) return false;
    if (std::abs(dot(rel, f.up)) > depth * f.tan_half_v) return false;
    return true;
}

}  // namespace

std::vector<int> snapshot_visible(const TriangleMesh& mesh, const Vec3& position,
                                  const Vec3& heading, const std::vector<CameraModel>& cameras) {
    std::vector<CameraFrame> frames;
    frames.reserve(cameras.size());
    double max_far = 0.0;
    for (const auto& cam : cameras) {
        frames.push_back(make_frame(cam, heading));
        max_far = std::max(max_far, cam.far_plane);
    }

    std::vector<int> out;
    const int n = static_cast<int>(mesh.triangle_count());
    for (int tri = 0; tri < n; ++tri) {
        if (mesh.degenerate(tri)) continue;
        const Vec3 c = mesh.centroid(tri);
        const Vec3 rel = c - position;
        const double dist = norm(rel);
        if (dist > max_far * 1.7321) continue;  // outside every frustum's corner radius

        bool candidate = false;
        for (const auto& f : frames) {
            if (in_frustum(f, rel)) {
                candidate = true;
                break;
            }
        }
        if (!candidate) continue;
        // A camera cannot inspect a surface's back side.
        if (dot(mesh.normal(tri), position - c) <= 0.0) continue;

        const auto hit = mesh.ray_intersect(position, rel / dist, dist + 1e-6);
        if (hit && hit->triangle_id == tri) out.push_back(tri);
    }
    return out;
}

std::vector<int> edge_coverage(const TriangleMesh& mesh, const EdgePose& edge,
                               const std::vector<CameraModel>& cameras, double snapshot_spacing) {
    const double len = distance(edge.start, edge.end);
    int samples = 1;
    if (len > 0.0)
        samples = std::max(2, static_cast<int>(std::ceil(len / snapshot_spacing)) + 1);

    std::vector<int> covered;
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        const Vec3 p = edge.start + (edge.end - edge.start) * t;
        auto ids = snapshot_visible(mesh, p, edge.heading, cameras);
        covered.insert(covered.end(), ids.begin(), ids.end());
    }
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    return covered;
}

double default_snapshot_spacing(double wp_interval, const std::vector<CameraModel>& cameras) {
    double min_far = std::numeric_limits<double>::infinity();
    for (const auto& cam : cameras) min_far = std::min(min_far, cam.far_plane);
    return std::min(wp_interval, min_far) / 2.0;
}

CoverageResult coverage_from_ids(const TriangleMesh& mesh, std::vector<int> covered_ids) {
    std::sort(covered_ids.begin(), covered_ids.end());
    covered_ids.erase(std::unique(covered_ids.begin(), covered_ids.end()), covered_ids.end());

    CoverageResult result;
    double area = 0.0;
    for (int id : covered_ids) {
        if (!mesh.degenerate(id)) area += mesh.triangle_areas()[id];
    }
    result.covered_ids = std::move(covered_ids);
    result.covered_area = area;
    result.coverage_score = 1.0 - area / mesh.total_area();
    return result;
}

CoverageResult path_coverage(const TriangleMesh& mesh, std::span<const Vec3> positions,
                             const std::vector<CameraModel>& cameras, double snapshot_spacing,
                             std::span<const int> colliding_edges) {
    const Vec3 center = mesh.bbox().center();
    std::vector<int> covered;
    for (std::size_t e = 0; e + 1 < positions.size(); ++e) {
        if (std::find(colliding_edges.begin(), colliding_edges.end(), static_cast<int>(e)) !=
            colliding_edges.end())
            continue;
        EdgePose pose;
        pose.start = positions[e];
        pose.end = positions[e + 1];
        pose.heading = edge_heading(pose.start, pose.end, center);
        auto ids = edge_coverage(mesh, pose, cameras, snapshot_spacing);
        covered.insert(covered.end(), ids.begin(), ids.end());
    }
    return coverage_from_ids(mesh, std::move(covered));
}

CoverageResult plan_coverage(const TriangleMesh& mesh, const InspectionPlan& plan,
                             const WaypointGrid& grid, const std::vector<CameraModel>& cameras,
                             std::span<const int> colliding_edges) {
    const auto positions = resolve_plan(plan, grid);
    const double spacing = default_snapshot_spacing(grid.wp_interval, cameras);
    return path_coverage(mesh, positions, cameras, spacing, colliding_edges);
}

std::vector<Vec3> resolve_plan(const InspectionPlan& plan, const WaypointGrid& grid) {
    std::vector<Vec3> positions;
    positions.reserve(plan.size());
    for (int id : plan) {
        if (!grid.valid_id(id))
            throw InvalidPlanError("plan references unknown waypoint id " + std::to_string(id));
        positions.push_back(grid.position(id));
    }
    return positions;
}

}  // namespace coverplan
