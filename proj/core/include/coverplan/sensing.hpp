// Two-camera snapshot simulation along plan edges. A triangle counts as
// covered when its centroid lies inside some camera's frustum, faces the
// camera, and has an unoccluded sightline.
#pragma once

#include <span>
#include <vector>

#include "coverplan/mesh.hpp"
#include "coverplan/plan.hpp"

namespace coverplan {

enum class CameraMount { Forward, Down };

struct CameraModel {
    CameraMount mount{CameraMount::Forward};
    double vertical_fov_deg{46.0};
    double horizontal_fov_deg{46.0};
    double near_plane{0.1};
    double far_plane{10.0};
    int resolution_px{1024};  // metadata only

    // The simulated rig: one camera straight ahead, one straight down.
    static std::vector<CameraModel> default_pair();
};

struct EdgePose {
    Vec3 start;
    Vec3 end;
    Vec3 heading;  // unit, zero z-component
};

struct CoverageResult {
    std::vector<int> covered_ids;  // sorted
    double covered_area{0.0};
    double coverage_score{1.0};  // 1 - covered/total; 0 = full coverage
};

// Horizontal robot heading for an edge: perpendicular to the x-y movement
// direction, on the side facing the target; pure-z moves point at the target
// center. `degenerate` (optional) reports the +x fallback when the midpoint
// sits on the center axis.
Vec3 edge_heading(const Vec3& start, const Vec3& end, const Vec3& target_center,
                  bool* degenerate = nullptr);

// Triangle ids visible from one pose. Output is sorted.
std::vector<int> snapshot_visible(const TriangleMesh& mesh, const Vec3& position,
                                  const Vec3& heading, const std::vector<CameraModel>& cameras);

// Union of snapshots spaced <= snapshot_spacing along the edge, endpoints
// always included. Symmetric in edge direction.
std::vector<int> edge_coverage(const TriangleMesh& mesh, const EdgePose& edge,
                               const std::vector<CameraModel>& cameras, double snapshot_spacing);

// Snapshot spacing rule shared by all planners.
double default_snapshot_spacing(double wp_interval, const std::vector<CameraModel>& cameras);

CoverageResult coverage_from_ids(const TriangleMesh& mesh, std::vector<int> covered_ids);

// Whole-plan coverage over consecutive waypoint pairs; edges listed in
// `colliding_edges` (indices into the edge sequence) contribute nothing.
CoverageResult plan_coverage(const TriangleMesh& mesh, const InspectionPlan& plan,
                             const WaypointGrid& grid, const std::vector<CameraModel>& cameras,
                             std::span<const int> colliding_edges = {});

// Same, over already-resolved positions (used by the sampling planner whose
// nodes are not grid waypoints).
CoverageResult path_coverage(const TriangleMesh& mesh, std::span<const Vec3> positions,
                             const std::vector<CameraModel>& cameras, double snapshot_spacing,
                             std::span<const int> colliding_edges = {});

}  // namespace coverplan
