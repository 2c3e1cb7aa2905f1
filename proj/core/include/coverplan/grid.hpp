// Candidate-waypoint lattice around an inspection target. Waypoint spacing
// scales with the padded bounding-box volume so the search space stays a
// similar size across very different targets.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "coverplan/mesh.hpp"

namespace coverplan {

struct DiscretizationParams {
    double pad{4.0};
    double buffer{2.0};
    double volume_scaling{1000.0};
};

struct Waypoint {
    int id{0};
    Vec3 position;
    std::array<int, 3> grid_coords{0, 0, 0};
};

struct WaypointGrid {
    std::vector<Waypoint> waypoints;  // index == id
    double wp_interval{0.0};
    double pad{0.0};
    double buffer{0.0};
    std::vector<double> z_levels;  // sorted distinct z values
    Vec3 grid_origin;

    bool valid_id(int id) const { return id >= 0 && id < static_cast<int>(waypoints.size()); }
    const Vec3& position(int id) const { return waypoints[id].position; }
    std::size_t size() const { return waypoints.size(); }

    std::string to_json() const;
};

// Bounding box padded on x/y both sides and z above only (targets are
// floor-mounted; nothing is placed below their minimum z).
Box3 padded_box(const TriangleMesh& mesh, double pad);

// Cube root of padded box volume over volume_scaling.
double compute_wp_interval(const TriangleMesh& mesh, double pad, double volume_scaling);

// Regular lattice over the padded box, dropping points within `buffer` of the
// structure (interior points count as distance 0). IDs run in (k,j,i) scan
// order and are contiguous.
WaypointGrid generate_candidate_waypoints(const TriangleMesh& mesh, const DiscretizationParams& params);

}  // namespace coverplan
