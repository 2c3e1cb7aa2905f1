// Circling sweep plans: per-z-level boundary loops around the structure,
// traced on the waypoint lattice and composed at every level spacing.
#pragma once

#include <vector>

#include "coverplan/grid.hpp"
#include "coverplan/plan.hpp"

namespace coverplan {

struct LevelLoop {
    double z_level{0.0};
    std::vector<int> waypoint_ids;  // closed loop; first != last
};

struct CirclingResult {
    std::vector<LevelLoop> loops;       // bottom to top
    std::vector<double> skipped_levels; // too few cells to trace
};

// 2D occupancy lattice for boundary tracing.
struct Occupancy {
    int width{0};
    int height{0};
    std::vector<std::uint8_t> cells;  // row-major, y * width + x

    bool at(int x, int y) const {
        if (x < 0 || y < 0 || x >= width || y >= height) return false;
        return cells[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y) { cells[static_cast<std::size_t>(y) * width + x] = 1; }
};

// Ordered outer boundary of the largest 8-connected component, following the
// Moore neighborhood clockwise and stopping by Jacob's criterion. Cells may
// repeat where the boundary is one cell wide.
std::vector<std::array<int, 2>> moore_trace(const Occupancy& occupancy);

// Remove waypoints that lie on the segment between their cyclic neighbors;
// the traversed polyline is unchanged.
std::vector<int> prune_edge(const std::vector<int>& loop, const WaypointGrid& grid);

// One boundary loop per z-level that has waypoints near the structure.
CirclingResult circle_each_level(const TriangleMesh& mesh, const WaypointGrid& grid);

// For each dz in 1..loops.size(): pick loops dz apart with the offset whose
// mean z is closest to z_center, connect them bottom to top, closing every
// loop before hopping to the nearest waypoint of the next. A hop that would
// pass inside safety_buffer is rerouted along the waypoint lattice, keeping
// every composed plan collision-free.
std::vector<InspectionPlan> compose_circling_plans(const std::vector<LevelLoop>& loops,
                                                   const WaypointGrid& grid, double z_center,
                                                   const TriangleMesh& mesh,
                                                   double safety_buffer = 1.5);

// Complete family: one plan per dz.
std::vector<InspectionPlan> circling_plans(const TriangleMesh& mesh, const WaypointGrid& grid,
                                           double safety_buffer = 1.5);

}  // namespace coverplan
