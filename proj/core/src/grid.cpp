#include "coverplan/grid.hpp"

#include <cmath>
#include <sstream>

#include "coverplan/errors.hpp"

namespace coverplan {

Box3 padded_box(const TriangleMesh& mesh, double pad) {
    Box3 box = mesh.bbox();
    box.min.x -= pad;
    box.min.y -= pad;
    box.max.x += pad;
    box.max.y += pad;
    box.max.z += pad;
    return box;
}

double compute_wp_interval(const TriangleMesh& mesh, double pad, double volume_scaling) {
    if (volume_scaling <= 0.0) throw InvalidInputError("volume_scaling must be positive");
    const Box3 box = padded_box(mesh, pad);
    const Vec3 e = box.extent();
    const double volume = e.x * e.y * e.z;
    if (volume <= 0.0) throw InvalidInputError("padded bounding box has zero volume");
    return std::cbrt(volume / volume_scaling);
}

WaypointGrid generate_candidate_waypoints(const TriangleMesh& mesh,
                                          const DiscretizationParams& params) {
    if (params.pad < params.buffer || params.buffer < 0.0)
        throw InvalidInputError("require pad >= buffer >= 0");

    const double interval = compute_wp_interval(mesh, params.pad, params.volume_scaling);
    const Box3 box = padded_box(mesh, params.pad);
    const double min_z = mesh.bbox().min.z;

    constexpr double kEdgeTol = 1e-9;
    const auto steps = [&](double lo, double hi) {
        return static_cast<int>(std::floor((hi - lo) / interval + kEdgeTol)) + 1;
    };
    const int ni = steps(box.min.x, box.max.x);
    const int nj = steps(box.min.y, box.max.y);
    const int nk = steps(box.min.z, box.max.z);

    WaypointGrid grid;
    grid.wp_interval = interval;
    grid.pad = params.pad;
    grid.buffer = params.buffer;
    grid.grid_origin = box.min;

    for (int k = 0; k < nk; ++k) {
        for (int j = 0; j < nj; ++j) {
            for (int i = 0; i < ni; ++i) {
                const Vec3 p = box.min + Vec3{i * interval, j * interval, k * interval};
                if (p.z < min_z) continue;
                if (mesh.distance_to_structure(p) < params.buffer) continue;
                Waypoint wp;
                wp.id = static_cast<int>(grid.waypoints.size());
                wp.position = p;
                wp.grid_coords = {i, j, k};
                grid.waypoints.push_back(wp);
            }
        }
    }
    if (grid.waypoints.empty())
        throw InvalidInputError("no candidate waypoints survive the buffer constraint");

    double last_z = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < nk; ++k) {
        const double z = box.min.z + k * interval;
        for (const auto& wp : grid.waypoints) {
            if (wp.grid_coords[2] == k) {
                if (z != last_z) grid.z_levels.push_back(z);
                last_z = z;
                break;
            }
        }
    }
    return grid;
}

std::string WaypointGrid::to_json() const {
    std::ostringstream out;
    out.precision(17);
    out << "{\"wp_interval\":" << wp_interval << ",\"pad\":" << pad << ",\"buffer\":" << buffer
        << ",\"grid_origin\":[" << grid_origin.x << "," << grid_origin.y << "," << grid_origin.z
        << "],\"waypoints\":[";
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const auto& wp = waypoints[i];
        if (i) out << ",";
        out << "{\"id\":" << wp.id << ",\"position\":[" << wp.position.x << "," << wp.position.y
            << "," << wp.position.z << "],\"grid_coords\":[" << wp.grid_coords[0] << ","
            << wp.grid_coords[1] << "," << wp.grid_coords[2] << "]}";
    }
    out << "]}";
    return out.str();
}

}  // namespace coverplan
