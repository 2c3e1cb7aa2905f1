#include "coverplan/energy.hpp"

namespace coverplan {

double default_collision_penalty(const TriangleMesh& mesh) {
    return 2.0 * mesh.bbox().longest_side();
}

EnergyParams EnergyParams::defaults_for(const TriangleMesh& mesh) {
    EnergyParams p;
    p.collision_penalty = default_collision_penalty(mesh);
    return p;
}

EnergyResult path_energy(std::span<const Vec3> positions, const TriangleMesh* mesh,
                         const EnergyParams& params) {
    EnergyResult result;
    if (positions.size() < 2) return result;

    bool have_prev_dir = false;
    Vec3 prev_dir;
    for (std::size_t e = 0; e + 1 < positions.size(); ++e) {
        const Vec3& a = positions[e];
        const Vec3& b = positions[e + 1];
        const Vec3 d = b - a;
        const double len = norm(d);

        EdgeEnergy edge;
        edge.translation = params.w_trans * len;

        // theta = 0 for the first edge, zero-length edges, and edges directly
        // after a zero-length edge.
        if (len > 0.0) {
            if (have_prev_dir) {
                const double cos_theta = dot(prev_dir, d) / len;
                edge.rotation = params.w_rot * (1.0 - cos_theta);
            }
            prev_dir = d / len;
            have_prev_dir = true;
        } else {
            have_prev_dir = false;
        }

        if (mesh) {
            const double dist = len > 0.0 ? mesh->segment_min_distance(a, b)
                                          : mesh->point_min_distance(a);
            if (dist < params.safety_buffer) {
                edge.penalty = params.collision_penalty;
                result.colliding_edges.push_back(static_cast<int>(e));
            }
        }

        result.energy += edge.translation + edge.rotation + edge.penalty;
        result.per_edge.push_back(edge);
    }
    return result;
}

EnergyResult plan_energy(const InspectionPlan& plan, const WaypointGrid& grid,
                         const TriangleMesh& mesh, const EnergyParams& params) {
    const auto positions = resolve_plan(plan, grid);
    return path_energy(positions, &mesh, params);
}

}  // namespace coverplan
