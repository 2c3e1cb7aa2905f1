// Plan energy: weighted translation plus rotation proportional to
// (1 - cos theta) between successive edges, with a fixed penalty per edge
// that passes inside the safety buffer.
#pragma once

#include <span>
#include <vector>

#include "coverplan/mesh.hpp"
#include "coverplan/plan.hpp"

namespace coverplan {

struct EnergyParams {
    double w_trans{0.1};
    double w_rot{1.0};
    double safety_buffer{1.5};
    double collision_penalty{0.0};

    // The usual parameter set: penalty = twice the target's longest side.
    static EnergyParams defaults_for(const TriangleMesh& mesh);
};

struct EdgeEnergy {
    double translation{0.0};
    double rotation{0.0};
    double penalty{0.0};
};

struct EnergyResult {
    double energy{0.0};
    std::vector<EdgeEnergy> per_edge;
    std::vector<int> colliding_edges;
};

double default_collision_penalty(const TriangleMesh& mesh);

EnergyResult plan_energy(const InspectionPlan& plan, const WaypointGrid& grid,
                         const TriangleMesh& mesh, const EnergyParams& params);

// Position-level form shared with the sampling planner. `mesh` may be null;
// collision checks are skipped then.
EnergyResult path_energy(std::span<const Vec3> positions, const TriangleMesh* mesh,
                         const EnergyParams& params);

}  // namespace coverplan
