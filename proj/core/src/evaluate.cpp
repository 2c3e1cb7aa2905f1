#include "coverplan/evaluate.hpp"

#include <algorithm>

namespace coverplan {

PlanEvaluation evaluate_path(const TriangleMesh& mesh, std::span<const Vec3> positions,
                             const std::vector<CameraModel>& cameras, const EnergyParams& params,
                             double snapshot_spacing) {
    PlanEvaluation eval;
    eval.energy = path_energy(positions, &mesh, params);
    eval.coverage = path_coverage(mesh, positions, cameras, snapshot_spacing,
                                  eval.energy.colliding_edges);
    return eval;
}

PlanEvaluation evaluate_plan(const TriangleMesh& mesh, const InspectionPlan& plan,
                             const WaypointGrid& grid, const std::vector<CameraModel>& cameras,
                             const EnergyParams& params) {
    const auto positions = resolve_plan(plan, grid);
    return evaluate_path(mesh, positions, cameras, params,
                         default_snapshot_spacing(grid.wp_interval, cameras));
}

PlanEvaluator::PlanEvaluator(const TriangleMesh& mesh, const WaypointGrid& grid,
                             std::vector<CameraModel> cameras, EnergyParams params)
    : mesh_(mesh),
      grid_(grid),
      cameras_(std::move(cameras)),
      params_(params),
      snapshot_spacing_(default_snapshot_spacing(grid.wp_interval, cameras_)),
      center_(mesh.bbox().center()) {}

const PlanEvaluator::EdgeInfo& PlanEvaluator::edge_info(int a, int b) {
    // Coverage and collision are direction-independent, so cache undirected.
    const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                              static_cast<std::uint32_t>(std::max(a, b));
    auto it = edge_cache_.find(key);
    if (it != edge_cache_.end()) return it->second;

    EdgeInfo info;
    const Vec3& pa = grid_.position(a);
    const Vec3& pb = grid_.position(b);
    info.length = distance(pa, pb);
    const double dist = info.length > 0.0 ? mesh_.segment_min_distance(pa, pb)
                                          : mesh_.point_min_distance(pa);
    info.colliding = dist < params_.safety_buffer;
    if (!info.colliding) {
        EdgePose pose{pa, pb, edge_heading(pa, pb, center_)};
        info.covered = edge_coverage(mesh_, pose, cameras_, snapshot_spacing_);
    }
    return edge_cache_.emplace(key, std::move(info)).first->second;
}

Fitness PlanEvaluator::evaluate(const InspectionPlan& genome) {
    auto memo_it = memo_.find(genome);
    if (memo_it != memo_.end()) return memo_it->second;

    ++evaluations_;

    double energy = 0.0;
    std::vector<int> covered;
    bool have_prev_dir = false;
    Vec3 prev_dir;
    for (std::size_t e = 0; e + 1 < genome.size(); ++e) {
        const int a = genome[e];
        const int b = genome[e + 1];
        const auto& info = edge_info(a, b);

        energy += params_.w_trans * info.length;
        if (info.length > 0.0) {
            const Vec3 d = grid_.position(b) - grid_.position(a);
            if (have_prev_dir)
                energy += params_.w_rot * (1.0 - dot(prev_dir, d) / info.length);
            prev_dir = d / info.length;
            have_prev_dir = true;
        } else {
            have_prev_dir = false;
        }

        if (info.colliding) {
            energy += params_.collision_penalty;
        } else {
            covered.insert(covered.end(), info.covered.begin(), info.covered.end());
        }
    }

    const auto coverage = coverage_from_ids(mesh_, std::move(covered));
    const Fitness fitness{coverage.coverage_score, energy};
    memo_.emplace(genome, fitness);
    return fitness;
}

}  // namespace coverplan
