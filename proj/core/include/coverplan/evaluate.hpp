// Whole-plan evaluation: energy with collision penalties, and coverage with
// colliding edges disregarded. PlanEvaluator memoizes per-edge coverage and
// per-genome fitness so evolutionary runs stay cheap.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "coverplan/energy.hpp"
#include "coverplan/sensing.hpp"

namespace coverplan {

struct Fitness {
    double coverage_score{1.0};  // minimized
    double energy{0.0};          // minimized
};

struct PlanEvaluation {
    CoverageResult coverage;
    EnergyResult energy;
    Fitness fitness() const { return {coverage.coverage_score, energy.energy}; }
};

PlanEvaluation evaluate_plan(const TriangleMesh& mesh, const InspectionPlan& plan,
                             const WaypointGrid& grid, const std::vector<CameraModel>& cameras,
                             const EnergyParams& params);

PlanEvaluation evaluate_path(const TriangleMesh& mesh, std::span<const Vec3> positions,
                             const std::vector<CameraModel>& cameras, const EnergyParams& params,
                             double snapshot_spacing);

class PlanEvaluator {
public:
    PlanEvaluator(const TriangleMesh& mesh, const WaypointGrid& grid,
                  std::vector<CameraModel> cameras, EnergyParams params);

    // Memoized per genome content; identical genomes never recompute.
    Fitness evaluate(const InspectionPlan& genome);

    // Actual fitness computations performed (memo misses).
    std::int64_t evaluation_count() const { return evaluations_; }

    const TriangleMesh& mesh() const { return mesh_; }
    const WaypointGrid& grid() const { return grid_; }
    const std::vector<CameraModel>& cameras() const { return cameras_; }
    const EnergyParams& params() const { return params_; }

private:
    struct EdgeInfo {
        std::vector<int> covered;
        double length{0.0};
        bool colliding{false};
    };
    const EdgeInfo& edge_info(int a, int b);

    struct GenomeHash {
        std::size_t operator()(const std::vector<int>& g) const {
            std::size_t h = g.size();
            for (int v : g) h = h * 1000003u + static_cast<std::size_t>(v) + 0x9e3779b9u;
            return h;
        }
    };

    const TriangleMesh& mesh_;
    const WaypointGrid& grid_;
    std::vector<CameraModel> cameras_;
    EnergyParams params_;
    double snapshot_spacing_;
    Vec3 center_;

    std::unordered_map<std::uint64_t, EdgeInfo> edge_cache_;
    std::unordered_map<std::vector<int>, Fitness, GenomeHash> memo_;
    std::int64_t evaluations_{0};
};

}  // namespace coverplan
