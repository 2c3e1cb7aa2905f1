// Sampling-based coverage planning: grow an inspection graph by
// low-discrepancy sampling until a fraction f of the target area is observed
// (switching to targeted view sampling for the last epsilon), then extract a
// low-cost closed walk whose edges cover everything the graph observed.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coverplan/energy.hpp"
#include "coverplan/evaluate.hpp"
#include "coverplan/grid.hpp"
#include "coverplan/rng.hpp"
#include "coverplan/sensing.hpp"

namespace coverplan {

struct GraphEdge {
    int a{0};
    int b{0};
    double length{0.0};
    std::vector<int> covered;  // sorted triangle ids
};

struct InspectionGraph {
    std::vector<Vec3> nodes;  // node 0 is the start configuration
    std::vector<GraphEdge> edges;
    std::vector<std::vector<int>> adjacency;  // node -> incident edge indices
    std::vector<int> observed;                // sorted union over edge covered sets
    double observed_area{0.0};

    int add_node(const Vec3& p);
    // Returns the new edge index; updates observed. Returns the count of
    // newly observed primitives via `new_observations` when non-null.
    int add_edge(int a, int b, std::vector<int> covered, const TriangleMesh& mesh,
                 int* new_observations = nullptr);
};

struct SamplingParams {
    double f{1.0};
    double epsilon{0.05};
    int k_neighbors{5};
    Vec3 q0;
    std::uint64_t rng_seed{0};

    double pad{4.0};
    double buffer{2.0};
    double volume_scaling{1000.0};
    double local_radius{0.0};      // <= 0: twice the smallest camera far plane
    int max_stall_iterations{500};
    double snapshot_spacing{0.0};  // <= 0: derived from the discretization rule
};

// Deterministic 3-dimensional Sobol sequence (gray-code order, index 1 up).
class Sobol3 {
public:
    Sobol3();
    std::array<double, 3> next();

private:
    std::array<std::array<std::uint32_t, 32>, 3> v_{};
    std::array<std::uint32_t, 3> x_{};
    std::uint32_t index_{0};
};

class SamplingPlanner {
public:
    SamplingPlanner(const TriangleMesh& mesh, SamplingParams params,
                    std::vector<CameraModel> cameras, EnergyParams energy);

    // One pseudo-random expansion step; false when the sample was rejected.
    bool add_to_graph();

    // One targeted step chasing a random unobserved primitive; false when no
    // edge was added.
    bool add_missing_view();

    // Runs the f-loop. Throws UnreachableCoverageError (with the best
    // fraction reached) after max_stall_iterations steps without progress.
    void build();

    double observed_fraction() const;
    const InspectionGraph& graph() const { return graph_; }
    const SamplingParams& params() const { return params_; }

private:
    bool sample_valid(const Vec3& p) const;
    Vec3 random_in_ball(const Vec3& center, double radius);
    std::vector<int> nearest_nodes(const Vec3& p, int k, int exclude = -1) const;
    std::vector<int> edge_cover(const Vec3& a, const Vec3& b) const;
    bool edge_free(const Vec3& a, const Vec3& b) const;

    const TriangleMesh& mesh_;
    SamplingParams params_;
    std::vector<CameraModel> cameras_;
    EnergyParams energy_;
    Box3 sample_box_;
    Vec3 center_;
    InspectionGraph graph_;
    Sobol3 sobol_;
    Rng rng_;
    std::vector<char> observed_mask_;
    int last_missing_target_{-1};
};

// Closed walk through graph edges whose union of covered sets contains every
// observed primitive: greedy set cover for the required edges, shortest-path
// stitching, nearest-neighbor ordering, 2-opt improvement. The result starts
// and ends at `start` and uses only graph edges.
std::vector<int> find_closed_walk(const InspectionGraph& graph, const TriangleMesh& mesh,
                                  int start, const EnergyParams& energy);

struct SamplingRunResult {
    double f{0.0};
    int repetition{0};
    std::uint64_t seed{0};
    Vec3 q0;
    bool success{false};
    std::string error;
    double best_fraction{0.0};
    std::vector<int> plan;        // node ids along the walk
    std::vector<Vec3> positions;  // resolved walk
    Fitness fitness;
    double build_seconds{0.0};
    double walk_seconds{0.0};
    std::size_t graph_nodes{0};
    std::size_t graph_edges{0};
};

SamplingRunResult run_sampling_planner(const TriangleMesh& mesh, const SamplingParams& params,
                                       const std::vector<CameraModel>& cameras,
                                       const EnergyParams& energy);

// `steps` evenly spaced f values in [f_min, f_max]; each repetition draws a
// fresh start outside the bounding box (at most 10 m away) and runs every f.
// Unreachable-coverage failures are recorded and the sweep continues.
std::vector<SamplingRunResult> f_sweep(const TriangleMesh& mesh, double f_min, double f_max,
                                       int steps, int repetitions,
                                       const SamplingParams& base_params,
                                       const std::vector<CameraModel>& cameras,
                                       const EnergyParams& energy, std::uint64_t master_seed);

}  // namespace coverplan
