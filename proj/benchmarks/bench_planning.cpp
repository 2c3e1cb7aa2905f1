#include <benchmark/benchmark.h>

#include <functional>
#include <set>

#include "coverplan/circling.hpp"
#include "coverplan/evaluate.hpp"
#include "coverplan/moea.hpp"
#include "coverplan/sampling.hpp"

using namespace coverplan;

namespace {

struct SphereSetup {
    TriangleMesh mesh = generate_sphere(10.0, 960);
    WaypointGrid grid = generate_candidate_waypoints(mesh, {});
    std::vector<CameraModel> cameras = CameraModel::default_pair();
    EnergyParams energy = EnergyParams::defaults_for(mesh);
};

SphereSetup& setup() {
    static SphereSetup s;
    return s;
}

// Exhaustive closed-walk optimum on a small graph (same search the unit tests
// use as an oracle).
double brute_walk_energy(const InspectionGraph& graph, const EnergyParams& params,
                         int max_edges) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> walk{0};
    std::vector<Vec3> positions;
    auto energy_of = [&](const std::vector<int>& nodes) {
        positions.clear();
        for (int n : nodes) positions.push_back(graph.nodes[n]);
        return path_energy(positions, nullptr, params).energy;
    };
    const std::function<void(int, int)> dfs = [&](int node, int depth) {
        if (node == 0 && depth > 0) {
            std::set<int> seen;
            for (std::size_t i = 0; i + 1 < walk.size(); ++i)
                for (int ei : graph.adjacency[walk[i]]) {
                    const auto& e = graph.edges[ei];
                    if ((e.a == walk[i] && e.b == walk[i + 1]) ||
                        (e.b == walk[i] && e.a == walk[i + 1]))
                        seen.insert(e.covered.begin(), e.covered.end());
                }
            bool all = true;
            for (int id : graph.observed)
                if (!seen.count(id)) { all = false; break; }
            if (all) best = std::min(best, energy_of(walk));
        }
        if (depth == max_edges || energy_of(walk) >= best) return;
        for (int ei : graph.adjacency[node]) {
            const auto& e = graph.edges[ei];
            walk.push_back(e.a == node ? e.b : e.a);
            dfs(walk.back(), depth + 1);
            walk.pop_back();
        }
    };
    dfs(0, 0);
    return best;
}

InspectionGraph random_toy_graph(Rng& rng, const TriangleMesh& mesh) {
    InspectionGraph g;
    const int nodes = 4 + static_cast<int>(rng.index(3));
    for (int i = 0; i < nodes; ++i)
        g.add_node({rng.uniform(-12, 12), rng.uniform(-12, 12), rng.uniform(0, 12)});
    // Spanning tree plus a few extras, capped at 10 edges.
    for (int i = 1; i < nodes; ++i) {
        std::vector<int> covered;
        for (int t = 0; t < 3; ++t)
            covered.push_back(static_cast<int>(rng.index(mesh.triangle_count())));
        std::sort(covered.begin(), covered.end());
        covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
        g.add_edge(i, static_cast<int>(rng.index(static_cast<std::size_t>(i))), covered, mesh);
    }
    const int extras = static_cast<int>(rng.index(4));
    for (int e = 0; e < extras && g.edges.size() < 10; ++e) {
        const int a = static_cast<int>(rng.index(static_cast<std::size_t>(nodes)));
        const int b = static_cast<int>(rng.index(static_cast<std::size_t>(nodes)));
        if (a == b) continue;
        g.add_edge(a, b, {static_cast<int>(rng.index(mesh.triangle_count()))}, mesh);
    }
    return g;
}

}  // namespace

static void BM_CirclingPlans(benchmark::State& state) {
    auto& s = setup();
    for (auto _ : state) {
        benchmark::DoNotOptimize(circling_plans(s.mesh, s.grid));
    }
}
BENCHMARK(BM_CirclingPlans);

static void BM_SamplingBuild(benchmark::State& state) {
    auto& s = setup();
    const double f = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        SamplingParams params;
        params.f = f;
        params.q0 = {13, 0, 0};
        params.rng_seed = 5;
        SamplingPlanner planner(s.mesh, params, s.cameras, s.energy);
        planner.build();
        benchmark::DoNotOptimize(find_closed_walk(planner.graph(), s.mesh, 0, s.energy));
    }
}
BENCHMARK(BM_SamplingBuild)->Arg(25)->Arg(50)->Arg(95)->Unit(benchmark::kMillisecond);

static void BM_EvaluateCold(benchmark::State& state) {
    auto& s = setup();
    Rng rng(6);
    for (auto _ : state) {
        state.PauseTiming();
        PlanEvaluator evaluator(s.mesh, s.grid, s.cameras, s.energy);
        Genome genome;
        for (int i = 0; i < 20; ++i) genome.push_back(static_cast<int>(rng.index(s.grid.size())));
        state.ResumeTiming();
        benchmark::DoNotOptimize(evaluator.evaluate(genome));
    }
}
BENCHMARK(BM_EvaluateCold)->Unit(benchmark::kMillisecond);

static void BM_EvaluateWarm(benchmark::State& state) {
    auto& s = setup();
    PlanEvaluator evaluator(s.mesh, s.grid, s.cameras, s.energy);
    Rng rng(7);
    Genome genome;
    for (int i = 0; i < 20; ++i) genome.push_back(static_cast<int>(rng.index(s.grid.size())));
    evaluator.evaluate(genome);
    for (auto _ : state) {
        // One mutation away from a fully cached genome: the common case
        // inside an evolutionary run.
        Genome child = genome;
        child[rng.index(child.size())] = static_cast<int>(rng.index(s.grid.size()));
        benchmark::DoNotOptimize(evaluator.evaluate(child));
    }
}
BENCHMARK(BM_EvaluateWarm);

static void BM_Nsga2Generation(benchmark::State& state) {
    auto& s = setup();
    for (auto _ : state) {
        PlanEvaluator evaluator(s.mesh, s.grid, s.cameras, s.energy);
        EAConfig cfg;
        cfg.pop_size = 40;
        cfg.num_generations = static_cast<int>(state.range(0));
        cfg.rng_seed = 8;
        benchmark::DoNotOptimize(evolve_nsga2(evaluator, {}, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Nsga2Generation)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

// Tracked (not asserted): heuristic closed-walk cost against the exhaustive
// optimum on toy graphs with at most 10 edges.
static void BM_WalkOptimalityGap(benchmark::State& state) {
    auto& s = setup();
    Rng rng(9);
    double worst_gap = 1.0;
    double gap_sum = 0.0;
    std::int64_t instances = 0;
    for (auto _ : state) {
        const auto graph = random_toy_graph(rng, s.mesh);
        const auto walk = find_closed_walk(graph, s.mesh, 0, s.energy);
        std::vector<Vec3> positions;
        for (int n : walk) positions.push_back(graph.nodes[n]);
        const double heuristic = path_energy(positions, nullptr, s.energy).energy;
        const double optimum = brute_walk_energy(graph, s.energy, 10);
        if (optimum > 0.0 && std::isfinite(optimum)) {
            const double gap = heuristic / optimum;
            worst_gap = std::max(worst_gap, gap);
            gap_sum += gap;
            ++instances;
        }
        benchmark::DoNotOptimize(heuristic);
    }
    if (instances > 0) {
        state.counters["gap_mean"] = gap_sum / static_cast<double>(instances);
        state.counters["gap_worst"] = worst_gap;
    }
}
BENCHMARK(BM_WalkOptimalityGap)->Unit(benchmark::kMillisecond);
