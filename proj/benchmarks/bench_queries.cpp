#include <benchmark/benchmark.h>

#include "coverplan/grid.hpp"
#include "coverplan/metrics.hpp"
#include "coverplan/rng.hpp"
#include "coverplan/sensing.hpp"

using namespace coverplan;

namespace {

const TriangleMesh& sphere() {
    static const TriangleMesh mesh = generate_sphere(10.0, 960);
    return mesh;
}

}  // namespace

static void BM_RayIntersect(benchmark::State& state) {
    const auto& mesh = sphere();
    Rng rng(1);
    std::vector<std::pair<Vec3, Vec3>> rays;
    for (int i = 0; i < 512; ++i) {
        const Vec3 origin{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)};
        rays.emplace_back(origin, normalized(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                                  rng.uniform(-1, 1)}));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [origin, dir] = rays[i++ % rays.size()];
        benchmark::DoNotOptimize(mesh.ray_intersect(origin, dir, 100.0));
    }
}
BENCHMARK(BM_RayIntersect);

static void BM_SegmentMinDistance(benchmark::State& state) {
    const auto& mesh = sphere();
    Rng rng(2);
    std::vector<std::pair<Vec3, Vec3>> segments;
    for (int i = 0; i < 512; ++i) {
        segments.emplace_back(Vec3{rng.uniform(-15, 15), rng.uniform(-15, 15), rng.uniform(-15, 15)},
                              Vec3{rng.uniform(-15, 15), rng.uniform(-15, 15), rng.uniform(-15, 15)});
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [a, b] = segments[i++ % segments.size()];
        benchmark::DoNotOptimize(mesh.segment_min_distance(a, b));
    }
}
BENCHMARK(BM_SegmentMinDistance);

static void BM_SnapshotVisible(benchmark::State& state) {
    const auto& mesh = sphere();
    const auto cameras = CameraModel::default_pair();
    for (auto _ : state) {
        benchmark::DoNotOptimize(snapshot_visible(mesh, {13, 0, 0}, {-1, 0, 0}, cameras));
    }
}
BENCHMARK(BM_SnapshotVisible);

static void BM_EdgeCoverage(benchmark::State& state) {
    const auto& mesh = sphere();
    const auto cameras = CameraModel::default_pair();
    const EdgePose edge{{13, -6, 0}, {13, 6, 0}, {-1, 0, 0}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(edge_coverage(mesh, edge, cameras, 1.33));
    }
}
BENCHMARK(BM_EdgeCoverage);

static void BM_GenerateWaypoints(benchmark::State& state) {
    const auto& mesh = sphere();
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_candidate_waypoints(mesh, {}));
    }
}
BENCHMARK(BM_GenerateWaypoints);

static void BM_Hypervolume(benchmark::State& state) {
    Rng rng(3);
    std::vector<FrontPoint> points;
    for (int i = 0; i < state.range(0); ++i)
        points.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 100.0), ""});
    const auto ref = choose_reference_point(points);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hypervolume_2d(points, ref));
    }
}
BENCHMARK(BM_Hypervolume)->Arg(64)->Arg(1024)->Arg(16384);

BENCHMARK_MAIN();
