#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "coverplan/errors.hpp"
#include "coverplan/records.hpp"
#include "test_util.hpp"

using namespace coverplan;

namespace {

PlanRecord sample_record(const TriangleMesh& mesh, const WaypointGrid& grid) {
    PlanRecord record;
    record.planner = "circling";
    record.plan_id = "dz1";
    record.mesh_source = "sphere:r=10,tris=960";
    record.waypoint_ids = {0, 1, 2, 1};
    record.parameters = {{"pad", 4.0}, {"buffer", 2.0}};
    record.provenance = {{"rng_seed", 7}, {"tool", kToolVersion}};
    record.timing = {{"seconds", 1.25}};

    std::vector<Vec3> positions;
    for (int id : record.waypoint_ids) positions.push_back(grid.position(id));
    attach_evaluation(record, mesh, positions, CameraModel::default_pair(),
                      EnergyParams::defaults_for(mesh),
                      default_snapshot_spacing(grid.wp_interval, CameraModel::default_pair()));
    return record;
}

}  // namespace

TEST_SUITE("records") {

TEST_CASE("plan records round trip through json files") {
    const auto mesh = generate_sphere(10.0, 960);
    const auto grid = generate_candidate_waypoints(mesh, {});
    const auto record = sample_record(mesh, grid);

    const auto path = testutil::temp_file("record.json");
    write_plan_record(path, record);
    const auto loaded = read_plan_record(path);

    CHECK(loaded.planner == record.planner);
    CHECK(loaded.waypoint_ids == record.waypoint_ids);
    CHECK(loaded.positions.size() == record.positions.size());
    CHECK(loaded.headings.size() == record.waypoint_ids.size() - 1);
    CHECK(loaded.fitness.coverage_score == record.fitness.coverage_score);
    CHECK(loaded.fitness.energy == record.fitness.energy);
    CHECK(loaded.covered_ids == record.covered_ids);
    CHECK(loaded.mesh_hash == mesh.content_hash());

    // No leftover temp file.
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("stored fitness reproduces under re-evaluation") {
    const auto mesh = generate_sphere(10.0, 960);
    const auto grid = generate_candidate_waypoints(mesh, {});
    const auto record = sample_record(mesh, grid);

    const auto eval = evaluate_plan(mesh, record.waypoint_ids, grid,
                                    CameraModel::default_pair(), EnergyParams::defaults_for(mesh));
    CHECK(eval.fitness().coverage_score ==
          doctest::Approx(record.fitness.coverage_score).epsilon(1e-9));
    CHECK(eval.fitness().energy == doctest::Approx(record.fitness.energy).epsilon(1e-9));
}

TEST_CASE("schema version mismatches are refused") {
    const auto mesh = generate_sphere(10.0, 960);
    const auto grid = generate_candidate_waypoints(mesh, {});
    auto j = plan_record_to_json(sample_record(mesh, grid));
    j["schema_version"] = 999;
    CHECK_THROWS_AS(plan_record_from_json(j), SchemaMismatchError);
}

TEST_CASE("canonical form excludes wall-clock fields and is byte-stable") {
    const auto mesh = generate_sphere(10.0, 960);
    const auto grid = generate_candidate_waypoints(mesh, {});
    auto a = sample_record(mesh, grid);
    auto b = sample_record(mesh, grid);
    a.timing = {{"seconds", 1.0}};
    b.timing = {{"seconds", 2.0}};

    CHECK(plan_record_to_json(a).dump() != plan_record_to_json(b).dump());
    CHECK(plan_record_to_json(a, false).dump() == plan_record_to_json(b, false).dump());
}

TEST_CASE("csv writers emit the documented schemas") {
    const auto log_path = testutil::temp_file("log.csv");
    write_eval_log_csv(log_path, {{0, 4, 0.5, 12.5}, {1, 6, 0.25, 20.0}});
    std::ifstream log_in(log_path);
    std::string line;
    std::getline(log_in, line);
    CHECK(line == "generation,genome_length,coverage_score,energy");
    std::getline(log_in, line);
    CHECK(line == "0,4,0.5,12.5");

    const auto front_path = testutil::temp_file("front.csv");
    write_front_csv(front_path, {{"nsga2_run0", 3, 0.1, 33.0}});
    std::ifstream front_in(front_path);
    std::getline(front_in, line);
    CHECK(line == "run_id,generation,coverage_score,energy");
    std::getline(front_in, line);
    CHECK(line == "nsga2_run0,3,0.1,33");  // shortest round-trip form

    AttainmentSurfaces surfaces;
    surfaces.thresholds = {0.0, 1.0};
    surfaces.best = {5.0, 1.0};
    surfaces.median = {6.0, 2.0};
    surfaces.worst = {std::numeric_limits<double>::infinity(), 3.0};
    const auto surf_path = testutil::temp_file("surfaces.csv");
    write_surfaces_csv(surf_path, surfaces);
    std::ifstream surf_in(surf_path);
    std::getline(surf_in, line);
    CHECK(line == "threshold,best,median,worst");
    std::getline(surf_in, line);
    CHECK(line == "0,5,6,inf");
}

}  // TEST_SUITE
