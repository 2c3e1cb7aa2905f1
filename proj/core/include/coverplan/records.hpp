// Persisted artifacts: JSON plan records (schema_version 1, atomic writes)
// and the CSV schemas consumed by external analysis.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "coverplan/evaluate.hpp"
#include "coverplan/metrics.hpp"
#include "coverplan/moea.hpp"

namespace coverplan {

inline constexpr int kPlanRecordSchemaVersion = 1;
inline constexpr const char* kToolVersion = "coverplan 0.1.0";

struct PlanRecord {
    std::string planner;  // circling | sampling | nsga2 | moead
    std::string plan_id;
    std::string mesh_source;
    std::uint64_t mesh_hash{0};
    std::vector<int> waypoint_ids;
    std::vector<Vec3> positions;
    std::vector<Vec3> headings;  // one per edge
    Fitness fitness;
    std::vector<int> covered_ids;
    nlohmann::json parameters;  // planner configuration and seeds
    nlohmann::json provenance;  // config hash, master seed, tool version
    nlohmann::json timing;      // wall-clock phases; excluded from comparisons
};

// `include_timing=false` yields the canonical form used for byte-level
// determinism checks.
nlohmann::json plan_record_to_json(const PlanRecord& record, bool include_timing = true);
PlanRecord plan_record_from_json(const nlohmann::json& j);

// Write-temp-then-rename; a crash never leaves a parseable partial record.
void write_plan_record(const std::filesystem::path& path, const PlanRecord& record);
PlanRecord read_plan_record(const std::filesystem::path& path);

// Fills positions, headings, fitness and covered ids from a resolved path.
void attach_evaluation(PlanRecord& record, const TriangleMesh& mesh,
                       const std::vector<Vec3>& positions,
                       const std::vector<CameraModel>& cameras, const EnergyParams& params,
                       double snapshot_spacing);

// CSV writers. A non-empty `provenance` is embedded as a leading '#' comment
// line so every emitted file carries its config hash and seeds.

// CSV: generation, genome_length, coverage_score, energy.
void write_eval_log_csv(const std::filesystem::path& path, const std::vector<EvalRecord>& log,
                        const std::string& provenance = {});

// CSV: run_id, generation, coverage_score, energy.
struct LabeledPoint {
    std::string run_id;
    int generation{0};
    double coverage_score{0.0};
    double energy{0.0};
};
void write_front_csv(const std::filesystem::path& path, const std::vector<LabeledPoint>& points,
                     const std::string& provenance = {});

// CSV: threshold, best, median, worst ("inf" where unattained).
void write_surfaces_csv(const std::filesystem::path& path, const AttainmentSurfaces& surfaces,
                        const std::string& provenance = {});

std::uint64_t fnv1a_hash(const std::string& bytes);

}  // namespace coverplan
