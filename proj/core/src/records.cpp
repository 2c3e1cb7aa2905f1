#include "coverplan/records.hpp"

#include <charconv>
#include <fstream>

#include "coverplan/errors.hpp"

namespace coverplan {

namespace {

nlohmann::json vec_to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

// Shortest round-trip decimal form.
std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

nlohmann::json plan_record_to_json(const PlanRecord& record, bool include_timing) {
    nlohmann::json j;
    j["schema_version"] = kPlanRecordSchemaVersion;
    j["planner"] = record.planner;
    j["plan_id"] = record.plan_id;
    j["mesh"] = {{"source", record.mesh_source}, {"content_hash", record.mesh_hash}};
    j["plan"]["waypoint_ids"] = record.waypoint_ids;
    auto& positions = j["plan"]["positions"] = nlohmann::json::array();
    for (const auto& p : record.positions) positions.push_back(vec_to_json(p));
    auto& headings = j["plan"]["headings"] = nlohmann::json::array();
    for (const auto& h : record.headings) headings.push_back(vec_to_json(h));
    j["fitness"] = {{"coverage_score", record.fitness.coverage_score},
                    {"energy", record.fitness.energy}};
    j["covered_ids"] = record.covered_ids;
    j["parameters"] = record.parameters;
    j["provenance"] = record.provenance;
    if (include_timing) j["timing"] = record.timing;
    return j;
}

PlanRecord plan_record_from_json(const nlohmann::json& j) {
    const int version = j.at("schema_version").get<int>();
    if (version != kPlanRecordSchemaVersion)
        throw SchemaMismatchError("plan record schema_version " + std::to_string(version) +
                                  " (expected " + std::to_string(kPlanRecordSchemaVersion) + ")");
    PlanRecord record;
    record.planner = j.at("planner").get<std::string>();
    record.plan_id = j.at("plan_id").get<std::string>();
    record.mesh_source = j.at("mesh").at("source").get<std::string>();
    record.mesh_hash = j.at("mesh").at("content_hash").get<std::uint64_t>();
    record.waypoint_ids = j.at("plan").at("waypoint_ids").get<std::vector<int>>();
    for (const auto& p : j.at("plan").at("positions")) record.positions.push_back(vec_from_json(p));
    for (const auto& h : j.at("plan").at("headings")) record.headings.push_back(vec_from_json(h));
    record.fitness.coverage_score = j.at("fitness").at("coverage_score").get<double>();
    record.fitness.energy = j.at("fitness").at("energy").get<double>();
    record.covered_ids = j.at("covered_ids").get<std::vector<int>>();
    record.parameters = j.value("parameters", nlohmann::json::object());
    record.provenance = j.value("provenance", nlohmann::json::object());
    record.timing = j.value("timing", nlohmann::json::object());
    return record;
}

void write_plan_record(const std::filesystem::path& path, const PlanRecord& record) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InvalidInputError("cannot open for writing: " + tmp);
        out << plan_record_to_json(record).dump(2) << "\n";
        if (!out) throw InvalidInputError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

PlanRecord read_plan_record(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open plan record: " + path.string());
    nlohmann::json j;
    in >> j;
    return plan_record_from_json(j);
}

void attach_evaluation(PlanRecord& record, const TriangleMesh& mesh,
                       const std::vector<Vec3>& positions,
                       const std::vector<CameraModel>& cameras, const EnergyParams& params,
                       double snapshot_spacing) {
    record.positions = positions;
    record.headings.clear();
    const Vec3 center = mesh.bbox().center();
    for (std::size_t e = 0; e + 1 < positions.size(); ++e)
        record.headings.push_back(edge_heading(positions[e], positions[e + 1], center));

    const auto eval = evaluate_path(mesh, positions, cameras, params, snapshot_spacing);
    record.fitness = eval.fitness();
    record.covered_ids = eval.coverage.covered_ids;
    record.mesh_hash = mesh.content_hash();
}

void write_eval_log_csv(const std::filesystem::path& path, const std::vector<EvalRecord>& log,
                        const std::string& provenance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot open for writing: " + path.string());
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "generation,genome_length,coverage_score,energy\n";
    for (const auto& r : log)
        out << r.generation << "," << r.genome_length << "," << fmt(r.coverage_score) << ","
            << fmt(r.energy) << "\n";
}

void write_front_csv(const std::filesystem::path& path, const std::vector<LabeledPoint>& points,
                     const std::string& provenance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot open for writing: " + path.string());
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "run_id,generation,coverage_score,energy\n";
    for (const auto& p : points)
        out << p.run_id << "," << p.generation << "," << fmt(p.coverage_score) << ","
            << fmt(p.energy) << "\n";
}

void write_surfaces_csv(const std::filesystem::path& path, const AttainmentSurfaces& surfaces,
                        const std::string& provenance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot open for writing: " + path.string());
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "threshold,best,median,worst\n";
    for (std::size_t i = 0; i < surfaces.thresholds.size(); ++i) {
        out << fmt(surfaces.thresholds[i]) << "," << fmt(surfaces.best[i]) << ","
            << fmt(surfaces.median[i]) << "," << fmt(surfaces.worst[i]) << "\n";
    }
}

}  // namespace coverplan
