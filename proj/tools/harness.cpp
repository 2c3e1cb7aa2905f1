#include "harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "coverplan/errors.hpp"

namespace coverplan::harness {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

nlohmann::json discretization_json(const DiscretizationParams& d) {
    return {{"pad", d.pad}, {"buffer", d.buffer}, {"volume_scaling", d.volume_scaling}};
}

nlohmann::json provenance_json(const nlohmann::json& parameters, const std::string& target,
                               std::uint64_t seed, const std::string& run_id) {
    nlohmann::json p;
    p["config_hash"] = fnv1a_hash(parameters.dump() + target);
    p["rng_seed"] = seed;
    p["run_id"] = run_id;
    p["tool"] = kToolVersion;
    return p;
}

}  // namespace

void run_pool(int count, int threads, const std::function<void(int)>& task) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int workers = std::min(threads, count);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<PlanRecord> build_circling_records(const TargetInfo& target,
                                               const DiscretizationParams& discretization) {
    const auto t0 = clock_type::now();
    const auto grid = generate_candidate_waypoints(target.mesh, discretization);
    const auto cameras = CameraModel::default_pair();
    const auto energy = EnergyParams::defaults_for(target.mesh);
    const double spacing = default_snapshot_spacing(grid.wp_interval, cameras);

    const auto plans = circling_plans(target.mesh, grid, energy.safety_buffer);
    const double plan_seconds = seconds_since(t0);

    nlohmann::json parameters;
    parameters["discretization"] = discretization_json(discretization);
    parameters["snapshot_spacing"] = spacing;
    parameters["safety_buffer"] = energy.safety_buffer;
    parameters["num_levels"] = plans.size();

    std::vector<PlanRecord> records;
    for (std::size_t dz = 1; dz <= plans.size(); ++dz) {
        const auto te = clock_type::now();
        PlanRecord record;
        record.planner = "circling";
        record.plan_id = "dz" + std::to_string(dz);
        record.mesh_source = target.canonical;
        record.waypoint_ids = plans[dz - 1];
        record.parameters = parameters;
        record.parameters["dz"] = dz;
        record.provenance = provenance_json(record.parameters, target.canonical, 0, "circling");
        attach_evaluation(record, target.mesh, resolve_plan(plans[dz - 1], grid), cameras, energy,
                          spacing);
        record.timing = {{"plan_seconds", plan_seconds}, {"eval_seconds", seconds_since(te)}};
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<PlanRecord> build_sampling_records(const TargetInfo& target, const PlanOptions& opts,
                                               std::vector<SamplingRunResult>* raw) {
    const auto cameras = CameraModel::default_pair();
    const auto energy = EnergyParams::defaults_for(target.mesh);

    SamplingParams base;
    base.epsilon = opts.epsilon;
    base.k_neighbors = opts.k_neighbors;
    base.max_stall_iterations = opts.max_stall;
    base.pad = opts.discretization.pad;
    base.buffer = opts.discretization.buffer;
    base.volume_scaling = opts.discretization.volume_scaling;

    // Repetitions are independent: each uses seed + repetition index, so the
    // pooled runs reproduce the sequential sweep exactly.
    std::vector<std::vector<SamplingRunResult>> per_rep(
        static_cast<std::size_t>(opts.repetitions));
    run_pool(opts.repetitions, opts.threads, [&](int rep) {
        per_rep[static_cast<std::size_t>(rep)] =
            f_sweep(target.mesh, opts.f_min, opts.f_max, opts.f_steps, 1, base, cameras, energy,
                    opts.seed + static_cast<std::uint64_t>(rep));
    });

    std::vector<PlanRecord> records;
    for (int rep = 0; rep < opts.repetitions; ++rep) {
        for (auto& result : per_rep[static_cast<std::size_t>(rep)]) {
            result.repetition = rep;
            if (raw) raw->push_back(result);
            if (!result.success) continue;

            PlanRecord record;
            record.planner = "sampling";
            std::ostringstream id;
            id << "f" << result.f << "_rep" << rep;
            record.plan_id = id.str();
            record.mesh_source = target.canonical;
            record.waypoint_ids = result.plan;
            record.parameters = {{"f", result.f},
                                 {"epsilon", base.epsilon},
                                 {"k_neighbors", base.k_neighbors},
                                 {"max_stall_iterations", base.max_stall_iterations},
                                 {"discretization", discretization_json(opts.discretization)},
                                 {"q0", {result.q0.x, result.q0.y, result.q0.z}},
                                 {"repetition", rep},
                                 {"graph_nodes", result.graph_nodes},
                                 {"graph_edges", result.graph_edges}};
            record.provenance = provenance_json(record.parameters, target.canonical, result.seed,
                                                "sampling_rep" + std::to_string(rep));
            const double spacing = [&] {
                SamplingParams p = base;
                const double interval =
                    compute_wp_interval(target.mesh, p.pad, p.volume_scaling);
                return default_snapshot_spacing(interval, cameras);
            }();
            record.parameters["snapshot_spacing"] = spacing;
            attach_evaluation(record, target.mesh, result.positions, cameras, energy, spacing);
            record.timing = {{"build_seconds", result.build_seconds},
                             {"walk_seconds", result.walk_seconds}};
            records.push_back(std::move(record));
        }
    }
    return records;
}

MoeaRun build_moea_run(const TargetInfo& target, const PlanOptions& opts, int run_index) {
    const auto cameras = CameraModel::default_pair();
    const auto energy = EnergyParams::defaults_for(target.mesh);
    const auto grid = generate_candidate_waypoints(target.mesh, opts.discretization);
    const double spacing = default_snapshot_spacing(grid.wp_interval, cameras);

    std::vector<Genome> seeds;
    if (opts.ea.p_seeded > 0.0) {
        if (opts.seedpool.empty()) {
            const auto plans = circling_plans(target.mesh, grid, energy.safety_buffer);
            seeds.assign(plans.begin(), plans.end());
        } else {
            seeds = load_seedpool(opts.seedpool, target);
        }
    }

    EAConfig cfg = opts.ea;
    cfg.rng_seed = opts.seed + static_cast<std::uint64_t>(run_index);

    MoeaRun run;
    run.run_index = run_index;
    const auto t0 = clock_type::now();
    PlanEvaluator evaluator(target.mesh, grid, cameras, energy);
    const EvolutionResult result = opts.planner == "moead"
                                       ? evolve_moead(evaluator, seeds, opts.moead, cfg)
                                       : evolve_nsga2(evaluator, seeds, cfg);
    run.seconds = seconds_since(t0);
    run.log = result.log;
    run.evaluations = result.evaluations;
    run.generations = result.generations_run;

    nlohmann::json parameters;
    parameters["pop_size"] = cfg.pop_size;
    parameters["num_generations"] = cfg.num_generations;
    parameters["p_mutation"] = cfg.p_mutation;
    parameters["p_crossover"] = cfg.p_crossover;
    parameters["p_seeded"] = cfg.p_seeded;
    parameters["min_init_size"] = cfg.min_init_size;
    parameters["max_init_size"] = cfg.max_init_size;
    parameters["tournament_size"] = cfg.tournament_size;
    parameters["eval_budget"] = cfg.eval_budget;
    parameters["seed_pool_size"] = seeds.size();
    parameters["discretization"] = discretization_json(opts.discretization);
    parameters["snapshot_spacing"] = spacing;
    if (opts.planner == "moead") {
        parameters["n_subproblems"] = opts.moead.n_subproblems;
        parameters["neighborhood_size"] = opts.moead.neighborhood_size;
        parameters["delta"] = opts.moead.delta;
        parameters["replacement_limit"] = opts.moead.replacement_limit;
        parameters["scalarizer"] = "tchebycheff";
        parameters["moead_eval_budget"] = opts.moead.eval_budget;
    }

    const std::string run_id = opts.planner + "_run" + std::to_string(run_index);
    for (std::size_t i = 0; i < result.population.size(); ++i) {
        PlanRecord record;
        record.planner = opts.planner;
        record.plan_id = "run" + std::to_string(run_index) + "_ind" + std::to_string(i);
        record.mesh_source = target.canonical;
        record.waypoint_ids = result.population[i];
        record.parameters = parameters;
        record.parameters["run"] = run_index;
        record.provenance =
            provenance_json(record.parameters, target.canonical, cfg.rng_seed, run_id);
        attach_evaluation(record, target.mesh, resolve_plan(result.population[i], grid), cameras,
                          energy, spacing);
        record.timing = {{"run_seconds", run.seconds},
                         {"evaluations", run.evaluations},
                         {"generations", run.generations}};
        run.records.push_back(std::move(record));
    }
    return run;
}

void write_seedpool(const std::filesystem::path& file, const TargetInfo& target,
                    const DiscretizationParams& discretization,
                    const std::vector<InspectionPlan>& genomes) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["mesh"] = {{"source", target.canonical}, {"content_hash", target.mesh.content_hash()}};
    j["discretization"] = discretization_json(discretization);
    j["genomes"] = genomes;
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InvalidInputError("cannot open for writing: " + tmp);
        out << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, file);
}

std::vector<Genome> load_seedpool(const std::filesystem::path& file, const TargetInfo& target) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open seed pool: " + file.string());
    nlohmann::json j;
    in >> j;
    if (j.value("schema_version", 0) != 1)
        throw SchemaMismatchError("unsupported seed pool schema");
    if (j.at("mesh").at("content_hash").get<std::uint64_t>() != target.mesh.content_hash())
        throw InvalidInputError("seed pool was generated for a different mesh");
    return j.at("genomes").get<std::vector<Genome>>();
}

namespace {

std::string run_provenance(const std::vector<PlanRecord>& records) {
    if (records.empty()) return std::string(kToolVersion);
    const auto& p = records.front().provenance;
    std::ostringstream out;
    out << "config_hash=" << p.value("config_hash", 0ull) << " rng_seed=" << p.value("rng_seed", 0ull)
        << " tool=" << p.value("tool", std::string(kToolVersion));
    return out.str();
}

void write_run_outputs(const std::filesystem::path& dir, const std::vector<PlanRecord>& records) {
    std::filesystem::create_directories(dir);
    std::vector<LabeledPoint> rows;
    for (const auto& record : records) {
        write_plan_record(dir / ("plan_" + record.plan_id + ".json"), record);
        rows.push_back({record.planner + "/" + record.plan_id, 0, record.fitness.coverage_score,
                        record.fitness.energy});
    }
    write_front_csv(dir / "plans.csv", rows, run_provenance(records));
}

}  // namespace

int cmd_plan(const PlanOptions& opts) {
    try {
        const auto target = make_target(opts.target);

        if (opts.planner == "circling") {
            write_run_outputs(opts.out, build_circling_records(target, opts.discretization));
            return 0;
        }
        if (opts.planner == "sampling") {
            std::vector<SamplingRunResult> raw;
            const auto records = build_sampling_records(target, opts, &raw);
            write_run_outputs(opts.out, records);
            int failures = 0;
            for (const auto& r : raw) {
                if (r.success) continue;
                ++failures;
                nlohmann::json diag;
                diag["f"] = r.f;
                diag["repetition"] = r.repetition;
                diag["error"] = r.error;
                diag["best_fraction"] = r.best_fraction;
                std::ostringstream name;
                name << "diagnostics_f" << r.f << "_rep" << r.repetition << ".json";
                std::ofstream out(opts.out / name.str());
                out << diag.dump(2) << "\n";
                std::cerr << "sampling failed at f=" << r.f << " rep=" << r.repetition << ": "
                          << r.error << "\n";
            }
            return records.empty() && failures > 0 ? 1 : 0;
        }
        if (opts.planner == "nsga2" || opts.planner == "moead") {
            std::vector<MoeaRun> runs(static_cast<std::size_t>(opts.repetitions));
            run_pool(opts.repetitions, opts.threads,
                     [&](int rep) { runs[static_cast<std::size_t>(rep)] =
                                        build_moea_run(target, opts, rep); });
            std::filesystem::create_directories(opts.out);
            std::vector<PlanRecord> all;
            for (const auto& run : runs) {
                write_eval_log_csv(
                    opts.out / ("run" + std::to_string(run.run_index) + "_evals.csv"), run.log,
                    run_provenance(run.records));
                all.insert(all.end(), run.records.begin(), run.records.end());
            }
            write_run_outputs(opts.out, all);
            return 0;
        }
        std::cerr << "unknown planner '" << opts.planner << "'\n";
        return 2;
    } catch (const InvalidInputError& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "planner failure: " << err.what() << "\n";
        return 1;
    }
}

int cmd_evaluate(const std::filesystem::path& plan_file, const std::string& target_spec,
                 const std::filesystem::path& out) {
    try {
        const auto record = read_plan_record(plan_file);
        const auto target = make_target(target_spec);
        if (record.mesh_hash != target.mesh.content_hash()) {
            std::cerr << "plan was generated for a different mesh (content hash mismatch)\n";
            return 2;
        }

        const auto cameras = CameraModel::default_pair();
        const auto energy = EnergyParams::defaults_for(target.mesh);
        const double spacing = record.parameters.value(
            "snapshot_spacing",
            default_snapshot_spacing(compute_wp_interval(target.mesh, 4.0, 1000.0), cameras));

        const auto eval = evaluate_path(target.mesh, record.positions, cameras, energy, spacing);
        std::cout << "coverage_score " << eval.coverage.coverage_score << "\n";
        std::cout << "energy " << eval.energy.energy << "\n";
        std::cout << "covered " << eval.coverage.covered_ids.size() << "/"
                  << target.mesh.triangle_count() << " triangles\n";

        std::filesystem::create_directories(out);
        std::vector<std::array<std::uint8_t, 3>> colors(
            target.mesh.triangle_count(), {25, 230, 230});  // cyan: not inspected
        for (int id : eval.coverage.covered_ids) {
            colors[static_cast<std::size_t>(id)] = {230, 25, 25};  // red: inspected
        }
        const auto ply = out / (plan_file.stem().string() + "_coverage.ply");
        save_ply(ply, target.mesh, colors);
        std::cout << "wrote " << ply.string() << "\n";

        const bool consistent =
            std::abs(eval.coverage.coverage_score - record.fitness.coverage_score) <= 1e-9 &&
            std::abs(eval.energy.energy - record.fitness.energy) <= 1e-9;
        if (!consistent) {
            std::cerr << "stored fitness (" << record.fitness.coverage_score << ", "
                      << record.fitness.energy << ") does not reproduce\n";
            return 1;
        }
        return 0;
    } catch (const SchemaMismatchError& err) {
        std::cerr << "schema error: " << err.what() << "\n";
        return 2;
    } catch (const InvalidInputError& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "failure: " << err.what() << "\n";
        return 1;
    }
}

namespace {

std::vector<EvalRecord> read_eval_log_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::vector<EvalRecord> log;
    std::string line;
    std::getline(in, line);                               // provenance or header
    if (!line.empty() && line[0] == '#') std::getline(in, line);  // header
    while (std::getline(in, line)) {
        EvalRecord rec;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        rec.generation = std::stoi(field);
        std::getline(row, field, ',');
        rec.genome_length = static_cast<std::size_t>(std::stoul(field));
        std::getline(row, field, ',');
        rec.coverage_score = std::stod(field);
        std::getline(row, field, ',');
        rec.energy = std::stod(field);
        log.push_back(rec);
    }
    return log;
}

}  // namespace

int cmd_compare(const std::vector<std::filesystem::path>& run_dirs,
                const std::filesystem::path& out) {
    try {
        struct Loaded {
            std::filesystem::path dir;
            std::vector<PlanRecord> records;
            std::vector<std::vector<EvalRecord>> eval_logs;
        };
        std::vector<Loaded> inputs;
        std::uint64_t mesh_hash = 0;
        bool first = true;

        for (const auto& dir : run_dirs) {
            Loaded loaded;
            loaded.dir = dir;
            for (const auto& entry : std::filesystem::directory_iterator(dir)) {
                const auto name = entry.path().filename().string();
                if (name.rfind("plan_", 0) == 0 && entry.path().extension() == ".json")
                    loaded.records.push_back(read_plan_record(entry.path()));
                if (name.rfind("run", 0) == 0 && name.find("_evals.csv") != std::string::npos)
                    loaded.eval_logs.push_back(read_eval_log_csv(entry.path()));
            }
            if (loaded.records.empty())
                throw InvalidInputError("no plan records in " + dir.string());
            for (const auto& record : loaded.records) {
                if (first) {
                    mesh_hash = record.mesh_hash;
                    first = false;
                } else if (record.mesh_hash != mesh_hash) {
                    std::cerr << "refusing to compare runs on different meshes\n";
                    return 2;
                }
            }
            inputs.push_back(std::move(loaded));
        }

        std::filesystem::create_directories(out);

        // Combined fitness table and the shared reference point.
        std::vector<LabeledPoint> combined;
        std::vector<FrontPoint> all_points;
        std::map<std::string, std::map<std::string, std::vector<FrontPoint>>> by_planner_run;
        for (const auto& input : inputs) {
            for (const auto& record : input.records) {
                const std::string run_id = record.provenance.value("run_id", record.planner);
                combined.push_back({record.planner + "/" + record.plan_id, 0,
                                    record.fitness.coverage_score, record.fitness.energy});
                const FrontPoint point{record.fitness.coverage_score, record.fitness.energy,
                                       record.plan_id};
                all_points.push_back(point);
                by_planner_run[record.planner][run_id].push_back(point);
            }
        }
        std::ostringstream prov_line;
        prov_line << "mesh_hash=" << mesh_hash << " tool=" << kToolVersion;
        const std::string prov = prov_line.str();
        write_front_csv(out / "combined.csv", combined, prov);
        const auto ref = choose_reference_point(all_points);

        std::ofstream hv_out(out / "hypervolumes.csv");
        hv_out << "# " << prov << "\n";
        hv_out << "planner,run_id,hypervolume\n";
        std::cout << "reference point: coverage " << ref.coverage_ref << ", energy "
                  << ref.energy_ref << "\n";
        for (const auto& [planner, runs] : by_planner_run) {
            std::vector<FrontPoint> planner_points;
            std::vector<std::vector<FrontPoint>> run_sets;
            for (const auto& [run_id, points] : runs) {
                planner_points.insert(planner_points.end(), points.begin(), points.end());
                run_sets.push_back(points);
                hv_out << planner << "," << run_id << "," << hypervolume_2d(points, ref) << "\n";
            }
            const double hv = hypervolume_2d(planner_points, ref);
            hv_out << planner << ",all," << hv << "\n";
            std::cout << planner << ": " << planner_points.size() << " plans, hypervolume " << hv
                      << "\n";

            std::vector<LabeledPoint> front_rows;
            for (const auto& p : pareto_filter(planner_points))
                front_rows.push_back({planner, 0, p.coverage_score, p.energy});
            write_front_csv(out / ("front_" + planner + ".csv"), front_rows, prov);
            write_surfaces_csv(out / ("surfaces_" + planner + ".csv"),
                               attainment_surfaces(run_sets), prov);
        }

        // Fig-9-style hypervolume growth: one treatment per input directory
        // that carries evaluation logs.
        std::ofstream growth(out / "hv_by_generation.csv");
        growth << "# " << prov << "\n";
        growth << "treatment,generation,median_hv,stddev\n";
        for (const auto& input : inputs) {
            if (input.eval_logs.empty()) continue;
            int max_gen = 0;
            for (const auto& log : input.eval_logs)
                for (const auto& rec : log) max_gen = std::max(max_gen, rec.generation);
            std::vector<std::vector<double>> per_run;
            for (const auto& log : input.eval_logs)
                per_run.push_back(archive_hypervolume_by_generation(log, ref, max_gen));
            for (int gen = 0; gen <= max_gen; ++gen) {
                std::vector<double> values;
                for (const auto& series : per_run) values.push_back(series[gen]);
                std::sort(values.begin(), values.end());
                const double median = values[(values.size() - 1) / 2];
                double mean = 0.0;
                for (double v : values) mean += v;
                mean /= values.size();
                double var = 0.0;
                for (double v : values) var += (v - mean) * (v - mean);
                const double dev = values.size() > 1 ? std::sqrt(var / (values.size() - 1)) : 0.0;
                growth << input.dir.filename().string() << "," << gen << "," << median << ","
                       << dev << "\n";
            }
        }
        return 0;
    } catch (const InvalidInputError& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "failure: " << err.what() << "\n";
        return 1;
    }
}

int cmd_seedpool(const std::string& target_spec, const std::filesystem::path& out_file,
                 const DiscretizationParams& discretization) {
    try {
        const auto target = make_target(target_spec);
        const auto grid = generate_candidate_waypoints(target.mesh, discretization);
        const auto energy = EnergyParams::defaults_for(target.mesh);
        const auto plans = circling_plans(target.mesh, grid, energy.safety_buffer);
        write_seedpool(out_file, target, discretization, plans);
        std::cout << "wrote " << plans.size() << " seed plans to " << out_file.string() << "\n";
        return 0;
    } catch (const InvalidInputError& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "failure: " << err.what() << "\n";
        return 1;
    }
}

int cmd_gen_target(const std::string& style, double radius, int triangles,
                   const std::filesystem::path& out_file) {
    try {
        TargetInfo target;
        if (style == "sphere") {
            std::ostringstream spec;
            spec << "sphere:r=" << radius << ",tris=" << triangles;
            target = make_target(spec.str());
        } else {
            target = make_target(style);
        }
        save_ply(out_file, target.mesh);
        std::cout << "wrote " << out_file.string() << ": " << target.mesh.triangle_count()
                  << " triangles, total area " << target.mesh.total_area() << " m^2";
        if (target.hidden_area_fraction > 0.0)
            std::cout << ", hidden area fraction " << target.hidden_area_fraction;
        std::cout << "\n";
        return 0;
    } catch (const InvalidInputError& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "failure: " << err.what() << "\n";
        return 1;
    }
}

}  // namespace coverplan::harness
