// Experiment orchestration behind the CLI: run planners with seeded
// reproducibility, persist plan records and CSV logs, re-evaluate stored
// plans, and compare planner families on a shared target.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "coverplan/circling.hpp"
#include "coverplan/moea.hpp"
#include "coverplan/records.hpp"
#include "coverplan/sampling.hpp"
#include "coverplan/targets.hpp"

namespace coverplan::harness {

struct PlanOptions {
    std::string target;
    std::string planner;  // circling | sampling | nsga2 | moead
    std::filesystem::path out{"runs"};
    std::uint64_t seed{0};
    int repetitions{1};
    int threads{1};
    DiscretizationParams discretization;

    // sampling
    double f_min{0.1};
    double f_max{1.0};
    int f_steps{1};
    double epsilon{0.05};
    int k_neighbors{5};
    int max_stall{500};

    // evolutionary
    EAConfig ea;
    MOEADConfig moead;
    std::filesystem::path seedpool;
};

// One evolutionary run's outputs.
struct MoeaRun {
    int run_index{0};
    std::vector<PlanRecord> records;  // final population
    std::vector<EvalRecord> log;
    std::int64_t evaluations{0};
    int generations{0};
    double seconds{0.0};
};

std::vector<PlanRecord> build_circling_records(const TargetInfo& target,
                                               const DiscretizationParams& discretization);

std::vector<PlanRecord> build_sampling_records(const TargetInfo& target, const PlanOptions& opts,
                                               std::vector<SamplingRunResult>* raw = nullptr);

MoeaRun build_moea_run(const TargetInfo& target, const PlanOptions& opts, int run_index);

// Seed pools: all circling plans for a target.
void write_seedpool(const std::filesystem::path& file, const TargetInfo& target,
                    const DiscretizationParams& discretization,
                    const std::vector<InspectionPlan>& genomes);
std::vector<Genome> load_seedpool(const std::filesystem::path& file, const TargetInfo& target);

// Worker pool; threads <= 1 runs inline. Tasks must be independent.
void run_pool(int count, int threads, const std::function<void(int)>& task);

int cmd_plan(const PlanOptions& opts);
int cmd_evaluate(const std::filesystem::path& plan_file, const std::string& target,
                 const std::filesystem::path& out);
int cmd_compare(const std::vector<std::filesystem::path>& run_dirs,
                const std::filesystem::path& out);
int cmd_seedpool(const std::string& target, const std::filesystem::path& out_file,
                 const DiscretizationParams& discretization);
int cmd_gen_target(const std::string& style, double radius, int triangles,
                   const std::filesystem::path& out_file);

}  // namespace coverplan::harness
