// Evolutionary plan optimization over variable-length waypoint-id genomes
// with two minimized objectives (coverage_score, energy): NSGA-II and a
// Tchebycheff-decomposition MOEA/D, both sharing the same variation
// operators and optional seeding from circling plans.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coverplan/evaluate.hpp"
#include "coverplan/metrics.hpp"
#include "coverplan/plan.hpp"
#include "coverplan/rng.hpp"

namespace coverplan {

using Genome = InspectionPlan;

struct EAConfig {
    int pop_size{40};
    int num_generations{400};
    double p_mutation{0.1};
    double p_crossover{0.1};
    double p_seeded{0.0};
    int min_init_size{2};
    int max_init_size{20};
    int tournament_size{2};
    std::uint64_t rng_seed{0};
    std::int64_t eval_budget{16040};  // 0 disables the cap
};

struct MOEADConfig {
    int n_subproblems{40};
    int neighborhood_size{10};
    double delta{0.8};
    int replacement_limit{2};
    std::int64_t eval_budget{3000};
};

struct EvalRecord {
    int generation{0};
    std::size_t genome_length{0};
    double coverage_score{0.0};
    double energy{0.0};
};

struct EvolutionResult {
    std::vector<Genome> population;
    std::vector<Fitness> fitness;
    std::vector<EvalRecord> log;  // one record per performed evaluation
    std::int64_t evaluations{0};
    int generations_run{0};
};

// a dominates b under minimization.
inline bool fitness_dominates(const Fitness& a, const Fitness& b) {
    return a.coverage_score <= b.coverage_score && a.energy <= b.energy &&
           (a.coverage_score < b.coverage_score || a.energy < b.energy);
}

// Each individual is a seed copy with probability p_seeded, otherwise a
// random genome of length uniform in [min_init_size, max_init_size].
std::vector<Genome> initialize_population(const WaypointGrid& grid,
                                          const std::vector<Genome>& seeds, const EAConfig& cfg,
                                          Rng& rng);

// One-point crossover with independent cut points in each parent, applied
// with probability p_crossover; otherwise the parents are copied through.
std::pair<Genome, Genome> crossover(const Genome& parent_a, const Genome& parent_b,
                                    double p_crossover, Rng& rng);

enum class MutationOp { None, Insert, Delete, Replace };

// With probability p_mutation applies one of insert/delete/replace at a
// random position (delete and replace are no-ops on an empty genome).
Genome mutate(const Genome& genome, const WaypointGrid& grid, double p_mutation, Rng& rng,
              MutationOp* applied = nullptr);

// Min-max normalization per objective; a constant objective maps to 0.
std::vector<Fitness> objective_normalization(const std::vector<Fitness>& points);

EvolutionResult evolve_nsga2(PlanEvaluator& evaluator, const std::vector<Genome>& seeds,
                             const EAConfig& cfg);

EvolutionResult evolve_moead(PlanEvaluator& evaluator, const std::vector<Genome>& seeds,
                             const MOEADConfig& cfg, const EAConfig& ea_cfg);

// Exposed for tests: non-dominated rank per individual (0 = best front).
std::vector<int> non_dominated_ranks(const std::vector<Fitness>& fitness);

// Hypervolume of the cumulative non-dominated archive after each generation
// 0..max_gen (non-decreasing for a fixed reference point). Points beyond the
// reference contribute nothing.
std::vector<double> archive_hypervolume_by_generation(const std::vector<EvalRecord>& log,
                                                      const ReferencePoint& ref, int max_gen);

}  // namespace coverplan
