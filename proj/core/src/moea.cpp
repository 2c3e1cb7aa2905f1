#include "coverplan/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coverplan/errors.hpp"

namespace coverplan {

std::vector<Genome> initialize_population(const WaypointGrid& grid,
                                          const std::vector<Genome>& seeds, const EAConfig& cfg,
                                          Rng& rng) {
    if (cfg.pop_size < 2) throw InvalidInputError("pop_size must be >= 2");
    if (cfg.p_seeded > 0.0 && seeds.empty())
        throw InvalidInputError("p_seeded > 0 requires a non-empty seed pool");

    std::vector<Genome> population;
    population.reserve(static_cast<std::size_t>(cfg.pop_size));
    const std::int64_t max_id = static_cast<std::int64_t>(grid.size()) - 1;
    while (static_cast<int>(population.size()) < cfg.pop_size) {
        if (rng.bernoulli(cfg.p_seeded)) {
            population.push_back(seeds[rng.index(seeds.size())]);
        } else {
            const auto len = rng.uniform_int(cfg.min_init_size, cfg.max_init_size);
            Genome genome;
            genome.reserve(static_cast<std::size_t>(len));
            for (std::int64_t i = 0; i < len; ++i)
                genome.push_back(static_cast<int>(rng.uniform_int(0, max_id)));
            population.push_back(std::move(genome));
        }
    }
    return population;
}

std::pair<Genome, Genome> crossover(const Genome& parent_a, const Genome& parent_b,
                                    double p_crossover, Rng& rng) {
    if (!rng.bernoulli(p_crossover)) return {parent_a, parent_b};

    const auto cut_a = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(parent_a.size())));
    const auto cut_b = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(parent_b.size())));

    Genome child1(parent_a.begin(), parent_a.begin() + static_cast<std::ptrdiff_t>(cut_a));
    child1.insert(child1.end(), parent_b.begin() + static_cast<std::ptrdiff_t>(cut_b),
                  parent_b.end());
    Genome child2(parent_b.begin(), parent_b.begin() + static_cast<std::ptrdiff_t>(cut_b));
    child2.insert(child2.end(), parent_a.begin() + static_cast<std::ptrdiff_t>(cut_a),
                  parent_a.end());
    return {std::move(child1), std::move(child2)};
}

Genome mutate(const Genome& genome, const WaypointGrid& grid, double p_mutation, Rng& rng,
              MutationOp* applied) {
    if (applied) *applied = MutationOp::None;
    if (!rng.bernoulli(p_mutation)) return genome;

    Genome out = genome;
    const std::int64_t max_id = static_cast<std::int64_t>(grid.size()) - 1;
    const auto op = rng.uniform_int(0, 2);
    if (op == 0) {
        const auto pos = rng.uniform_int(0, static_cast<std::int64_t>(out.size()));
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos),
                   static_cast<int>(rng.uniform_int(0, max_id)));
        if (applied) *applied = MutationOp::Insert;
    } else if (op == 1) {
        if (applied) *applied = MutationOp::Delete;
        if (!out.empty()) {
            const auto pos = rng.uniform_int(0, static_cast<std::int64_t>(out.size()) - 1);
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
        }
    } else {
        if (applied) *applied = MutationOp::Replace;
        if (!out.empty()) {
            const auto pos = rng.uniform_int(0, static_cast<std::int64_t>(out.size()) - 1);
            out[static_cast<std::size_t>(pos)] = static_cast<int>(rng.uniform_int(0, max_id));
        }
    }
    return out;
}

std::vector<Fitness> objective_normalization(const std::vector<Fitness>& points) {
    if (points.empty()) throw InvalidInputError("nothing to normalize");
    Fitness lo = points.front(), hi = points.front();
    for (const auto& p : points) {
        lo.coverage_score = std::min(lo.coverage_score, p.coverage_score);
        lo.energy = std::min(lo.energy, p.energy);
        hi.coverage_score = std::max(hi.coverage_score, p.coverage_score);
        hi.energy = std::max(hi.energy, p.energy);
    }
    const double span_cov = hi.coverage_score - lo.coverage_score;
    const double span_energy = hi.energy - lo.energy;
    std::vector<Fitness> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back({span_cov > 0.0 ? (p.coverage_score - lo.coverage_score) / span_cov : 0.0,
                       span_energy > 0.0 ? (p.energy - lo.energy) / span_energy : 0.0});
    }
    return out;
}

std::vector<int> non_dominated_ranks(const std::vector<Fitness>& fitness) {
    const int n = static_cast<int>(fitness.size());
    std::vector<int> rank(n, -1);
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<int>> dominated_by(n);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (fitness_dominates(fitness[i], fitness[j])) dominated_by[i].push_back(j);
            else if (fitness_dominates(fitness[j], fitness[i])) ++domination_count[i];
        }
    }

    std::vector<int> current;
    for (int i = 0; i < n; ++i)
        if (domination_count[i] == 0) {
            rank[i] = 0;
            current.push_back(i);
        }
    int level = 0;
    while (!current.empty()) {
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated_by[i]) {
                if (--domination_count[j] == 0) {
                    rank[j] = level + 1;
                    next.push_back(j);
                }
            }
        }
        ++level;
        current = std::move(next);
    }
    return rank;
}

namespace {

// Crowding distance within one front (indices into `fitness`).
std::vector<double> crowding_distances(const std::vector<Fitness>& fitness,
                                       const std::vector<int>& front) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> crowd(front.size(), 0.0);
    if (front.size() <= 2) {
        std::fill(crowd.begin(), crowd.end(), kInf);
        return crowd;
    }

    for (int objective = 0; objective < 2; ++objective) {
        auto value = [&](int i) {
            return objective == 0 ? fitness[front[i]].coverage_score : fitness[front[i]].energy;
        };
        std::vector<int> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return value(a) < value(b); });
        crowd[order.front()] = kInf;
        crowd[order.back()] = kInf;
        const double span = value(order.back()) - value(order.front());
        if (span <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < order.size(); ++k)
            crowd[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / span;
    }
    return crowd;
}

struct RankedPopulation {
    std::vector<int> rank;
    std::vector<double> crowding;
};

RankedPopulation rank_population(const std::vector<Fitness>& fitness) {
    RankedPopulation ranked;
    ranked.rank = non_dominated_ranks(fitness);
    ranked.crowding.assign(fitness.size(), 0.0);

    const int max_rank = *std::max_element(ranked.rank.begin(), ranked.rank.end());
    for (int level = 0; level <= max_rank; ++level) {
        std::vector<int> front;
        for (int i = 0; i < static_cast<int>(fitness.size()); ++i)
            if (ranked.rank[i] == level) front.push_back(i);
        const auto crowd = crowding_distances(fitness, front);
        for (std::size_t k = 0; k < front.size(); ++k) ranked.crowding[front[k]] = crowd[k];
    }
    return ranked;
}

// Elitist survival: whole fronts first, the split front by crowding distance
// (stable in insertion order).
std::vector<int> nsga_select(const std::vector<Fitness>& fitness, int target) {
    const auto ranked = rank_population(fitness);

    std::vector<int> order(fitness.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (ranked.rank[a] != ranked.rank[b]) return ranked.rank[a] < ranked.rank[b];
        return ranked.crowding[a] > ranked.crowding[b];
    });
    order.resize(static_cast<std::size_t>(target));
    return order;
}

}  // namespace

EvolutionResult evolve_nsga2(PlanEvaluator& evaluator, const std::vector<Genome>& seeds,
                             const EAConfig& cfg) {
    Rng rng(cfg.rng_seed);
    EvolutionResult result;
    const std::int64_t evals_at_start = evaluator.evaluation_count();

    auto evaluate = [&](const Genome& genome, int generation) {
        const std::int64_t before = evaluator.evaluation_count();
        const Fitness fit = evaluator.evaluate(genome);
        if (evaluator.evaluation_count() > before)
            result.log.push_back({generation, genome.size(), fit.coverage_score, fit.energy});
        return fit;
    };
    auto budget_spent = [&]() {
        return cfg.eval_budget > 0 &&
               evaluator.evaluation_count() - evals_at_start >= cfg.eval_budget;
    };

    std::vector<Genome> population = initialize_population(evaluator.grid(), seeds, cfg, rng);
    std::vector<Fitness> fitness;
    fitness.reserve(population.size());
    for (const auto& genome : population) fitness.push_back(evaluate(genome, 0));

    for (int gen = 1; gen <= cfg.num_generations; ++gen) {
        if (budget_spent()) break;

        const auto ranked = rank_population(fitness);
        auto tournament = [&]() {
            int best = static_cast<int>(rng.index(population.size()));
            for (int t = 1; t < cfg.tournament_size; ++t) {
                const int challenger = static_cast<int>(rng.index(population.size()));
                if (ranked.rank[challenger] < ranked.rank[best] ||
                    (ranked.rank[challenger] == ranked.rank[best] &&
                     ranked.crowding[challenger] > ranked.crowding[best]))
                    best = challenger;
            }
            return best;
        };

        std::vector<int> selected;
        selected.reserve(population.size());
        for (std::size_t i = 0; i < population.size(); ++i) selected.push_back(tournament());

        std::vector<Genome> offspring;
        std::vector<Fitness> offspring_fitness;
        for (std::size_t i = 0; i < selected.size(); i += 2) {
            const int ia = selected[i];
            const int ib = selected[(i + 1) % selected.size()];
            auto [c1, c2] = crossover(population[ia], population[ib], cfg.p_crossover, rng);
            c1 = mutate(c1, evaluator.grid(), cfg.p_mutation, rng);
            c2 = mutate(c2, evaluator.grid(), cfg.p_mutation, rng);

            // Children untouched by variation keep the parent fitness and are
            // not re-evaluated.
            auto place = [&](Genome&& child, int pa, int pb) {
                if (child == population[pa]) offspring_fitness.push_back(fitness[pa]);
                else if (child == population[pb]) offspring_fitness.push_back(fitness[pb]);
                else offspring_fitness.push_back(evaluate(child, gen));
                offspring.push_back(std::move(child));
            };
            place(std::move(c1), ia, ib);
            if (offspring.size() < population.size()) place(std::move(c2), ib, ia);
        }

        std::vector<Genome> combined = population;
        std::vector<Fitness> combined_fitness = fitness;
        for (std::size_t i = 0; i < offspring.size(); ++i) {
            combined.push_back(std::move(offspring[i]));
            combined_fitness.push_back(offspring_fitness[i]);
        }

        const auto keep = nsga_select(combined_fitness, cfg.pop_size);
        population.clear();
        fitness.clear();
        for (int idx : keep) {
            population.push_back(std::move(combined[idx]));
            fitness.push_back(combined_fitness[idx]);
        }
        result.generations_run = gen;
    }

    result.population = std::move(population);
    result.fitness = std::move(fitness);
    result.evaluations = evaluator.evaluation_count() - evals_at_start;
    return result;
}

EvolutionResult evolve_moead(PlanEvaluator& evaluator, const std::vector<Genome>& seeds,
                             const MOEADConfig& cfg, const EAConfig& ea_cfg) {
    if (cfg.neighborhood_size > cfg.n_subproblems)
        throw InvalidInputError("neighborhood_size must be <= n_subproblems");
    if (cfg.delta < 0.0 || cfg.delta > 1.0) throw InvalidInputError("delta must be in [0, 1]");

    Rng rng(ea_cfg.rng_seed);
    EvolutionResult result;
    const std::int64_t evals_at_start = evaluator.evaluation_count();
    const int n = cfg.n_subproblems;

    auto evaluate = [&](const Genome& genome, int generation) {
        const std::int64_t before = evaluator.evaluation_count();
        const Fitness fit = evaluator.evaluate(genome);
        if (evaluator.evaluation_count() > before)
            result.log.push_back({generation, genome.size(), fit.coverage_score, fit.energy});
        return fit;
    };

    // Evenly spaced weight vectors and their index neighborhoods.
    std::vector<std::array<double, 2>> weights(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double w = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
        weights[static_cast<std::size_t>(i)] = {w, 1.0 - w};
    }
    std::vector<std::vector<int>> neighborhoods(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double da = std::abs(weights[a][0] - weights[i][0]);
            const double db = std::abs(weights[b][0] - weights[i][0]);
            return da < db;
        });
        order.resize(static_cast<std::size_t>(cfg.neighborhood_size));
        neighborhoods[static_cast<std::size_t>(i)] = std::move(order);
    }

    EAConfig init_cfg = ea_cfg;
    init_cfg.pop_size = n;
    std::vector<Genome> population = initialize_population(evaluator.grid(), seeds, init_cfg, rng);
    std::vector<Fitness> fitness;
    fitness.reserve(population.size());
    for (const auto& genome : population) fitness.push_back(evaluate(genome, 0));

    Fitness ideal = fitness.front();
    for (const auto& f : fitness) {
        ideal.coverage_score = std::min(ideal.coverage_score, f.coverage_score);
        ideal.energy = std::min(ideal.energy, f.energy);
    }
    // Tchebycheff on min-max-normalized objectives; the raw energy scale is
    // hundreds of units against a [0,1] coverage score and would otherwise
    // starve every coverage-leaning subproblem.
    Fitness nadir = fitness.front();
    auto update_nadir = [&]() {
        nadir = fitness.front();
        for (const auto& f : fitness) {
            nadir.coverage_score = std::max(nadir.coverage_score, f.coverage_score);
            nadir.energy = std::max(nadir.energy, f.energy);
        }
    };
    update_nadir();
    auto tchebycheff = [&](const Fitness& f, const std::array<double, 2>& w) {
        const double span_cov = nadir.coverage_score - ideal.coverage_score;
        const double span_energy = nadir.energy - ideal.energy;
        const double dev_cov =
            span_cov > 0.0 ? (f.coverage_score - ideal.coverage_score) / span_cov : 0.0;
        const double dev_energy = span_energy > 0.0 ? (f.energy - ideal.energy) / span_energy : 0.0;
        return std::max(w[0] * dev_cov, w[1] * dev_energy);
    };

    constexpr int kMaxGenerations = 100000;
    for (int gen = 1; gen <= kMaxGenerations; ++gen) {
        for (int i = 0; i < n; ++i) {
            const bool local = rng.bernoulli(cfg.delta);
            const std::vector<int>& base_pool = neighborhoods[static_cast<std::size_t>(i)];
            std::vector<int> global_pool;
            if (!local) {
                global_pool.resize(static_cast<std::size_t>(n));
                std::iota(global_pool.begin(), global_pool.end(), 0);
            }
            const std::vector<int>& pool = local ? base_pool : global_pool;

            const int pa = pool[rng.index(pool.size())];
            const int pb = pool[rng.index(pool.size())];
            auto [c1, c2] = crossover(population[pa], population[pb], ea_cfg.p_crossover, rng);
            Genome child = mutate(c1, evaluator.grid(), ea_cfg.p_mutation, rng);

            Fitness child_fit;
            if (child == population[pa]) child_fit = fitness[pa];
            else if (child == population[pb]) child_fit = fitness[pb];
            else child_fit = evaluate(child, gen);

            ideal.coverage_score = std::min(ideal.coverage_score, child_fit.coverage_score);
            ideal.energy = std::min(ideal.energy, child_fit.energy);
            nadir.coverage_score = std::max(nadir.coverage_score, child_fit.coverage_score);
            nadir.energy = std::max(nadir.energy, child_fit.energy);

            // Replace up to replacement_limit members of the mating scope, in
            // random order.
            std::vector<int> scan = pool;
            for (std::size_t k = scan.size(); k > 1; --k)
                std::swap(scan[k - 1], scan[rng.index(k)]);
            int replaced = 0;
            for (int j : scan) {
                if (replaced >= cfg.replacement_limit) break;
                if (tchebycheff(child_fit, weights[static_cast<std::size_t>(j)]) <=
                    tchebycheff(fitness[static_cast<std::size_t>(j)],
                                weights[static_cast<std::size_t>(j)])) {
                    population[static_cast<std::size_t>(j)] = child;
                    fitness[static_cast<std::size_t>(j)] = child_fit;
                    ++replaced;
                }
            }
        }
        update_nadir();  // population turnover can shrink the spans
        result.generations_run = gen;
        if (cfg.eval_budget > 0 &&
            evaluator.evaluation_count() - evals_at_start >= cfg.eval_budget)
            break;
    }

    result.population = std::move(population);
    result.fitness = std::move(fitness);
    result.evaluations = evaluator.evaluation_count() - evals_at_start;
    return result;
}

std::vector<double> archive_hypervolume_by_generation(const std::vector<EvalRecord>& log,
                                                      const ReferencePoint& ref, int max_gen) {
    std::vector<double> out(static_cast<std::size_t>(max_gen) + 1, 0.0);
    ParetoArchive archive;
    std::size_t next = 0;
    auto by_generation = log;
    std::stable_sort(by_generation.begin(), by_generation.end(),
                     [](const EvalRecord& a, const EvalRecord& b) {
                         return a.generation < b.generation;
                     });
    for (int gen = 0; gen <= max_gen; ++gen) {
        while (next < by_generation.size() && by_generation[next].generation <= gen) {
            archive.insert({by_generation[next].coverage_score, by_generation[next].energy, ""});
            ++next;
        }
        std::vector<FrontPoint> in_range;
        for (const auto& p : archive.points()) {
            if (p.coverage_score <= ref.coverage_ref && p.energy <= ref.energy_ref)
                in_range.push_back(p);
        }
        out[static_cast<std::size_t>(gen)] = in_range.empty() ? 0.0 : hypervolume_2d(in_range, ref);
    }
    return out;
}

}  // namespace coverplan
