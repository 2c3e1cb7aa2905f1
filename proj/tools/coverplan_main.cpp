// coverplan: generate, evaluate and compare 3D inspection plans.
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harness.hpp"

int main(int argc, char** argv) {
    using namespace coverplan;
    CLI::App app{"Coverage path planning toolkit for triangular-mesh inspection targets"};
    app.require_subcommand(1);

    const char* env_out = std::getenv("COVERPLAN_OUT");

    harness::PlanOptions opts;
    if (env_out) opts.out = env_out;

    auto add_common = [&](CLI::App* cmd) {
        cmd->set_config("--config", "", "Read options from an INI/TOML config file");
        cmd->add_option("--target", opts.target, "Mesh file or generator spec")->required();
        cmd->add_option("--pad", opts.discretization.pad, "Padding around the bounding box [m]");
        cmd->add_option("--buffer", opts.discretization.buffer,
                        "Minimum waypoint distance to the structure [m]");
        cmd->add_option("--volume-scaling", opts.discretization.volume_scaling,
                        "Waypoint density constant");
    };

    // plan
    auto* plan = app.add_subcommand("plan", "Run a planner and write plan records");
    add_common(plan);
    plan->add_option("--planner", opts.planner, "circling | sampling | nsga2 | moead")
        ->required();
    plan->add_option("--out", opts.out, "Output directory");
    plan->add_option("--seed", opts.seed, "Master random seed");
    plan->add_option("--repetitions", opts.repetitions, "Independent runs");
    plan->add_option("--threads", opts.threads, "Worker pool size for repetitions");
    plan->add_option("--f-min", opts.f_min, "Sampling: lowest coverage threshold");
    plan->add_option("--f-max", opts.f_max, "Sampling: highest coverage threshold");
    plan->add_option("--f-steps", opts.f_steps, "Sampling: number of f values");
    plan->add_option("--epsilon", opts.epsilon, "Sampling: targeted-phase tail fraction");
    plan->add_option("--k-neighbors", opts.k_neighbors, "Sampling: neighbor connections");
    plan->add_option("--max-stall", opts.max_stall,
                     "Sampling: stall iterations before giving up");
    plan->add_option("--pop-size", opts.ea.pop_size, "EA population size");
    plan->add_option("--generations", opts.ea.num_generations, "EA generations");
    plan->add_option("--p-mutation", opts.ea.p_mutation, "EA mutation probability");
    plan->add_option("--p-crossover", opts.ea.p_crossover, "EA crossover probability");
    plan->add_option("--p-seeded", opts.ea.p_seeded, "Share of seeded initial individuals");
    plan->add_option("--eval-budget", opts.ea.eval_budget, "Max fitness evaluations (0 = none)");
    plan->add_option("--seedpool", opts.seedpool, "Seed pool file (default: fresh circling)");
    plan->add_option("--subproblems", opts.moead.n_subproblems, "MOEA/D subproblem count");
    plan->add_option("--neighborhood", opts.moead.neighborhood_size, "MOEA/D neighborhood size");
    plan->add_option("--delta", opts.moead.delta, "MOEA/D neighborhood mating probability");
    plan->add_option("--replacement-limit", opts.moead.replacement_limit,
                     "MOEA/D replacement limit");
    plan->add_option("--moead-eval-budget", opts.moead.eval_budget,
                     "MOEA/D target evaluations");

    // evaluate
    std::string eval_target;
    std::filesystem::path eval_plan, eval_out = env_out ? env_out : "eval";
    auto* evaluate = app.add_subcommand("evaluate", "Re-evaluate a stored plan record");
    evaluate->add_option("--plan", eval_plan, "Plan record JSON")->required();
    evaluate->add_option("--target", eval_target, "Mesh file or generator spec")->required();
    evaluate->add_option("--out", eval_out, "Output directory for the colored mesh");

    // compare
    std::vector<std::filesystem::path> compare_dirs;
    std::filesystem::path compare_out = env_out ? env_out : "comparison";
    auto* compare = app.add_subcommand("compare", "Combine runs into fronts and hypervolumes");
    compare->add_option("--runs", compare_dirs, "Run directories produced by 'plan'")
        ->required()
        ->expected(-1);
    compare->add_option("--out", compare_out, "Output directory");

    // seedpool
    std::string pool_target;
    std::filesystem::path pool_out = "seedpool.json";
    DiscretizationParams pool_disc;
    auto* seedpool = app.add_subcommand("seedpool", "Write circling plans as an EA seed pool");
    seedpool->add_option("--target", pool_target, "Mesh file or generator spec")->required();
    seedpool->add_option("--out", pool_out, "Seed pool file");
    seedpool->add_option("--pad", pool_disc.pad, "Padding around the bounding box [m]");
    seedpool->add_option("--buffer", pool_disc.buffer, "Minimum waypoint distance [m]");
    seedpool->add_option("--volume-scaling", pool_disc.volume_scaling,
                         "Waypoint density constant");

    // gen-target
    std::string gen_style = "sphere";
    double gen_radius = 10.0;
    int gen_triangles = 960;
    std::filesystem::path gen_out = "target.ply";
    auto* gen = app.add_subcommand("gen-target", "Write a procedural inspection target");
    gen->add_option("--style", gen_style, "sphere | nested-box | channel-block");
    gen->add_option("--radius", gen_radius, "Sphere radius [m]");
    gen->add_option("--triangles", gen_triangles, "Sphere triangle budget");
    gen->add_option("--out", gen_out, "Output mesh (PLY)");

    CLI11_PARSE(app, argc, argv);

    if (plan->parsed()) return harness::cmd_plan(opts);
    if (evaluate->parsed()) return harness::cmd_evaluate(eval_plan, eval_target, eval_out);
    if (compare->parsed()) return harness::cmd_compare(compare_dirs, compare_out);
    if (seedpool->parsed()) return harness::cmd_seedpool(pool_target, pool_out, pool_disc);
    if (gen->parsed()) return harness::cmd_gen_target(gen_style, gen_radius, gen_triangles, gen_out);
    return 2;
}
