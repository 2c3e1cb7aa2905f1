// Acceptance suite: one pass/fail line per criterion, covering analytic unit
// values, oracle equivalence, and the qualitative cross-planner trends on
// desk-scale targets. Exits nonzero when any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "coverplan/circling.hpp"
#include "coverplan/errors.hpp"
#include "coverplan/moea.hpp"
#include "coverplan/records.hpp"
#include "coverplan/sampling.hpp"
#include "coverplan/targets.hpp"
#include "harness.hpp"
#include "oracles.hpp"

using namespace coverplan;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Shared {
    TargetInfo sphere = make_target("sphere:r=10,tris=960");
    TargetInfo nested = make_target("nested-box");
    std::vector<CameraModel> cameras = CameraModel::default_pair();

    WaypointGrid sphere_grid;
    EnergyParams sphere_energy;
    EnergyParams nested_energy;

    std::vector<PlanRecord> sphere_circling;
    std::vector<harness::MoeaRun> sphere_seeded;       // 10 Table-3 seeded runs
    std::vector<harness::MoeaRun> nested_seeded;       // 10 x 100-generation runs
    std::vector<harness::MoeaRun> nested_unseeded;     // 10 x 100-generation runs
    std::vector<harness::MoeaRun> sphere_nsga_budget;  // 10 x 3000-evaluation runs
    std::vector<harness::MoeaRun> sphere_moead_budget;

    std::vector<const std::vector<EvalRecord>*> all_logs;  // for criterion 11

    Shared() {
        sphere_grid = generate_candidate_waypoints(sphere.mesh, {});
        sphere_energy = EnergyParams::defaults_for(sphere.mesh);
        nested_energy = EnergyParams::defaults_for(nested.mesh);
    }
};

harness::PlanOptions table_defaults(const std::string& target, const std::string& planner,
                                    std::uint64_t seed) {
    harness::PlanOptions opts;
    opts.target = target;
    opts.planner = planner;
    opts.seed = seed;
    return opts;
}

double best_energy_at(const std::vector<Fitness>& fits, double max_coverage) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : fits)
        if (f.coverage_score <= max_coverage) best = std::min(best, f.energy);
    return best;
}

std::vector<Fitness> record_fitness(const std::vector<PlanRecord>& records) {
    std::vector<Fitness> out;
    for (const auto& r : records) out.push_back(r.fitness);
    return out;
}

// --- criteria ---------------------------------------------------------------

void criterion_1_energy_units(Shared& shared) {
    WaypointGrid grid;
    grid.wp_interval = 1.0;
    for (int i = 0; i < 4; ++i) grid.waypoints.push_back({i, {}, {0, 0, 0}});
    auto far_box = generate_box({500, 500, 0}, {501, 501, 1});
    EnergyParams params;
    params.collision_penalty = 2.0;

    auto set_positions = [&grid](std::vector<Vec3> pts) {
        for (std::size_t i = 0; i < pts.size(); ++i) grid.waypoints[i].position = pts[i];
    };

    set_positions({{0, 0, 0}, {10, 0, 0}});
    const double e1 = plan_energy({0, 1}, grid, far_box, params).energy;
    set_positions({{0, 0, 0}, {10, 0, 0}, {10, 10, 0}});
    const double e2 = plan_energy({0, 1, 2}, grid, far_box, params).energy;
    set_positions({{0, 0, 0}, {5, 0, 0}});
    const double e3 = plan_energy({0, 1, 0}, grid, far_box, params).energy;

    const EnergyParams sphere_params = EnergyParams::defaults_for(shared.sphere.mesh);
    WaypointGrid through;
    through.wp_interval = 1.0;
    through.waypoints.push_back({0, {-15, 0, 0}, {0, 0, 0}});
    through.waypoints.push_back({1, {15, 0, 0}, {0, 0, 0}});
    const auto collide = plan_energy({0, 1}, through, shared.sphere.mesh, sphere_params);
    const double penalty_added = collide.energy - sphere_params.w_trans * 30.0;

    const bool pass = std::abs(e1 - 1.0) <= 1e-9 && std::abs(e2 - 3.0) <= 1e-9 &&
                      std::abs(e3 - 3.0) <= 1e-9 && collide.colliding_edges.size() == 1 &&
                      std::abs(penalty_added - 40.0) <= 1e-9;
    report(1, pass,
           "energy examples " + fmt2(e1) + "/" + fmt2(e2) + "/" + fmt2(e3) +
               " (want 1/3/3), sphere pass-through penalty " + fmt2(penalty_added) +
               " (want 40)");
}

void criterion_2_coverage_oracle(Shared& shared) {
    const auto mesh = generate_sphere(6.0, 180);
    const auto grid = generate_candidate_waypoints(mesh, {});
    const auto params = EnergyParams::defaults_for(mesh);
    const double spacing = default_snapshot_spacing(grid.wp_interval, shared.cameras);
    Rng rng(20240901);

    int mismatches = 0;
    for (int trial = 0; trial < 50; ++trial) {
        InspectionPlan plan;
        const int len = 3 + static_cast<int>(rng.index(4));
        for (int i = 0; i < len; ++i) plan.push_back(static_cast<int>(rng.index(grid.size())));

        const auto energy = plan_energy(plan, grid, mesh, params);
        const auto fast = plan_coverage(mesh, plan, grid, shared.cameras, energy.colliding_edges);
        const auto slow = oracle::path_coverage_scan(mesh, resolve_plan(plan, grid),
                                                     shared.cameras, spacing,
                                                     energy.colliding_edges);
        if (fast.covered_ids != slow) ++mismatches;
    }
    report(2, mismatches == 0,
           "covered sets vs no-acceleration oracle on 50 random plans, mismatches = " +
               std::to_string(mismatches));
}

void criterion_3_complete_coverage(Shared& shared) {
    const double circ_best = shared.sphere_circling.front().fitness.coverage_score;

    SamplingParams sp;
    sp.f = 1.0;
    sp.q0 = {13.0, 2.0, 1.0};
    sp.rng_seed = 11;
    bool sampling_ok = false;
    std::string sampling_note;
    try {
        SamplingPlanner planner(shared.sphere.mesh, sp, shared.cameras, shared.sphere_energy);
        planner.build();
        const auto walk = find_closed_walk(planner.graph(), shared.sphere.mesh, 0,
                                           shared.sphere_energy);
        std::set<int> covered;
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
            for (int ei : planner.graph().adjacency[walk[i]]) {
                const auto& e = planner.graph().edges[ei];
                if ((e.a == walk[i] && e.b == walk[i + 1]) ||
                    (e.b == walk[i] && e.a == walk[i + 1]))
                    covered.insert(e.covered.begin(), e.covered.end());
            }
        }
        std::size_t missing = 0;
        for (int id : planner.graph().observed)
            if (!covered.count(id)) ++missing;
        sampling_ok = missing == 0;
        sampling_note = "f=1.0 walk covers " +
                        std::to_string(planner.graph().observed.size() - missing) + "/" +
                        std::to_string(planner.graph().observed.size()) + " observed primitives";
    } catch (const std::exception& err) {
        sampling_note = std::string("sampling failed: ") + err.what();
    }

    double nsga_best = std::numeric_limits<double>::infinity();
    for (const auto& rec : shared.sphere_seeded.front().records)
        nsga_best = std::min(nsga_best, rec.fitness.coverage_score);

    const bool pass = circ_best <= 0.02 && sampling_ok && nsga_best <= 0.05;
    report(3, pass,
           "circling dz=1 score " + fmt2(circ_best) + " (<=0.02); " + sampling_note +
               "; seeded NSGA-II best score " + fmt2(nsga_best) + " (<=0.05)");
}

void criterion_4_efficiency_ordering(Shared& shared) {
    const double circ_best = best_energy_at(record_fitness(shared.sphere_circling), 0.05);
    int wins = 0;
    for (const auto& run : shared.sphere_seeded) {
        const double nsga_best = best_energy_at(record_fitness(run.records), 0.05);
        if (nsga_best < circ_best) ++wins;
    }
    report(4, wins >= 8,
           "seeded NSGA-II beats the best circling plan (" + fmt2(circ_best) +
               ") at <=0.05 coverage in " + std::to_string(wins) + "/10 runs (need >=8)");
}

void criterion_5_hidden_parts(Shared& shared) {
    const double h = shared.nested.hidden_area_fraction;

    std::vector<double> best_scores;
    const auto circ = harness::build_circling_records(shared.nested, {});
    double best = 2.0;
    for (const auto& r : circ) best = std::min(best, r.fitness.coverage_score);
    best_scores.push_back(best);

    SamplingParams sp;
    sp.f = 0.5;
    sp.q0 = {9.0, 0.0, 5.0};
    sp.rng_seed = 13;
    const auto sampling = run_sampling_planner(shared.nested.mesh, sp, shared.cameras,
                                               shared.nested_energy);
    best_scores.push_back(sampling.success ? sampling.fitness.coverage_score : 2.0);

    best = 2.0;
    for (const auto& run : shared.nested_seeded)
        for (const auto& rec : run.records) best = std::min(best, rec.fitness.coverage_score);
    best_scores.push_back(best);

    bool floors_hold = true;
    for (double s : best_scores) floors_hold = floors_hold && s >= h - 0.01;

    bool unreachable_detected = false;
    try {
        SamplingParams hard = sp;
        hard.f = 1.0 - h + 0.02;
        hard.max_stall_iterations = 200;
        SamplingPlanner planner(shared.nested.mesh, hard, shared.cameras, shared.nested_energy);
        planner.build();
    } catch (const UnreachableCoverageError&) {
        unreachable_detected = true;
    }

    report(5, floors_hold && unreachable_detected,
           "hidden fraction " + fmt2(h) + "; best scores circling/sampling/nsga2 = " +
               fmt2(best_scores[0]) + "/" + fmt2(best_scores[1]) + "/" + fmt2(best_scores[2]) +
               " (all >= " + fmt2(h - 0.01) + "); f > 1-h " +
               (unreachable_detected ? "raises unreachable-coverage" : "DID NOT raise"));
}

void criterion_6_seeding_benefit(Shared& shared) {
    std::vector<FrontPoint> all;
    for (const auto* runs : {&shared.nested_seeded, &shared.nested_unseeded})
        for (const auto& run : *runs)
            for (const auto& rec : run.log) all.push_back({rec.coverage_score, rec.energy, ""});
    const auto ref = choose_reference_point(all);

    auto medians = [&](const std::vector<harness::MoeaRun>& runs, int generation) {
        std::vector<double> values;
        for (const auto& run : runs) {
            const auto series = archive_hypervolume_by_generation(run.log, ref, 100);
            values.push_back(series[static_cast<std::size_t>(generation)]);
        }
        std::sort(values.begin(), values.end());
        return values[(values.size() - 1) / 2];
    };

    const double seeded_25 = medians(shared.nested_seeded, 25);
    const double unseeded_25 = medians(shared.nested_unseeded, 25);
    const double seeded_100 = medians(shared.nested_seeded, 100);
    const double unseeded_100 = medians(shared.nested_unseeded, 100);

    const bool pass = seeded_25 > unseeded_25 && seeded_100 >= unseeded_100;
    report(6, pass,
           "median archive HV seeded/unseeded: gen 25 " + fmt2(seeded_25) + " vs " +
               fmt2(unseeded_25) + " (strict), gen 100 " + fmt2(seeded_100) + " vs " +
               fmt2(unseeded_100));
}

void criterion_7_hypervolume(Shared&) {
    const double analytic = hypervolume_2d({{1, 2, ""}, {2, 1, ""}}, {3, 3});
    bool mc_ok = true;
    Rng rng(424242);
    Rng mc_rng(515151);
    double worst_rel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<FrontPoint> pts;
        const int n = 5 + static_cast<int>(rng.index(15));
        for (int i = 0; i < n; ++i)
            pts.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 60.0), ""});
        const auto ref = choose_reference_point(pts);
        const double exact = hypervolume_2d(pts, ref);
        const double estimate = oracle::hypervolume_mc(pts, ref, 1000000, mc_rng);
        const double rel = std::abs(exact - estimate) / std::max(exact, 1e-9);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 0.005) mc_ok = false;
    }
    report(7, analytic == 3.0 && mc_ok,
           "analytic case = " + fmt2(analytic) + " (want exactly 3); worst Monte-Carlo deviation " +
               fmt2(worst_rel * 100.0) + "% over 100 fronts (<=0.5%)");
}

void criterion_8_runtime_trend(Shared& shared) {
    const std::vector<double> fs{0.25, 0.5, 0.75, 0.95};
    std::vector<double> medians;
    std::string detail = "median sampling runtimes [s]:";
    Rng rng(606060);

    std::vector<Vec3> starts;
    for (int rep = 0; rep < 5; ++rep) {
        const Box3 bbox = shared.sphere.mesh.bbox();
        Vec3 q0;
        for (;;) {
            q0 = {rng.uniform(bbox.min.x - 10, bbox.max.x + 10),
                  rng.uniform(bbox.min.y - 10, bbox.max.y + 10),
                  rng.uniform(bbox.min.z, bbox.max.z + 10)};
            if (bbox.contains(q0)) continue;
            if (shared.sphere.mesh.distance_to_structure(q0) < 2.0) continue;
            break;
        }
        starts.push_back(q0);
    }

    for (double f : fs) {
        std::vector<double> times;
        for (int rep = 0; rep < 5; ++rep) {
            SamplingParams sp;
            sp.f = f;
            sp.q0 = starts[static_cast<std::size_t>(rep)];
            sp.rng_seed = 700 + static_cast<std::uint64_t>(rep);
            const auto result = run_sampling_planner(shared.sphere.mesh, sp, shared.cameras,
                                                     shared.sphere_energy);
            times.push_back(result.build_seconds + result.walk_seconds);
        }
        std::sort(times.begin(), times.end());
        medians.push_back(times[2]);
        detail += " " + fmt2(times[2]);
    }

    int inversions = 0;
    double worst_inversion = 0.0;
    for (std::size_t i = 1; i < medians.size(); ++i) {
        if (medians[i] < medians[i - 1]) {
            ++inversions;
            worst_inversion = std::max(worst_inversion,
                                       (medians[i - 1] - medians[i]) / medians[i - 1]);
        }
    }
    const bool pass = inversions == 0 || (inversions == 1 && worst_inversion <= 0.05);
    report(8, pass, detail + "; inversions " + std::to_string(inversions) + " (allow one <=5%)");
}

void criterion_9_moead_parity(Shared& shared) {
    std::vector<FrontPoint> all;
    for (const auto* runs : {&shared.sphere_nsga_budget, &shared.sphere_moead_budget})
        for (const auto& run : *runs)
            for (const auto& rec : run.records)
                all.push_back({rec.fitness.coverage_score, rec.fitness.energy, ""});
    const auto ref = choose_reference_point(all);

    auto median_hv = [&](const std::vector<harness::MoeaRun>& runs) {
        std::vector<double> values;
        for (const auto& run : runs) {
            std::vector<FrontPoint> pts;
            for (const auto& rec : run.records)
                pts.push_back({rec.fitness.coverage_score, rec.fitness.energy, ""});
            values.push_back(hypervolume_2d(pts, ref));
        }
        std::sort(values.begin(), values.end());
        return values[(values.size() - 1) / 2];
    };

    const double nsga = median_hv(shared.sphere_nsga_budget);
    const double moead = median_hv(shared.sphere_moead_budget);
    const bool pass = std::abs(nsga - moead) <= 0.10 * std::max(nsga, moead);
    report(9, pass,
           "median final hypervolume NSGA-II " + fmt2(nsga) + " vs MOEA/D " + fmt2(moead) +
               " (within 10%)");
}

void criterion_10_determinism(Shared& shared) {
    auto dump_all = [](const std::vector<PlanRecord>& records) {
        std::string out;
        for (const auto& r : records) out += plan_record_to_json(r, false).dump();
        return out;
    };

    const auto circ_a = harness::build_circling_records(shared.sphere, {});
    const auto circ_b = harness::build_circling_records(shared.sphere, {});
    const bool circ_ok = dump_all(circ_a) == dump_all(circ_b);

    auto opts = table_defaults("sphere:r=10,tris=960", "sampling", 21);
    opts.f_min = opts.f_max = 0.6;
    opts.f_steps = 1;
    const auto samp_a = harness::build_sampling_records(shared.sphere, opts);
    const auto samp_b = harness::build_sampling_records(shared.sphere, opts);
    const bool samp_ok = !samp_a.empty() && dump_all(samp_a) == dump_all(samp_b);

    auto nsga_opts = table_defaults("nested-box", "nsga2", 22);
    nsga_opts.ea.num_generations = 40;
    nsga_opts.ea.p_seeded = 0.35;
    const auto nsga_a = harness::build_moea_run(shared.nested, nsga_opts, 0);
    const auto nsga_b = harness::build_moea_run(shared.nested, nsga_opts, 0);
    const bool nsga_ok = dump_all(nsga_a.records) == dump_all(nsga_b.records);

    auto moead_opts = table_defaults("nested-box", "moead", 23);
    moead_opts.moead.eval_budget = 300;
    const auto moead_a = harness::build_moea_run(shared.nested, moead_opts, 0);
    const auto moead_b = harness::build_moea_run(shared.nested, moead_opts, 0);
    const bool moead_ok = dump_all(moead_a.records) == dump_all(moead_b.records);

    report(10, circ_ok && samp_ok && nsga_ok && moead_ok,
           std::string("byte-identical reruns: circling ") + (circ_ok ? "yes" : "NO") +
               ", sampling " + (samp_ok ? "yes" : "NO") + ", nsga2 " + (nsga_ok ? "yes" : "NO") +
               ", moead " + (moead_ok ? "yes" : "NO"));
}

void criterion_11_archive_monotonicity(Shared& shared) {
    int checked = 0;
    int violations = 0;
    for (const auto* log : shared.all_logs) {
        if (log->empty()) continue;
        std::vector<FrontPoint> pts;
        int max_gen = 0;
        for (const auto& rec : *log) {
            pts.push_back({rec.coverage_score, rec.energy, ""});
            max_gen = std::max(max_gen, rec.generation);
        }
        const auto ref = choose_reference_point(pts);
        const auto series = archive_hypervolume_by_generation(*log, ref, max_gen);
        for (std::size_t g = 1; g < series.size(); ++g)
            if (series[g] < series[g - 1] - 1e-9) ++violations;
        ++checked;
    }
    report(11, violations == 0 && checked > 0,
           "archive hypervolume non-decreasing in " + std::to_string(checked) +
               " evolutionary runs, violations = " + std::to_string(violations));
}

}  // namespace

int main() {
    Shared shared;
    std::printf("acceptance: sphere %zu triangles, %zu waypoints; nested box hidden fraction %s\n",
                shared.sphere.mesh.triangle_count(), shared.sphere_grid.size(),
                fmt2(shared.nested.hidden_area_fraction).c_str());

    shared.sphere_circling = harness::build_circling_records(shared.sphere, {});

    for (int run = 0; run < 10; ++run) {
        auto opts = table_defaults("sphere:r=10,tris=960", "nsga2", 1000);
        opts.ea.p_seeded = 0.35;  // seeded configuration, all other knobs default
        shared.sphere_seeded.push_back(harness::build_moea_run(shared.sphere, opts, run));
    }
    for (int run = 0; run < 10; ++run) {
        auto opts = table_defaults("nested-box", "nsga2", 2000);
        opts.ea.p_seeded = 0.35;
        opts.ea.num_generations = 100;
        shared.nested_seeded.push_back(harness::build_moea_run(shared.nested, opts, run));
    }
    for (int run = 0; run < 10; ++run) {
        auto opts = table_defaults("nested-box", "nsga2", 3000);
        opts.ea.p_seeded = 0.0;
        opts.ea.num_generations = 100;
        shared.nested_unseeded.push_back(harness::build_moea_run(shared.nested, opts, run));
    }
    for (int run = 0; run < 10; ++run) {
        auto opts = table_defaults("sphere:r=10,tris=960", "nsga2", 4000);
        opts.ea.eval_budget = 3000;
        shared.sphere_nsga_budget.push_back(harness::build_moea_run(shared.sphere, opts, run));
    }
    for (int run = 0; run < 10; ++run) {
        auto opts = table_defaults("sphere:r=10,tris=960", "moead", 5000);
        opts.moead.eval_budget = 3000;
        shared.sphere_moead_budget.push_back(harness::build_moea_run(shared.sphere, opts, run));
    }
    for (const auto* batch : {&shared.sphere_seeded, &shared.nested_seeded,
                              &shared.nested_unseeded, &shared.sphere_nsga_budget,
                              &shared.sphere_moead_budget})
        for (const auto& run : *batch) shared.all_logs.push_back(&run.log);

    criterion_1_energy_units(shared);
    criterion_2_coverage_oracle(shared);
    criterion_3_complete_coverage(shared);
    criterion_4_efficiency_ordering(shared);
    criterion_5_hidden_parts(shared);
    criterion_6_seeding_benefit(shared);
    criterion_7_hypervolume(shared);
    criterion_8_runtime_trend(shared);
    criterion_9_moead_parity(shared);
    criterion_10_determinism(shared);
    criterion_11_archive_monotonicity(shared);

    if (failures == 0) {
        std::printf("acceptance: all 11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
