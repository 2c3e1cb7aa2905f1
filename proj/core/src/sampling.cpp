#include "coverplan/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "coverplan/errors.hpp"

namespace coverplan {

int InspectionGraph::add_node(const Vec3& p) {
    nodes.push_back(p);
    adjacency.emplace_back();
    return static_cast<int>(nodes.size()) - 1;
}

int InspectionGraph::add_edge(int a, int b, std::vector<int> covered, const TriangleMesh& mesh,
                              int* new_observations) {
    GraphEdge edge;
    edge.a = a;
    edge.b = b;
    edge.length = distance(nodes[a], nodes[b]);
    edge.covered = std::move(covered);

    int gained = 0;
    std::vector<int> merged;
    merged.reserve(observed.size() + edge.covered.size());
    std::set_union(observed.begin(), observed.end(), edge.covered.begin(), edge.covered.end(),
                   std::back_inserter(merged));
    for (int id : edge.covered)
        if (!std::binary_search(observed.begin(), observed.end(), id)) ++gained;
    observed = std::move(merged);
    if (gained > 0) {
        // Sum in ascending id order, the same order total_area uses, so the
        // fraction reaches exactly 1.0 at full coverage.
        observed_area = 0.0;
        for (int id : observed)
            if (!mesh.degenerate(id)) observed_area += mesh.triangle_areas()[id];
    }
    if (new_observations) *new_observations = gained;

    const int index = static_cast<int>(edges.size());
    edges.push_back(std::move(edge));
    adjacency[a].push_back(index);
    adjacency[b].push_back(index);
    return index;
}

// Direction numbers for the first three Sobol dimensions (dimension 1 is the
// van der Corput sequence in base 2).
Sobol3::Sobol3() {
    for (int bit = 0; bit < 32; ++bit) v_[0][bit] = 1u << (31 - bit);

    {  // dimension 2: s = 1, a = 0, m = {1}
        std::uint32_t m[32];
        m[0] = 1;
        for (int k = 1; k < 32; ++k) m[k] = m[k - 1] ^ (m[k - 1] << 1);
        for (int bit = 0; bit < 32; ++bit) v_[1][bit] = m[bit] << (31 - bit);
    }
    {  // dimension 3: s = 2, a = 1, m = {1, 3}
        std::uint32_t m[32];
        m[0] = 1;
        m[1] = 3;
        for (int k = 2; k < 32; ++k) m[k] = (m[k - 1] << 1) ^ (m[k - 2] << 2) ^ m[k - 2];
        for (int bit = 0; bit < 32; ++bit) v_[2][bit] = m[bit] << (31 - bit);
    }
}

std::array<double, 3> Sobol3::next() {
    // Gray-code order: flip the direction number at the lowest zero bit of
    // the previous index.
    unsigned bit = 0;
    std::uint32_t n = index_;
    while (n & 1u) {
        ++bit;
        n >>= 1;
    }
    ++index_;
    std::array<double, 3> out;
    for (int d = 0; d < 3; ++d) {
        x_[d] ^= v_[d][bit];
        out[d] = static_cast<double>(x_[d]) * 0x1.0p-32;
    }
    return out;
}

SamplingPlanner::SamplingPlanner(const TriangleMesh& mesh, SamplingParams params,
                                 std::vector<CameraModel> cameras, EnergyParams energy)
    : mesh_(mesh),
      params_(params),
      cameras_(std::move(cameras)),
      energy_(energy),
      center_(mesh.bbox().center()),
      rng_(params.rng_seed) {
    if (params_.f <= 0.0 || params_.f > 1.0)
        throw InvalidInputError("coverage fraction f must be in (0, 1]");
    if (params_.epsilon < 0.0 || params_.epsilon >= params_.f)
        throw InvalidInputError("epsilon must satisfy 0 <= epsilon < f");

    sample_box_ = padded_box(mesh, params_.pad);
    if (params_.local_radius <= 0.0) {
        double min_far = std::numeric_limits<double>::infinity();
        for (const auto& cam : cameras_) min_far = std::min(min_far, cam.far_plane);
        params_.local_radius = 2.0 * min_far;
    }
    if (params_.snapshot_spacing <= 0.0) {
        const double interval = compute_wp_interval(mesh, params_.pad, params_.volume_scaling);
        params_.snapshot_spacing = default_snapshot_spacing(interval, cameras_);
    }

    if (mesh_.distance_to_structure(params_.q0) < params_.buffer)
        throw InvalidInputError("start configuration violates the buffer distance");
    graph_.add_node(params_.q0);
    observed_mask_.assign(mesh_.triangle_count(), 0);
}

bool SamplingPlanner::sample_valid(const Vec3& p) const {
    if (p.z < mesh_.bbox().min.z) return false;
    return mesh_.distance_to_structure(p) >= params_.buffer;
}

bool SamplingPlanner::edge_free(const Vec3& a, const Vec3& b) const {
    return mesh_.segment_min_distance(a, b) >= energy_.safety_buffer;
}

std::vector<int> SamplingPlanner::edge_cover(const Vec3& a, const Vec3& b) const {
    EdgePose pose{a, b, edge_heading(a, b, center_)};
    return edge_coverage(mesh_, pose, cameras_, params_.snapshot_spacing);
}

std::vector<int> SamplingPlanner::nearest_nodes(const Vec3& p, int k, int exclude) const {
    std::vector<std::pair<double, int>> by_distance;
    by_distance.reserve(graph_.nodes.size());
    for (int i = 0; i < static_cast<int>(graph_.nodes.size()); ++i) {
        if (i == exclude) continue;
        by_distance.emplace_back(distance(graph_.nodes[i], p), i);
    }
    std::sort(by_distance.begin(), by_distance.end());
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(by_distance.size()) && i < k; ++i)
        out.push_back(by_distance[i].second);
    return out;
}

bool SamplingPlanner::add_to_graph() {
    const auto u = sobol_.next();
    const Vec3 e = sample_box_.extent();
    const Vec3 p = sample_box_.min + Vec3{u[0] * e.x, u[1] * e.y, u[2] * e.z};
    if (!sample_valid(p)) return false;

    const auto neighbors = nearest_nodes(p, params_.k_neighbors);
    std::vector<std::pair<int, std::vector<int>>> new_edges;
    for (int n : neighbors) {
        if (!edge_free(p, graph_.nodes[n])) continue;
        new_edges.emplace_back(n, edge_cover(p, graph_.nodes[n]));
    }
    if (new_edges.empty()) return false;  // keep the graph connected

    const int node = graph_.add_node(p);
    for (auto& [n, covered] : new_edges) {
        int gained = 0;
        graph_.add_edge(node, n, std::move(covered), mesh_, &gained);
    }
    for (int id : graph_.observed) observed_mask_[id] = 1;
    return true;
}

Vec3 SamplingPlanner::random_in_ball(const Vec3& center, double radius) {
    for (;;) {
        const Vec3 p{rng_.uniform(-1.0, 1.0), rng_.uniform(-1.0, 1.0), rng_.uniform(-1.0, 1.0)};
        if (norm_sq(p) <= 1.0) return center + p * radius;
    }
}

bool SamplingPlanner::add_missing_view() {
    std::vector<int> unobserved;
    for (int t = 0; t < static_cast<int>(mesh_.triangle_count()); ++t)
        if (!observed_mask_[t] && !mesh_.degenerate(t)) unobserved.push_back(t);
    if (unobserved.empty()) return false;

    int target = unobserved[rng_.index(unobserved.size())];
    if (target == last_missing_target_ && unobserved.size() > 1) {
        while (target == last_missing_target_) target = unobserved[rng_.index(unobserved.size())];
    }
    last_missing_target_ = target;
    const Vec3 focus = mesh_.centroid(target);

    constexpr int kTries = 20;
    for (int attempt = 0; attempt < kTries; ++attempt) {
        const Vec3 a = random_in_ball(focus, params_.local_radius);
        const Vec3 b = random_in_ball(focus, params_.local_radius);
        if (!sample_valid(a) || !sample_valid(b)) continue;
        if (norm_sq(b - a) == 0.0 || !edge_free(a, b)) continue;

        // Must be connectable to the existing graph.
        int connector_a = -1;
        for (int n : nearest_nodes(a, params_.k_neighbors)) {
            if (edge_free(a, graph_.nodes[n])) { connector_a = n; break; }
        }
        if (connector_a < 0) continue;

        auto covered = edge_cover(a, b);
        bool gains = false;
        for (int id : covered)
            if (!observed_mask_[id]) { gains = true; break; }
        if (!gains) continue;

        const int na = graph_.add_node(a);
        const int nb = graph_.add_node(b);
        graph_.add_edge(na, nb, std::move(covered), mesh_);
        graph_.add_edge(na, connector_a, edge_cover(a, graph_.nodes[connector_a]), mesh_);
        for (int n : nearest_nodes(b, params_.k_neighbors, nb)) {
            if (n == na) continue;
            if (edge_free(b, graph_.nodes[n])) {
                graph_.add_edge(nb, n, edge_cover(b, graph_.nodes[n]), mesh_);
                break;
            }
        }
        for (int id : graph_.observed) observed_mask_[id] = 1;
        return true;
    }
    return false;
}

double SamplingPlanner::observed_fraction() const {
    return graph_.observed_area / mesh_.total_area();
}

void SamplingPlanner::build() {
    int stall = 0;
    while (observed_fraction() < params_.f) {
        const double before = graph_.observed_area;
        if (observed_fraction() < params_.f - params_.epsilon) {
            add_to_graph();
        } else {
            add_missing_view();
        }
        if (graph_.observed_area > before) {
            stall = 0;
        } else if (++stall >= params_.max_stall_iterations) {
            throw UnreachableCoverageError(
                "coverage fraction " + std::to_string(params_.f) +
                    " unreachable; best achieved " + std::to_string(observed_fraction()),
                observed_fraction());
        }
    }
}

namespace {

struct ShortestPaths {
    std::vector<double> dist;
    std::vector<int> via_edge;  // edge used to reach each node
};

ShortestPaths dijkstra(const InspectionGraph& graph, int source, double w_trans) {
    ShortestPaths sp;
    sp.dist.assign(graph.nodes.size(), std::numeric_limits<double>::infinity());
    sp.via_edge.assign(graph.nodes.size(), -1);
    sp.dist[source] = 0.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [d, node] = heap.top();
        heap.pop();
        if (d > sp.dist[node]) continue;
        for (int ei : graph.adjacency[node]) {
            const auto& e = graph.edges[ei];
            const int other = e.a == node ? e.b : e.a;
            const double nd = d + w_trans * e.length;
            if (nd < sp.dist[other]) {
                sp.dist[other] = nd;
                sp.via_edge[other] = ei;
                heap.push({nd, other});
            }
        }
    }
    return sp;
}

std::vector<int> reconstruct_path(const InspectionGraph& graph, const ShortestPaths& sp,
                                  int source, int target) {
    std::vector<int> nodes{target};
    int cur = target;
    while (cur != source) {
        const int ei = sp.via_edge[cur];
        if (ei < 0) throw InvalidInputError("graph is disconnected");
        const auto& e = graph.edges[ei];
        cur = e.a == cur ? e.b : e.a;
        nodes.push_back(cur);
    }
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
}

// Greedy weighted set cover: pick edges by newly-covered-area per unit
// translation energy until all observed primitives are covered. Lazy
// evaluation is valid because gains only shrink.
std::vector<int> greedy_cover(const InspectionGraph& graph, const TriangleMesh& mesh,
                              double w_trans) {
    std::vector<char> covered(mesh.triangle_count(), 0);
    std::size_t remaining = graph.observed.size();

    auto ratio = [&](int ei) {
        double area = 0.0;
        for (int id : graph.edges[ei].covered)
            if (!covered[id] && !mesh.degenerate(id)) area += mesh.triangle_areas()[id];
        const double cost = std::max(w_trans * graph.edges[ei].length, 1e-12);
        return area / cost;
    };

    using Item = std::pair<double, int>;  // (ratio, -edge index); max-heap
    std::priority_queue<Item> heap;
    for (int ei = 0; ei < static_cast<int>(graph.edges.size()); ++ei)
        if (!graph.edges[ei].covered.empty()) heap.push({ratio(ei), -ei});

    std::vector<int> chosen;
    while (remaining > 0 && !heap.empty()) {
        const int ei = -heap.top().second;
        heap.pop();
        const double fresh = ratio(ei);
        if (fresh <= 0.0) continue;
        if (!heap.empty() && fresh < heap.top().first) {
            heap.push({fresh, -ei});
            continue;
        }
        chosen.push_back(ei);
        for (int id : graph.edges[ei].covered) {
            if (!covered[id]) {
                covered[id] = 1;
                --remaining;
            }
        }
    }
    if (remaining > 0) throw InvalidInputError("set cover failed: graph invariant violated");
    return chosen;
}

// A required edge with a traversal direction.
struct WalkItem {
    int edge{0};
    int entry{0};
    int exit{0};
};

}  // namespace

std::vector<int> find_closed_walk(const InspectionGraph& graph, const TriangleMesh& mesh,
                                  int start, const EnergyParams& energy) {
    if (graph.observed.empty()) throw InvalidInputError("graph observed nothing");

    const auto required = greedy_cover(graph, mesh, energy.w_trans);

    // Shortest-path metric between terminals, computed lazily per source.
    std::unordered_map<int, ShortestPaths> paths;
    auto from = [&](int node) -> const ShortestPaths& {
        auto it = paths.find(node);
        if (it == paths.end())
            it = paths.emplace(node, dijkstra(graph, node, energy.w_trans)).first;
        return it->second;
    };
    auto metric = [&](int a, int b) { return from(a).dist[b]; };

    // Nearest-neighbor ordering over the required edges.
    std::vector<WalkItem> tour;
    std::vector<char> used(required.size(), 0);
    int cur = start;
    for (std::size_t step = 0; step < required.size(); ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        int best_entry = 0;
        for (std::size_t i = 0; i < required.size(); ++i) {
            if (used[i]) continue;
            const auto& e = graph.edges[required[i]];
            for (int entry : {e.a, e.b}) {
                const double d = metric(cur, entry);
                if (d < best) {
                    best = d;
                    best_i = i;
                    best_entry = entry;
                }
            }
        }
        used[best_i] = 1;
        const auto& e = graph.edges[required[best_i]];
        tour.push_back({required[best_i], best_entry, best_entry == e.a ? e.b : e.a});
        cur = tour.back().exit;
    }

    // 2-opt: reverse a range and flip the orientations inside it. Interior
    // connection costs are symmetric, so only the two boundary hops change.
    if (tour.size() >= 2) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t i = 0; i < tour.size(); ++i) {
                for (std::size_t j = i; j < tour.size(); ++j) {
                    const int pe = i == 0 ? start : tour[i - 1].exit;
                    const int ne = j + 1 == tour.size() ? start : tour[j + 1].entry;
                    const double before = metric(pe, tour[i].entry) + metric(tour[j].exit, ne);
                    const double after = metric(pe, tour[j].exit) + metric(tour[i].entry, ne);
                    if (after + 1e-12 < before) {
                        std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i),
                                     tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                        for (std::size_t k = i; k <= j; ++k)
                            std::swap(tour[k].entry, tour[k].exit);
                        improved = true;
                    }
                }
            }
        }
    }

    // Realize the walk node by node.
    std::vector<int> walk{start};
    cur = start;
    auto append_path = [&](int target) {
        if (cur == target) return;
        const auto nodes = reconstruct_path(graph, from(cur), cur, target);
        walk.insert(walk.end(), nodes.begin() + 1, nodes.end());
        cur = target;
    };
    for (const auto& item : tour) {
        append_path(item.entry);
        walk.push_back(item.exit);
        cur = item.exit;
    }
    append_path(start);
    return walk;
}

SamplingRunResult run_sampling_planner(const TriangleMesh& mesh, const SamplingParams& params,
                                       const std::vector<CameraModel>& cameras,
                                       const EnergyParams& energy) {
    using clock = std::chrono::steady_clock;
    SamplingRunResult result;
    result.f = params.f;
    result.seed = params.rng_seed;
    result.q0 = params.q0;

    SamplingPlanner planner(mesh, params, cameras, energy);
    const auto t0 = clock::now();
    try {
        planner.build();
    } catch (const UnreachableCoverageError& err) {
        result.build_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        result.error = err.what();
        result.best_fraction = err.best_fraction;
        result.graph_nodes = planner.graph().nodes.size();
        result.graph_edges = planner.graph().edges.size();
        return result;
    }
    const auto t1 = clock::now();
    result.build_seconds = std::chrono::duration<double>(t1 - t0).count();
    result.best_fraction = planner.observed_fraction();
    result.graph_nodes = planner.graph().nodes.size();
    result.graph_edges = planner.graph().edges.size();

    result.plan = find_closed_walk(planner.graph(), mesh, 0, energy);
    result.walk_seconds = std::chrono::duration<double>(clock::now() - t1).count();

    result.positions.reserve(result.plan.size());
    for (int node : result.plan) result.positions.push_back(planner.graph().nodes[node]);
    const auto eval = evaluate_path(mesh, result.positions, cameras, energy,
                                    planner.params().snapshot_spacing);
    result.fitness = eval.fitness();
    result.success = true;
    return result;
}

std::vector<SamplingRunResult> f_sweep(const TriangleMesh& mesh, double f_min, double f_max,
                                       int steps, int repetitions,
                                       const SamplingParams& base_params,
                                       const std::vector<CameraModel>& cameras,
                                       const EnergyParams& energy, std::uint64_t master_seed) {
    if (f_min > f_max || steps < 1) throw InvalidInputError("bad f-sweep range");

    std::vector<SamplingRunResult> results;
    for (int rep = 0; rep < repetitions; ++rep) {
        const std::uint64_t seed = master_seed + static_cast<std::uint64_t>(rep);
        Rng rng(seed);

        // Start outside the bounding box but no further than 10 m away, above
        // the structure floor and outside the buffer shell.
        const Box3 bbox = mesh.bbox();
        Box3 outer = bbox;
        outer.min.x -= 10.0;
        outer.min.y -= 10.0;
        outer.max.x += 10.0;
        outer.max.y += 10.0;
        outer.max.z += 10.0;
        Vec3 q0;
        for (;;) {
            q0 = {rng.uniform(outer.min.x, outer.max.x), rng.uniform(outer.min.y, outer.max.y),
                  rng.uniform(outer.min.z, outer.max.z)};
            if (bbox.contains(q0)) continue;
            if (mesh.distance_to_structure(q0) < base_params.buffer) continue;
            break;
        }

        for (int s = 0; s < steps; ++s) {
            SamplingParams params = base_params;
            params.f = steps == 1 ? f_min : f_min + (f_max - f_min) * s / (steps - 1);
            params.q0 = q0;
            params.rng_seed = seed;
            auto result = run_sampling_planner(mesh, params, cameras, energy);
            result.repetition = rep;
            results.push_back(std::move(result));
        }
    }
    return results;
}

}  // namespace coverplan
