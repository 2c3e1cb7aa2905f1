#include "coverplan/circling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "coverplan/errors.hpp"

namespace coverplan {

namespace {

// Clockwise Moore neighborhood (x right, y up), starting west.
constexpr int kDirs[8][2] = {{-1, 0}, {-1, 1}, {0, 1}, {1, 1},
                             {1, 0},  {1, -1}, {0, -1}, {-1, -1}};

int dir_index(int dx, int dy) {
    for (int d = 0; d < 8; ++d)
        if (kDirs[d][0] == dx && kDirs[d][1] == dy) return d;
    return -1;
}

// Mask of the largest 8-connected component; ties go to the component whose
// first cell comes earliest in raster order.
Occupancy largest_component(const Occupancy& occ) {
    Occupancy best{occ.width, occ.height,
                   std::vector<std::uint8_t>(occ.cells.size(), 0)};
    std::vector<int> label(occ.cells.size(), -1);
    int best_size = 0;
    int next_label = 0;

    for (int y = 0; y < occ.height; ++y) {
        for (int x = 0; x < occ.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * occ.width + x;
            if (!occ.cells[i] || label[i] >= 0) continue;
            std::vector<std::array<int, 2>> stack{{x, y}};
            std::vector<std::size_t> members;
            label[i] = next_label;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                members.push_back(static_cast<std::size_t>(cy) * occ.width + cx);
                for (const auto& d : kDirs) {
                    const int nx = cx + d[0], ny = cy + d[1];
                    if (!occ.at(nx, ny)) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny) * occ.width + nx;
                    if (label[ni] >= 0) continue;
                    label[ni] = next_label;
                    stack.push_back({nx, ny});
                }
            }
            if (static_cast<int>(members.size()) > best_size) {
                best_size = static_cast<int>(members.size());
                std::fill(best.cells.begin(), best.cells.end(), 0);
                for (std::size_t m : members) best.cells[m] = 1;
            }
            ++next_label;
        }
    }
    return best;
}

}  // namespace

std::vector<std::array<int, 2>> moore_trace(const Occupancy& occupancy) {
    bool any = false;
    for (auto c : occupancy.cells) any = any || c;
    if (!any) throw InvalidInputError("moore_trace: empty occupancy");

    const Occupancy occ = largest_component(occupancy);

    int sx = -1, sy = -1;
    for (int y = 0; y < occ.height && sx < 0; ++y)
        for (int x = 0; x < occ.width; ++x)
            if (occ.at(x, y)) { sx = x; sy = y; break; }

    std::vector<std::array<int, 2>> ring{{sx, sy}};

    // The raster scan "enters" the start cell from its empty west neighbor;
    // that neighbor is the initial backtrack. The walk is a deterministic
    // function of (cell, backtrack), so Jacob's stopping criterion - revisit
    // the start in the same manner it was first entered - is implemented as
    // exact state repetition, which also terminates walks whose cycle enters
    // the start cell with a different backtrack.
    int px = sx, py = sy;
    int back_dir = dir_index(-1, 0);

    std::vector<char> seen(occ.cells.size() * 8, 0);
    auto state_index = [&](int x, int y, int b) {
        return (static_cast<std::size_t>(y) * occ.width + x) * 8 + b;
    };
    seen[state_index(px, py, back_dir)] = 1;

    const std::size_t max_steps = occ.cells.size() * 8 + 8;
    for (std::size_t step = 0; step < max_steps; ++step) {
        int found = -1;
        int prev = back_dir;
        for (int k = 1; k <= 8; ++k) {
            const int d = (back_dir + k) % 8;
            const int nx = px + kDirs[d][0];
            const int ny = py + kDirs[d][1];
            if (occ.at(nx, ny)) { found = d; break; }
            prev = d;
        }
        if (found < 0) break;  // isolated cell

        const int nx = px + kDirs[found][0];
        const int ny = py + kDirs[found][1];
        const int bx = px + kDirs[prev][0];
        const int by = py + kDirs[prev][1];
        const int nb = dir_index(bx - nx, by - ny);
        if (seen[state_index(nx, ny, nb)]) break;
        seen[state_index(nx, ny, nb)] = 1;

        ring.push_back({nx, ny});
        back_dir = nb;
        px = nx;
        py = ny;
    }
    // The lap may close by stepping back onto the start cell.
    while (ring.size() > 1 && ring.back() == ring.front()) ring.pop_back();
    return ring;
}

std::vector<int> prune_edge(const std::vector<int>& loop, const WaypointGrid& grid) {
    std::vector<int> out = loop;
    bool changed = true;
    while (changed && out.size() > 2) {
        changed = false;
        for (std::size_t i = 0; i < out.size() && out.size() > 2; ++i) {
            const std::size_t n = out.size();
            const Vec3& prev = grid.position(out[(i + n - 1) % n]);
            const Vec3& cur = grid.position(out[i]);
            const Vec3& next = grid.position(out[(i + 1) % n]);
            const double detour = distance(prev, cur) + distance(cur, next) - distance(prev, next);
            if (detour < 1e-9) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                --i;
            }
        }
    }
    return out;
}

CirclingResult circle_each_level(const TriangleMesh& mesh, const WaypointGrid& grid) {
    if (grid.waypoints.empty()) throw InvalidInputError("empty waypoint grid");

    const double neighbor_distance = grid.buffer + grid.wp_interval;

    std::map<int, std::vector<const Waypoint*>> levels;
    for (const auto& wp : grid.waypoints) levels[wp.grid_coords[2]].push_back(&wp);

    CirclingResult result;
    for (const auto& [k, wps] : levels) {
        const double z = grid.grid_origin.z + k * grid.wp_interval;

        std::vector<const Waypoint*> near;
        for (const Waypoint* wp : wps)
            if (mesh.distance_to_structure(wp->position) <= neighbor_distance) near.push_back(wp);
        if (near.size() < 3) {
            if (!near.empty()) result.skipped_levels.push_back(z);
            continue;
        }

        int min_i = near[0]->grid_coords[0], max_i = min_i;
        int min_j = near[0]->grid_coords[1], max_j = min_j;
        for (const Waypoint* wp : near) {
            min_i = std::min(min_i, wp->grid_coords[0]);
            max_i = std::max(max_i, wp->grid_coords[0]);
            min_j = std::min(min_j, wp->grid_coords[1]);
            max_j = std::max(max_j, wp->grid_coords[1]);
        }

        Occupancy occ;
        occ.width = max_i - min_i + 1;
        occ.height = max_j - min_j + 1;
        occ.cells.assign(static_cast<std::size_t>(occ.width) * occ.height, 0);
        std::unordered_map<long long, int> cell_to_id;
        for (const Waypoint* wp : near) {
            const int x = wp->grid_coords[0] - min_i;
            const int y = wp->grid_coords[1] - min_j;
            occ.set(x, y);
            cell_to_id[static_cast<long long>(y) * occ.width + x] = wp->id;
        }

        const auto ring = moore_trace(occ);
        std::vector<int> ids;
        ids.reserve(ring.size());
        for (const auto& cell : ring)
            ids.push_back(cell_to_id.at(static_cast<long long>(cell[1]) * occ.width + cell[0]));

        LevelLoop loop;
        loop.z_level = z;
        loop.waypoint_ids = prune_edge(ids, grid);
        if (loop.waypoint_ids.size() < 2) {
            result.skipped_levels.push_back(z);
            continue;
        }
        result.loops.push_back(std::move(loop));
    }
    return result;
}

namespace {

// Deterministic A* over the waypoint lattice (26-neighborhood). Axis-aligned
// steps at the default spacing always clear the safety buffer, so a route
// exists whenever the shell around the structure is lattice-connected.
class LatticeRouter {
public:
    LatticeRouter(const TriangleMesh& mesh, const WaypointGrid& grid, double safety_buffer)
        : mesh_(mesh), grid_(grid), safety_(safety_buffer) {
        for (const auto& wp : grid.waypoints) by_coords_.emplace(pack(wp.grid_coords), wp.id);
    }

    bool edge_free(int a, int b) {
        const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                                  static_cast<std::uint32_t>(std::max(a, b));
        auto it = edge_cache_.find(key);
        if (it == edge_cache_.end()) {
            const bool free =
                mesh_.segment_min_distance(grid_.position(a), grid_.position(b)) >= safety_;
            it = edge_cache_.emplace(key, free).first;
        }
        return it->second;
    }

    // Waypoints strictly between `from` and `to` on a collision-free lattice
    // route (empty when the direct edge is free).
    std::vector<int> route(int from, int to) {
        if (from == to || edge_free(from, to)) return {};

        const auto n = grid_.waypoints.size();
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        std::vector<int> parent(n, -1);
        using Item = std::tuple<double, double, int>;  // (f, g, node)
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        const Vec3& goal = grid_.position(to);

        dist[static_cast<std::size_t>(from)] = 0.0;
        heap.push({distance(grid_.position(from), goal), 0.0, from});
        while (!heap.empty()) {
            const auto [f, g, node] = heap.top();
            heap.pop();
            if (node == to) break;
            if (g > dist[static_cast<std::size_t>(node)]) continue;
            const auto& coords = grid_.waypoints[static_cast<std::size_t>(node)].grid_coords;
            for (int dx = -1; dx <= 1; ++dx) {
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dzs = -1; dzs <= 1; ++dzs) {
                        if (!dx && !dy && !dzs) continue;
                        const auto it = by_coords_.find(
                            pack({coords[0] + dx, coords[1] + dy, coords[2] + dzs}));
                        if (it == by_coords_.end()) continue;
                        const int next = it->second;
                        if (!edge_free(node, next)) continue;
                        const double ng =
                            g + distance(grid_.position(node), grid_.position(next));
                        if (ng < dist[static_cast<std::size_t>(next)]) {
                            dist[static_cast<std::size_t>(next)] = ng;
                            parent[static_cast<std::size_t>(next)] = node;
                            heap.push({ng + distance(grid_.position(next), goal), ng, next});
                        }
                    }
                }
            }
        }
        if (parent[static_cast<std::size_t>(to)] < 0)
            throw InvalidInputError("no collision-free lattice route between loops");

        std::vector<int> path;
        for (int cur = parent[static_cast<std::size_t>(to)]; cur != from;
             cur = parent[static_cast<std::size_t>(cur)])
            path.push_back(cur);
        std::reverse(path.begin(), path.end());
        return path;
    }

private:
    static std::uint64_t pack(const std::array<int, 3>& c) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c[0] + 1024)) << 42) |
               (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c[1] + 1024)) << 21) |
               static_cast<std::uint32_t>(c[2] + 1024);
    }

    const TriangleMesh& mesh_;
    const WaypointGrid& grid_;
    double safety_;
    std::unordered_map<std::uint64_t, int> by_coords_;
    std::unordered_map<std::uint64_t, bool> edge_cache_;
};

}  // namespace

std::vector<InspectionPlan> compose_circling_plans(const std::vector<LevelLoop>& loops,
                                                   const WaypointGrid& grid, double z_center,
                                                   const TriangleMesh& mesh,
                                                   double safety_buffer) {
    if (loops.empty()) throw InvalidInputError("no level loops to compose");
    const int n = static_cast<int>(loops.size());
    LatticeRouter router(mesh, grid, safety_buffer);

    std::vector<InspectionPlan> plans;
    plans.reserve(static_cast<std::size_t>(n));

    for (int dz = 1; dz <= n; ++dz) {
        int best_offset = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (int offset = 0; offset < dz; ++offset) {
            double sum = 0.0;
            int count = 0;
            for (int i = offset; i < n; i += dz) {
                sum += loops[i].z_level;
                ++count;
            }
            if (count == 0) continue;
            const double err = std::abs(sum / count - z_center);
            if (err < best_err) {
                best_err = err;
                best_offset = offset;
            }
        }

        InspectionPlan plan;
        int prev_exit = -1;
        for (int i = best_offset; i < n; i += dz) {
            const auto& ids = loops[i].waypoint_ids;
            std::size_t entry = 0;
            if (prev_exit >= 0) {
                const Vec3& from = grid.position(prev_exit);
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t w = 0; w < ids.size(); ++w) {
                    const Vec3& p = grid.position(ids[w]);
                    const double d = std::hypot(p.x - from.x, p.y - from.y);
                    if (d < best_d) {
                        best_d = d;
                        entry = w;
                    }
                }
                for (int via : router.route(prev_exit, ids[entry])) plan.push_back(via);
            }
            for (std::size_t w = 0; w <= ids.size(); ++w)
                plan.push_back(ids[(entry + w) % ids.size()]);  // closes the loop
            prev_exit = ids[entry];
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

std::vector<InspectionPlan> circling_plans(const TriangleMesh& mesh, const WaypointGrid& grid,
                                           double safety_buffer) {
    const auto levels = circle_each_level(mesh, grid);
    if (levels.loops.empty()) throw InvalidInputError("no traceable levels around the structure");
    return compose_circling_plans(levels.loops, grid, mesh.bbox().center().z, mesh, safety_buffer);
}

}  // namespace coverplan
