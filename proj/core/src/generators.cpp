// Procedural inspection targets: UV sphere, boxes, and the occluded targets
// with exactly known hidden-area fractions.
#include <cmath>
#include <map>
#include <numbers>

#include "coverplan/errors.hpp"
#include "coverplan/mesh.hpp"

namespace coverplan {

namespace {

TriangleMesh tetrahedron(double radius) {
    const double s = radius / std::sqrt(3.0);
    std::vector<Vec3> v = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    // Outward-facing windings of the regular tetrahedron.
    std::vector<TriangleMesh::Triangle> t = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    return TriangleMesh::build(std::move(v), std::move(t));
}

}  // namespace

TriangleMesh generate_sphere(double radius, int triangle_budget) {
    if (radius <= 0.0) throw InvalidInputError("sphere radius must be positive");
    if (triangle_budget < 4) throw InvalidInputError("triangle budget must be >= 4");
    if (triangle_budget <= 5) return tetrahedron(radius);

    // UV sphere with `stacks` latitude bands and `segments` longitudes has
    // 2 * segments * (stacks - 1) triangles. Pick the pair closest to the
    // budget, preferring segments ~ 2 * stacks for even facet shape.
    int best_stacks = 2, best_segments = 3;
    long long best_count_err = -1;
    long long best_aspect_err = 0;
    for (int stacks = 2; stacks <= 512; ++stacks) {
        const long long seg = std::llround(triangle_budget / (2.0 * (stacks - 1)));
        const int segments = static_cast<int>(std::max<long long>(3, seg));
        const long long count = 2ll * segments * (stacks - 1);
        const long long count_err = std::llabs(count - triangle_budget);
        const long long aspect_err = std::llabs(segments - 2ll * stacks);
        if (best_count_err < 0 || count_err < best_count_err ||
            (count_err == best_count_err && aspect_err < best_aspect_err)) {
            best_count_err = count_err;
            best_aspect_err = aspect_err;
            best_stacks = stacks;
            best_segments = segments;
        }
    }
    const int stacks = best_stacks;
    const int segments = best_segments;

    std::vector<Vec3> vertices;
    vertices.push_back({0, 0, radius});
    for (int k = 1; k < stacks; ++k) {
        const double phi = std::numbers::pi * k / stacks;
        for (int j = 0; j < segments; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / segments;
            vertices.push_back({radius * std::sin(phi) * std::cos(theta),
                                radius * std::sin(phi) * std::sin(theta),
                                radius * std::cos(phi)});
        }
    }
    vertices.push_back({0, 0, -radius});
    const int bottom_pole = static_cast<int>(vertices.size()) - 1;
    auto ring = [segments](int k, int j) { return 1 + (k - 1) * segments + (j % segments); };

    std::vector<TriangleMesh::Triangle> triangles;
    for (int j = 0; j < segments; ++j)
        triangles.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int k = 1; k < stacks - 1; ++k) {
        for (int j = 0; j < segments; ++j) {
            const int a = ring(k, j), b = ring(k, j + 1);
            const int d = ring(k + 1, j), c = ring(k + 1, j + 1);
            triangles.push_back({a, d, c});
            triangles.push_back({a, c, b});
        }
    }
    for (int j = 0; j < segments; ++j)
        triangles.push_back({bottom_pole, ring(stacks - 1, j + 1), ring(stacks - 1, j)});

    return TriangleMesh::build(std::move(vertices), std::move(triangles));
}

namespace {

void append_box(std::vector<Vec3>& vertices, std::vector<TriangleMesh::Triangle>& triangles,
                const Vec3& lo, const Vec3& hi) {
    const int base = static_cast<int>(vertices.size());
    for (int i = 0; i < 8; ++i) {
        vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
    }
    // Outward-facing quads, split into two triangles each.
    const int quads[6][4] = {
        {0, 4, 6, 2},  // -x
        {1, 3, 7, 5},  // +x
        {0, 1, 5, 4},  // -y
        {2, 6, 7, 3},  // +y
        {0, 2, 3, 1},  // -z
        {4, 5, 7, 6},  // +z
    };
    for (const auto& q : quads) {
        triangles.push_back({base + q[0], base + q[1], base + q[2]});
        triangles.push_back({base + q[0], base + q[2], base + q[3]});
    }
}

// Boolean voxel solid; surface extraction emits one outward quad per
// solid/empty cell face, welding shared corners so the result is watertight.
class VoxelSolid {
public:
    VoxelSolid(int nx, int ny, int nz, Vec3 origin, double cell)
        : nx_(nx), ny_(ny), nz_(nz), origin_(origin), cell_(cell),
          solid_(static_cast<std::size_t>(nx) * ny * nz, true) {}

    void carve(int x0, int x1, int y0, int y1, int z0, int z1) {
        for (int x = x0; x < x1; ++x)
            for (int y = y0; y < y1; ++y)
                for (int z = z0; z < z1; ++z) solid_[idx(x, y, z)] = false;
    }

    bool solid(int x, int y, int z) const {
        if (x < 0 || y < 0 || z < 0 || x >= nx_ || y >= ny_ || z >= nz_) return false;
        return solid_[idx(x, y, z)];
    }

    // `hidden_cell(x,y,z)` marks empty cells whose adjoining faces are hidden.
    template <typename HiddenFn>
    OccludedTarget extract(HiddenFn hidden_cell) const {
        std::vector<Vec3> vertices;
        std::vector<TriangleMesh::Triangle> triangles;
        std::vector<int> hidden_ids;
        std::map<std::array<int, 3>, int> corner_index;

        auto corner = [&](int x, int y, int z) {
            auto [it, inserted] = corner_index.try_emplace({x, y, z},
                                                           static_cast<int>(vertices.size()));
            if (inserted)
                vertices.push_back(origin_ + Vec3{x * cell_, y * cell_, z * cell_});
            return it->second;
        };
        auto emit = [&](const std::array<std::array<int, 3>, 4>& q, bool hidden) {
            const int a = corner(q[0][0], q[0][1], q[0][2]);
            const int b = corner(q[1][0], q[1][1], q[1][2]);
            const int c = corner(q[2][0], q[2][1], q[2][2]);
            const int d = corner(q[3][0], q[3][1], q[3][2]);
            if (hidden) {
                hidden_ids.push_back(static_cast<int>(triangles.size()));
                hidden_ids.push_back(static_cast<int>(triangles.size()) + 1);
            }
            triangles.push_back({a, b, c});
            triangles.push_back({a, c, d});
        };

        for (int x = 0; x < nx_; ++x) {
            for (int y = 0; y < ny_; ++y) {
                for (int z = 0; z < nz_; ++z) {
                    if (!solid(x, y, z)) continue;
                    if (!solid(x + 1, y, z))
                        emit({{{x + 1, y, z}, {x + 1, y + 1, z}, {x + 1, y + 1, z + 1}, {x + 1, y, z + 1}}},
                             hidden_cell(x + 1, y, z));
                    if (!solid(x - 1, y, z))
                        emit({{{x, y, z}, {x, y, z + 1}, {x, y + 1, z + 1}, {x, y + 1, z}}},
                             hidden_cell(x - 1, y, z));
                    if (!solid(x, y + 1, z))
                        emit({{{x, y + 1, z}, {x, y + 1, z + 1}, {x + 1, y + 1, z + 1}, {x + 1, y + 1, z}}},
                             hidden_cell(x, y + 1, z));
                    if (!solid(x, y - 1, z))
                        emit({{{x, y, z}, {x + 1, y, z}, {x + 1, y, z + 1}, {x, y, z + 1}}},
                             hidden_cell(x, y - 1, z));
                    if (!solid(x, y, z + 1))
                        emit({{{x, y, z + 1}, {x + 1, y, z + 1}, {x + 1, y + 1, z + 1}, {x, y + 1, z + 1}}},
                             hidden_cell(x, y, z + 1));
                    if (!solid(x, y, z - 1))
                        emit({{{x, y, z}, {x, y + 1, z}, {x + 1, y + 1, z}, {x + 1, y, z}}},
                             hidden_cell(x, y, z - 1));
                }
            }
        }

        OccludedTarget target;
        target.mesh = TriangleMesh::build(std::move(vertices), std::move(triangles));
        target.hidden_ids = std::move(hidden_ids);
        double hidden_area = 0.0;
        for (int id : target.hidden_ids) hidden_area += target.mesh.triangle_areas()[id];
        target.hidden_area_fraction = hidden_area / target.mesh.total_area();
        return target;
    }

private:
    std::size_t idx(int x, int y, int z) const {
        return (static_cast<std::size_t>(z) * ny_ + y) * nx_ + x;
    }

    int nx_, ny_, nz_;
    Vec3 origin_;
    double cell_;
    std::vector<bool> solid_;
};

OccludedTarget nested_box_target() {
    std::vector<Vec3> vertices;
    std::vector<TriangleMesh::Triangle> triangles;
    append_box(vertices, triangles, {-5, -5, 0}, {5, 5, 10});        // outer skin
    append_box(vertices, triangles, {-1.5, -1.5, 3.5}, {1.5, 1.5, 6.5});  // enclosed box

    OccludedTarget target;
    target.mesh = TriangleMesh::build(std::move(vertices), std::move(triangles));
    for (int i = 12; i < 24; ++i) target.hidden_ids.push_back(i);
    double hidden_area = 0.0;
    for (int id : target.hidden_ids) hidden_area += target.mesh.triangle_areas()[id];
    target.hidden_area_fraction = hidden_area / target.mesh.total_area();
    return target;
}

OccludedTarget channel_block_target() {
    // 12 x 9 x 6 m block: an open 2x2 channel runs through along x; a sealed
    // 6x2x2 cavity sits behind a solid wall. Only the cavity is invisible
    // from outside; the straight channel walls all have exterior sightlines.
    VoxelSolid solid(12, 9, 6, {-6, -4.5, 0}, 1.0);
    solid.carve(0, 12, 3, 5, 2, 4);  // through-channel
    solid.carve(3, 9, 6, 8, 2, 4);   // sealed cavity
    return solid.extract([](int x, int y, int z) {
        return x >= 3 && x < 9 && y >= 6 && y < 8 && z >= 2 && z < 4;
    });
}

}  // namespace

TriangleMesh generate_box(const Vec3& min_corner, const Vec3& max_corner) {
    std::vector<Vec3> vertices;
    std::vector<TriangleMesh::Triangle> triangles;
    append_box(vertices, triangles, min_corner, max_corner);
    return TriangleMesh::build(std::move(vertices), std::move(triangles));
}

OccludedTarget generate_occluded_target(OccludedStyle style) {
    switch (style) {
        case OccludedStyle::NestedBox: return nested_box_target();
        case OccludedStyle::ChannelBlock: return channel_block_target();
    }
    throw InvalidInputError("unknown occluded target style");
}

}  // namespace coverplan
