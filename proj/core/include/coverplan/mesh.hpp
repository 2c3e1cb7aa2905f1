// Triangular inspection targets: immutable indexed meshes with a BVH for
// ray, segment-distance and point-distance queries, file I/O (STL/OBJ/PLY)
// and the procedural targets used by the planners and tests.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coverplan/geom.hpp"

namespace coverplan {

struct RayHit {
    int triangle_id{-1};
    double distance{0.0};
    Vec3 point;
};

class Bvh;  // internal acceleration structure

class TriangleMesh {
public:
    using Triangle = std::array<int, 3>;

    // Empty placeholder; only meshes produced by build() answer queries.
    TriangleMesh() = default;

    // Indexes the mesh (areas, bbox, BVH). Throws InvalidInputError on an
    // empty mesh or out-of-range vertex indices.
    static TriangleMesh build(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<double>& triangle_areas() const { return areas_; }
    double total_area() const { return total_area_; }
    const Box3& bbox() const { return bbox_; }
    std::size_t triangle_count() const { return triangles_.size(); }

    Vec3 triangle_vertex(int tri, int corner) const { return vertices_[triangles_[tri][corner]]; }
    Vec3 centroid(int tri) const;
    // Geometric normal by vertex winding; zero vector for degenerate triangles.
    Vec3 normal(int tri) const;
    // Degenerate triangles stay in the index but are skipped by coverage accounting.
    bool degenerate(int tri) const { return areas_[tri] < kDegenerateArea; }

    // Nearest intersection along ray with distance <= max_distance.
    // `direction` must be unit length. Ties on distance resolve to the lower
    // triangle id so results match a sequential all-triangle scan.
    std::optional<RayHit> ray_intersect(const Vec3& origin, const Vec3& direction,
                                        double max_distance) const;

    // Minimum distance between segment [a,b] and the mesh surface.
    double segment_min_distance(const Vec3& a, const Vec3& b) const;

    // Minimum distance between a point and the mesh surface.
    double point_min_distance(const Vec3& p) const;

    // Parity test against the surface; meaningful for watertight meshes.
    bool contains(const Vec3& p) const;

    // 0 for points inside the solid, surface distance otherwise.
    double distance_to_structure(const Vec3& p) const;

    // FNV-1a over the vertex/triangle buffers; identifies a target across runs.
    std::uint64_t content_hash() const;

    static constexpr double kDegenerateArea = 1e-12;

private:
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<double> areas_;
    double total_area_{0.0};
    Box3 bbox_;
    std::shared_ptr<const Bvh> bvh_;
};

enum class MeshFormat { StlBinary, StlAscii, Obj, Ply };

// Guess a format from the file extension and, for .stl, a content sniff.
MeshFormat detect_mesh_format(const std::filesystem::path& path);

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format);

// PLY writer (binary little-endian). `face_colors`, when non-empty, must hold
// one RGB triple per triangle.
void save_ply(const std::filesystem::path& path, const TriangleMesh& mesh,
              const std::vector<std::array<std::uint8_t, 3>>& face_colors = {});

// UV sphere centered at the origin. Watertight; triangle count lands within
// 10% of the budget (exact for budgets the lattice can hit, e.g. 960).
TriangleMesh generate_sphere(double radius, int triangle_budget);

enum class OccludedStyle { NestedBox, ChannelBlock };

struct OccludedTarget {
    TriangleMesh mesh;
    double hidden_area_fraction{0.0};
    std::vector<int> hidden_ids;  // triangles invisible from every exterior point
};

// Floor-mounted targets with provably invisible faces and an exactly known
// hidden-area fraction:
//   nested-box    — closed box floating inside a larger closed box
//   channel-block — block with an open through-channel and a sealed cavity
OccludedTarget generate_occluded_target(OccludedStyle style);

// Axis-aligned closed box (12 triangles, outward normals).
TriangleMesh generate_box(const Vec3& min_corner, const Vec3& max_corner);

}  // namespace coverplan
