#include "coverplan/mesh.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

#include "coverplan/errors.hpp"

namespace coverplan {

// Median-split BVH over triangles. Queries prune by node bounds only, so
// results are identical to a full scan.
class Bvh {
public:
    struct Node {
        Box3 box;
        int left{-1};
        int right{-1};
        int first{0};   // into tri_order_, leaves only
        int count{0};   // 0 for interior nodes
    };

    Bvh(const std::vector<Vec3>& vertices, const std::vector<TriangleMesh::Triangle>& triangles) {
        const int n = static_cast<int>(triangles.size());
        tri_order_.resize(n);
        std::iota(tri_order_.begin(), tri_order_.end(), 0);

        tri_boxes_.resize(n);
        centroids_.resize(n);
        for (int i = 0; i < n; ++i) {
            Box3 b;
            for (int k = 0; k < 3; ++k) b.expand(vertices[triangles[i][k]]);
            tri_boxes_[i] = b;
            centroids_[i] = b.center();
        }
        nodes_.reserve(static_cast<std::size_t>(2 * n));
        build_node(0, n);
        tri_boxes_.clear();
        centroids_.clear();
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<int>& order() const { return tri_order_; }

private:
    static constexpr int kLeafSize = 4;

    int build_node(int first, int count) {
        Node node;
        for (int i = first; i < first + count; ++i) node.box.expand(tri_boxes_[tri_order_[i]]);
        const int index = static_cast<int>(nodes_.size());
        nodes_.push_back(node);

        if (count <= kLeafSize) {
            nodes_[index].first = first;
            nodes_[index].count = count;
            return index;
        }

        Box3 cbox;
        for (int i = first; i < first + count; ++i) cbox.expand(centroids_[tri_order_[i]]);
        const Vec3 ext = cbox.extent();
        int axis = 0;
        if (ext.y > ext.x) axis = 1;
        if (ext.z > ext[axis]) axis = 2;

        const int mid = first + count / 2;
        std::nth_element(tri_order_.begin() + first, tri_order_.begin() + mid,
                         tri_order_.begin() + first + count,
                         [&](int a, int b) { return centroids_[a][axis] < centroids_[b][axis]; });

        const int left = build_node(first, mid - first);
        const int right = build_node(mid, first + count - mid);
        nodes_[index].left = left;
        nodes_[index].right = right;
        return index;
    }

    std::vector<Node> nodes_;
    std::vector<int> tri_order_;
    std::vector<Box3> tri_boxes_;
    std::vector<Vec3> centroids_;
};

namespace {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

// Slab test for ray/box overlap in [0, t_max].
bool ray_hits_box(const Vec3& origin, const Vec3& inv_dir, const Box3& box, double t_max) {
    double t0 = 0.0, t1 = t_max;
    for (int i = 0; i < 3; ++i) {
        const double ta = (box.min[i] - origin[i]) * inv_dir[i];
        const double tb = (box.max[i] - origin[i]) * inv_dir[i];
        t0 = std::max(t0, std::min(ta, tb));
        t1 = std::min(t1, std::max(ta, tb));
        if (t0 > t1) return false;
    }
    return true;
}

// Moller-Trumbore; returns the ray parameter t or nullopt. The barycentric
// test is edge-inclusive so rays crossing a shared edge register on at least
// one of the adjacent triangles.
std::optional<double> ray_triangle(const Vec3& origin, const Vec3& dir,
                                   const Vec3& a, const Vec3& b, const Vec3& c) {
    constexpr double kBaryEps = 1e-9;
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 pvec = cross(dir, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < 1e-14) return std::nullopt;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - a;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < -kBaryEps || u > 1.0 + kBaryEps) return std::nullopt;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(dir, qvec) * inv_det;
    if (v < -kBaryEps || u + v > 1.0 + kBaryEps) return std::nullopt;
    const double t = dot(e2, qvec) * inv_det;
    if (t < 0.0) return std::nullopt;
    return t;
}

}  // namespace

TriangleMesh TriangleMesh::build(std::vector<Vec3> vertices, std::vector<Triangle> triangles) {
    if (vertices.empty() || triangles.empty())
        throw InvalidInputError("mesh is empty (no vertices or no triangles)");
    const int nv = static_cast<int>(vertices.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int vi = triangles[t][k];
            if (vi < 0 || vi >= nv)
                throw InvalidInputError("triangle " + std::to_string(t) +
                                        " references invalid vertex " + std::to_string(vi));
        }
    }

    TriangleMesh mesh;
    mesh.vertices_ = std::move(vertices);
    mesh.triangles_ = std::move(triangles);

    mesh.areas_.resize(mesh.triangles_.size());
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.triangles_.size(); ++t) {
        const auto& tri = mesh.triangles_[t];
        const double a = triangle_area(mesh.vertices_[tri[0]], mesh.vertices_[tri[1]],
                                       mesh.vertices_[tri[2]]);
        mesh.areas_[t] = a;
        if (a >= kDegenerateArea) total += a;
    }
    mesh.total_area_ = total;

    for (const Vec3& v : mesh.vertices_) mesh.bbox_.expand(v);
    mesh.bvh_ = std::make_shared<Bvh>(mesh.vertices_, mesh.triangles_);
    return mesh;
}

Vec3 TriangleMesh::centroid(int tri) const {
    const auto& t = triangles_[tri];
    return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

Vec3 TriangleMesh::normal(int tri) const {
    const auto& t = triangles_[tri];
    return normalized(cross(vertices_[t[1]] - vertices_[t[0]], vertices_[t[2]] - vertices_[t[0]]));
}

std::optional<RayHit> TriangleMesh::ray_intersect(const Vec3& origin, const Vec3& direction,
                                                  double max_distance) const {
    const Vec3 inv_dir{1.0 / direction.x, 1.0 / direction.y, 1.0 / direction.z};

    double best_t = max_distance;
    int best_tri = -1;

    int stack[64];
    int top = 0;
    stack[top++] = 0;
    const auto& nodes = bvh_->nodes();
    const auto& order = bvh_->order();

    while (top > 0) {
        const auto& node = nodes[stack[--top]];
        if (!ray_hits_box(origin, inv_dir, node.box, best_t)) continue;
        if (node.count > 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const int tri = order[i];
                const auto& tv = triangles_[tri];
                const auto t = ray_triangle(origin, direction, vertices_[tv[0]],
                                            vertices_[tv[1]], vertices_[tv[2]]);
                if (!t) continue;
                if (*t < best_t || (*t == best_t && (best_tri < 0 || tri < best_tri))) {
                    best_t = *t;
                    best_tri = tri;
                }
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }

    if (best_tri < 0) return std::nullopt;
    return RayHit{best_tri, best_t, origin + direction * best_t};
}

double TriangleMesh::segment_min_distance(const Vec3& a, const Vec3& b) const {
    Box3 seg_box;
    seg_box.expand(a);
    seg_box.expand(b);

    double best = std::numeric_limits<double>::infinity();
    int stack[64];
    int top = 0;
    stack[top++] = 0;
    const auto& nodes = bvh_->nodes();
    const auto& order = bvh_->order();

    while (top > 0) {
        const auto& node = nodes[stack[--top]];
        if (node.box.gap_sq(seg_box) >= best * best) continue;
        if (node.count > 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const auto& tv = triangles_[order[i]];
                const double d = segment_triangle_distance(a, b, vertices_[tv[0]],
                                                           vertices_[tv[1]], vertices_[tv[2]]);
                best = std::min(best, d);
                if (best == 0.0) return 0.0;
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    return best;
}

double TriangleMesh::point_min_distance(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    int stack[64];
    int top = 0;
    stack[top++] = 0;
    const auto& nodes = bvh_->nodes();
    const auto& order = bvh_->order();

    while (top > 0) {
        const auto& node = nodes[stack[--top]];
        if (node.box.distance_sq(p) >= best * best) continue;
        if (node.count > 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const auto& tv = triangles_[order[i]];
                const double d = point_triangle_distance(p, vertices_[tv[0]],
                                                         vertices_[tv[1]], vertices_[tv[2]]);
                best = std::min(best, d);
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    return best;
}

bool TriangleMesh::contains(const Vec3& p) const {
    if (!bbox_.contains(p)) return false;
    // Fixed irrational direction; avoids grazing shared edges on axis-aligned
    // geometry.
    const Vec3 dir = normalized(Vec3{0.5773502691896258, 0.7071067811865476, 0.4082482904638631});
    const double span = 2.0 * norm(bbox_.extent()) + 1.0;

    int crossings = 0;
    Vec3 origin = p;
    double remaining = span;
    // Walk through successive hits; each hit is one surface crossing.
    for (int guard = 0; guard < 1024; ++guard) {
        const auto hit = ray_intersect(origin, dir, remaining);
        if (!hit) break;
        ++crossings;
        const double step = hit->distance + 1e-9;
        origin = origin + dir * step;
        remaining -= step;
        if (remaining <= 0.0) break;
    }
    return (crossings % 2) == 1;
}

double TriangleMesh::distance_to_structure(const Vec3& p) const {
    const double d = point_min_distance(p);
    if (d > 0.0 && contains(p)) return 0.0;
    return d;
}

std::uint64_t TriangleMesh::content_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    mix(vertices_.data(), vertices_.size() * sizeof(Vec3));
    mix(triangles_.data(), triangles_.size() * sizeof(Triangle));
    return h;
}

}  // namespace coverplan
