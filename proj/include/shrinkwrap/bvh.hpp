#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "shrinkwrap/mesh.hpp"

namespace shrinkwrap {

/// Closest point on triangle (a,b,c) to p, with barycentric coordinates of
/// the result. Standard Voronoi-region walk over the 7 regions.
inline Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a,
                                      const Vec3& b, const Vec3& c,
                                      Vec3* bary = nullptr) {
    auto ret = [&](const Vec3& q, double u, double v, double w) {
        if (bary) *bary = {u, v, w};
        return q;
    };
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return ret(a, 1, 0, 0);

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return ret(b, 0, 1, 0);

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return ret(a + ab * v, 1 - v, v, 0);
    }

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return ret(c, 0, 0, 1);

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return ret(a + ac * w, 1 - w, 0, w);
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return ret(b + (c - b) * w, 0, 1 - w, w);
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return ret(a + ab * v + ac * w, 1 - v - w, v, w);
}

struct NearestHit {
    Vec3 point;
    int triangle = -1;
    double distance = std::numeric_limits<double>::infinity();
    Vec3 bary;  // barycentric coords of `point` in `triangle`
};

/// Binary AABB tree over a mesh's triangles (longest-axis median split).
/// Read-only after construction.
class MeshBvh {
public:
    explicit MeshBvh(const TriangleMesh& mesh, int leaf_size = 4)
        : mesh_(mesh), leaf_size_(std::max(1, leaf_size)) {
        if (mesh.triangles.empty())
            throw std::invalid_argument("cannot build BVH over empty mesh");
        order_.resize(mesh.triangles.size());
        std::iota(order_.begin(), order_.end(), 0);
        centroids_.reserve(order_.size());
        for (const auto& tri : mesh.triangles)
            centroids_.push_back((mesh.vertices[tri[0]] + mesh.vertices[tri[1]] +
                                  mesh.vertices[tri[2]]) / 3.0);
        nodes_.reserve(2 * order_.size());
        build(0, order_.size());
    }

    const TriangleMesh& mesh() const { return mesh_; }

    /// Globally nearest point on the mesh surface.
    NearestHit nearest(const Vec3& p) const {
        NearestHit best;
        search(0, p, best);
        return best;
    }

private:
    struct Node {
        Vec3 lo, hi;
        std::size_t begin = 0, count = 0;  // leaf triangles when count > 0
        int left = -1, right = -1;
    };

    int build(std::size_t begin, std::size_t end) {
        Node node;
        node.lo = Vec3{1, 1, 1} * std::numeric_limits<double>::infinity();
        node.hi = -node.lo;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& tri = mesh_.triangles[order_[i]];
            for (int c = 0; c < 3; ++c) {
                node.lo = node.lo.cwise_min(mesh_.vertices[tri[c]]);
                node.hi = node.hi.cwise_max(mesh_.vertices[tri[c]]);
            }
        }
        const int idx = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        if (end - begin <= static_cast<std::size_t>(leaf_size_)) {
            nodes_[idx].begin = begin;
            nodes_[idx].count = end - begin;
            return idx;
        }
        const Vec3 ext = node.hi - node.lo;
        std::size_t axis = 0;
        if (ext.y > ext[axis]) axis = 1;
        if (ext.z > ext[axis]) axis = 2;
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid,
                         order_.begin() + end, [&](int a, int b) {
                             if (centroids_[a][axis] != centroids_[b][axis])
                                 return centroids_[a][axis] < centroids_[b][axis];
                             return a < b;  // deterministic tie-break
                         });
        const int l = build(begin, mid);
        const int r = build(mid, end);
        nodes_[idx].left = l;
        nodes_[idx].right = r;
        return idx;
    }

    static double box_sq_dist(const Node& n, const Vec3& p) {
        double d = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            const double lo = n.lo[a], hi = n.hi[a], v = p[a];
            if (v < lo) d += (lo - v) * (lo - v);
            else if (v > hi) d += (v - hi) * (v - hi);
        }
        return d;
    }

    void search(int node_idx, const Vec3& p, NearestHit& best) const {
        const Node& node = nodes_[node_idx];
        if (box_sq_dist(node, p) >= best.distance * best.distance) return;
        if (node.count > 0) {
            for (std::size_t i = node.begin; i < node.begin + node.count; ++i) {
                const int t = order_[i];
                const auto& tri = mesh_.triangles[t];
                Vec3 bary;
                const Vec3 q = closest_point_on_triangle(
                    p, mesh_.vertices[tri[0]], mesh_.vertices[tri[1]],
                    mesh_.vertices[tri[2]], &bary);
                const double d = (p - q).norm();
                if (d < best.distance) {
                    best = {q, t, d, bary};
                }
            }
            return;
        }
        const double dl = box_sq_dist(nodes_[node.left], p);
        const double dr = box_sq_dist(nodes_[node.right], p);
        if (dl <= dr) {
            search(node.left, p, best);
            search(node.right, p, best);
        } else {
            search(node.right, p, best);
            search(node.left, p, best);
        }
    }

    const TriangleMesh& mesh_;
    int leaf_size_;
    std::vector<int> order_;
    std::vector<Vec3> centroids_;
    std::vector<Node> nodes_;
};

}  // namespace shrinkwrap
