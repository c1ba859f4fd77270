#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "shrinkwrap/bvh.hpp"
#include "shrinkwrap/mesh.hpp"
#include "shrinkwrap/parallel.hpp"
#include "shrinkwrap/sdf/grid.hpp"

namespace shrinkwrap {

/// Pseudonormals for every feature of a watertight mesh: per-face normals,
/// angle-weighted vertex normals, and edge normals (sum of the two incident
/// face normals). Signing a distance query reduces to a dot product with the
/// pseudonormal of the closest feature.
class Pseudonormals {
public:
    explicit Pseudonormals(const TriangleMesh& mesh) : mesh_(mesh) {
        face_.resize(mesh.triangles.size());
        vertex_.assign(mesh.vertices.size(), Vec3{});
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tri = mesh.triangles[t];
            face_[t] = mesh.triangle_normal(t).normalized();
            for (int c = 0; c < 3; ++c) {
                const Vec3& v = mesh.vertices[tri[c]];
                const Vec3 e1 = (mesh.vertices[tri[(c + 1) % 3]] - v).normalized();
                const Vec3 e2 = (mesh.vertices[tri[(c + 2) % 3]] - v).normalized();
                const double angle =
                    std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
                vertex_[tri[c]] += angle * face_[t];
            }
            for (int e = 0; e < 3; ++e) {
                int a = tri[e], b = tri[(e + 1) % 3];
                if (a > b) std::swap(a, b);
                edge_[{a, b}] += face_[t];
            }
        }
    }

    /// Pseudonormal of the feature the barycentric coordinates select.
    Vec3 at(int triangle, const Vec3& bary, double feature_eps = 1e-9) const {
        const auto& tri = mesh_.triangles[triangle];
        int zero_count = 0;
        bool zero[3];
        for (int c = 0; c < 3; ++c) {
            zero[c] = bary[c] <= feature_eps;
            if (zero[c]) ++zero_count;
        }
        if (zero_count == 2) {
            for (int c = 0; c < 3; ++c)
                if (!zero[c]) return vertex_[tri[c]];
        }
        if (zero_count == 1) {
            for (int c = 0; c < 3; ++c)
                if (zero[c]) {
                    int a = tri[(c + 1) % 3], b = tri[(c + 2) % 3];
                    if (a > b) std::swap(a, b);
                    return edge_.at({a, b});
                }
        }
        return face_[triangle];
    }

private:
    const TriangleMesh& mesh_;
    std::vector<Vec3> face_;
    std::vector<Vec3> vertex_;
    std::map<std::pair<int, int>, Vec3> edge_;
};

namespace detail {

/// Counts ray-triangle crossings along +dir from p (Moller-Trumbore).
inline int count_ray_crossings(const TriangleMesh& mesh, const Vec3& p,
                               const Vec3& dir) {
    int hits = 0;
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3 e1 = mesh.vertices[tri[1]] - a;
        const Vec3 e2 = mesh.vertices[tri[2]] - a;
        const Vec3 pv = dir.cross(e2);
        const double det = e1.dot(pv);
        if (std::abs(det) < 1e-14) continue;
        const double inv = 1.0 / det;
        const Vec3 tv = p - a;
        const double u = tv.dot(pv) * inv;
        if (u < 0.0 || u > 1.0) continue;
        const Vec3 qv = tv.cross(e1);
        const double v = dir.dot(qv) * inv;
        if (v < 0.0 || u + v > 1.0) continue;
        const double t = e2.dot(qv) * inv;
        if (t > 0.0) ++hits;
    }
    return hits;
}

inline bool inside_by_parity_vote(const TriangleMesh& mesh, const Vec3& p) {
    const Vec3 dirs[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                          {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    int inside_votes = 0;
    for (const Vec3& d : dirs)
        if (count_ray_crossings(mesh, p, d) % 2 == 1) ++inside_votes;
    return inside_votes > 3;
}

}  // namespace detail

/// Signed distance from p to the mesh surface. Sign comes from the
/// angle-weighted pseudonormal at the closest feature; a near-degenerate dot
/// product falls back to a 6-ray parity majority vote.
inline double signed_distance_to_mesh(const MeshBvh& bvh,
                                      const Pseudonormals& normals,
                                      const Vec3& p) {
    const NearestHit hit = bvh.nearest(p);
    const Vec3 offset = p - hit.point;
    const Vec3 n = normals.at(hit.triangle, hit.bary).normalized();
    const double d = offset.normalized().dot(n);
    if (hit.distance > 0.0 && std::abs(d) < 1e-10)
        return detail::inside_by_parity_vote(bvh.mesh(), p) ? -hit.distance
                                                            : hit.distance;
    return d >= 0.0 ? hit.distance : -hit.distance;
}

/// Samples the mesh's SDF over a cubic lattice. The grid covers the mesh
/// bounding box padded by `padding` times the box diagonal per side, so the
/// grid corners land strictly outside the shape.
inline GridSdf mesh_to_grid_sdf(const TriangleMesh& mesh, int resolution,
                                double padding = 0.1, int threads = 1) {
    if (resolution < 8)
        throw std::invalid_argument("resolution must be >= 8");
    const auto watertight = mesh_watertight_check(mesh);
    if (!watertight.closed)
        throw std::runtime_error(
            "mesh is not watertight: " +
            std::to_string(watertight.boundary_edge_count) + " boundary edges");

    Vec3 lo, hi;
    mesh.bounds(lo, hi);
    const double diag = (hi - lo).norm();
    const double pad = padding * diag;
    lo -= Vec3{pad, pad, pad};
    hi += Vec3{pad, pad, pad};
    const Vec3 ext = hi - lo;
    const double spacing = ext.max_coeff() / (resolution - 1);
    // Center the (cubic) lattice on the padded box.
    const Vec3 covered{spacing * (resolution - 1), spacing * (resolution - 1),
                       spacing * (resolution - 1)};
    const Vec3 origin = lo - (covered - ext) * 0.5;

    const MeshBvh bvh(mesh);
    const Pseudonormals normals(mesh);
    const std::uint32_t n = static_cast<std::uint32_t>(resolution);
    std::vector<float> values(static_cast<std::size_t>(n) * n * n);
    parallel_for(values.size(), threads, [&](std::size_t idx) {
        const std::uint32_t i = static_cast<std::uint32_t>(idx % n);
        const std::uint32_t j = static_cast<std::uint32_t>((idx / n) % n);
        const std::uint32_t k = static_cast<std::uint32_t>(idx / (n * n));
        const Vec3 p = origin + spacing * Vec3{static_cast<double>(i),
                                               static_cast<double>(j),
                                               static_cast<double>(k)};
        values[idx] = static_cast<float>(signed_distance_to_mesh(bvh, normals, p));
    });
    return GridSdf(n, n, n, origin, spacing, std::move(values));
}

}  // namespace shrinkwrap
