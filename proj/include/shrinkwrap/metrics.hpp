#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shrinkwrap/anchor_grid.hpp"
#include "shrinkwrap/mesh.hpp"

namespace shrinkwrap {

struct SurfaceSample {
    Vec3 point;
    Vec3 normal;
};

/// Area-weighted uniform surface sampling with face normals. Deterministic
/// for a given seed: the generator is a seeded mt19937_64 and doubles are
/// derived from it with fixed arithmetic, not distribution objects.
inline std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh,
                                                 int n, std::uint64_t seed) {
    std::vector<double> cum;
    cum.reserve(mesh.triangles.size());
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        total += mesh.triangle_area(t);
        cum.push_back(total);
    }
    if (!(total > 0.0)) throw std::invalid_argument("mesh has zero area");

    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return (rng() >> 11) * 0x1.0p-53; };

    std::vector<SurfaceSample> samples;
    samples.reserve(n);
    for (int s = 0; s < n; ++s) {
        const double target = uniform() * total;
        const std::size_t t =
            std::lower_bound(cum.begin(), cum.end(), target) - cum.begin();
        const std::size_t tt = std::min(t, mesh.triangles.size() - 1);
        const auto& tri = mesh.triangles[tt];
        double u = uniform(), v = uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        samples.push_back({a + (b - a) * u + (c - a) * v,
                           mesh.triangle_normal(tt).normalized()});
    }
    return samples;
}

/// Uniform spatial hash over a point set for nearest-neighbor queries,
/// sized to roughly n^(1/3) cells per axis.
class PointIndex {
public:
    explicit PointIndex(const std::vector<SurfaceSample>& samples)
        : samples_(samples) {
        if (samples.empty()) throw std::invalid_argument("empty sample set");
        lo_ = hi_ = samples[0].point;
        for (const auto& s : samples) {
            lo_ = lo_.cwise_min(s.point);
            hi_ = hi_.cwise_max(s.point);
        }
        const int m = std::max(
            1, static_cast<int>(std::cbrt(static_cast<double>(samples.size()))));
        res_ = m;
        const Vec3 ext = hi_ - lo_;
        cell_ = std::max({ext.x, ext.y, ext.z, 1e-12}) / m;
        cells_.assign(static_cast<std::size_t>(m) * m * m, {});
        for (std::size_t i = 0; i < samples.size(); ++i)
            cells_[cell_index(samples[i].point)].push_back(static_cast<int>(i));
    }

    /// Index of the sample nearest to q (exact, not approximate).
    int nearest(const Vec3& q) const {
        int cx, cy, cz;
        cell_coords(q, cx, cy, cz);
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int ring = 0;; ++ring) {
            if (ring > 0 && best >= 0) {
                // Cells at this shell or beyond lie outside the box of cells
                // already scanned; if even the boundary of that box is farther
                // than the best hit, no later shell can improve on it.
                const double dx_lo = q.x - (lo_.x + (cx - ring + 1) * cell_);
                const double dx_hi = (lo_.x + (cx + ring) * cell_) - q.x;
                const double dy_lo = q.y - (lo_.y + (cy - ring + 1) * cell_);
                const double dy_hi = (lo_.y + (cy + ring) * cell_) - q.y;
                const double dz_lo = q.z - (lo_.z + (cz - ring + 1) * cell_);
                const double dz_hi = (lo_.z + (cz + ring) * cell_) - q.z;
                const double min_exit = std::min({dx_lo, dx_hi, dy_lo, dy_hi,
                                                  dz_lo, dz_hi});
                if (min_exit >= 0.0 && min_exit * min_exit >= best_d2) break;
            }
            bool any_cell = false;
            for (int dz = -ring; dz <= ring; ++dz)
                for (int dy = -ring; dy <= ring; ++dy)
                    for (int dx = -ring; dx <= ring; ++dx) {
                        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) !=
                            ring)
                            continue;  // shell only
                        const int x = cx + dx, y = cy + dy, z = cz + dz;
                        if (x < 0 || y < 0 || z < 0 || x >= res_ || y >= res_ ||
                            z >= res_)
                            continue;
                        any_cell = true;
                        for (int idx : cells_[(static_cast<std::size_t>(z) * res_ +
                                               y) * res_ + x]) {
                            const double d2 =
                                (samples_[idx].point - q).squared_norm();
                            if (d2 < best_d2) {
                                best_d2 = d2;
                                best = idx;
                            }
                        }
                    }
            if (!any_cell && ring >= res_) break;  // swept the whole lattice
        }
        return best;
    }

private:
    void cell_coords(const Vec3& p, int& x, int& y, int& z) const {
        x = std::clamp(static_cast<int>((p.x - lo_.x) / cell_), 0, res_ - 1);
        y = std::clamp(static_cast<int>((p.y - lo_.y) / cell_), 0, res_ - 1);
        z = std::clamp(static_cast<int>((p.z - lo_.z) / cell_), 0, res_ - 1);
    }
    std::size_t cell_index(const Vec3& p) const {
        int x, y, z;
        cell_coords(p, x, y, z);
        return (static_cast<std::size_t>(z) * res_ + y) * res_ + x;
    }

    const std::vector<SurfaceSample>& samples_;
    Vec3 lo_, hi_;
    int res_ = 1;
    double cell_ = 1.0;
    std::vector<std::vector<int>> cells_;
};

/// Symmetric squared-distance Chamfer, reported x1000.
inline double chamfer_distance(const std::vector<SurfaceSample>& a,
                               const std::vector<SurfaceSample>& b) {
    const PointIndex ia(a), ib(b);
    double sum_ab = 0.0;
    for (const auto& s : a)
        sum_ab += (s.point - b[ib.nearest(s.point)].point).squared_norm();
    double sum_ba = 0.0;
    for (const auto& s : b)
        sum_ba += (s.point - a[ia.nearest(s.point)].point).squared_norm();
    return (sum_ab / a.size() + sum_ba / b.size()) * 1000.0;
}

/// Mean absolute cosine between normals at nearest-neighbor pairs, averaged
/// over both directions; 1 is a perfect match.
inline double normal_consistency(const std::vector<SurfaceSample>& a,
                                 const std::vector<SurfaceSample>& b) {
    for (const auto* set : {&a, &b})
        for (const auto& s : *set)
            if (s.normal.norm() < 1e-12)
                throw std::invalid_argument("zero-length normal in sample set");
    const PointIndex ia(a), ib(b);
    double sum_a = 0.0;
    for (const auto& s : a)
        sum_a += std::abs(s.normal.dot(b[ib.nearest(s.point)].normal));
    double sum_b = 0.0;
    for (const auto& s : b)
        sum_b += std::abs(s.normal.dot(a[ia.nearest(s.point)].normal));
    return 0.5 * (sum_a / a.size() + sum_b / b.size());
}

/// Counts orientation reversals over the anchor grid's quad triangulation:
/// a triangle whose normal flips against its quad partner or against the
/// same triangle of the previous quad in the row. Degenerate triangles at
/// the pole rows contribute nothing.
inline int uv_fold_check(const AnchorGrid& grid) {
    const int nt = grid.n_theta, np = grid.n_phi;
    auto tri_normal = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
        return (b - a).cross(c - a);
    };
    int folds = 0;
    std::vector<Vec3> row_n0(nt);
    for (int j = 0; j < np; ++j) {
        for (int i = 0; i < nt; ++i) {
            const int i1 = (i + 1) % nt;
            const Vec3& p00 = grid.at(i, j);
            const Vec3& p10 = grid.at(i1, j);
            const Vec3& p01 = grid.at(i, j + 1);
            const Vec3& p11 = grid.at(i1, j + 1);
            const Vec3 n0 = tri_normal(p00, p01, p11);
            const Vec3 n1 = tri_normal(p00, p11, p10);
            if (n0.norm() > 1e-15 && n1.norm() > 1e-15 && n0.dot(n1) < 0.0)
                ++folds;
            if (i > 0 && n0.norm() > 1e-15 && row_n0[i - 1].norm() > 1e-15 &&
                n0.dot(row_n0[i - 1]) < 0.0)
                ++folds;
            row_n0[i] = n0;
        }
    }
    return folds;
}

/// Triangulates the anchor grid into a UV-carrying mesh. The theta seam is
/// duplicated (u=0 and u=1 vertices share a position) and each pole becomes
/// a single fan apex, giving (n_phi-1)*(n_theta+1) + 2 vertices.
inline TriangleMesh anchor_grid_to_mesh(const AnchorGrid& grid) {
    const int nt = grid.n_theta, np = grid.n_phi;
    TriangleMesh mesh;
    auto vid = [&](int i, int j) { return (j - 1) * (nt + 1) + i; };
    for (int j = 1; j < np; ++j)
        for (int i = 0; i <= nt; ++i) {
            mesh.vertices.push_back(grid.at(i % nt, j));
            mesh.uv.push_back({static_cast<double>(i) / nt,
                               static_cast<double>(j) / np});
        }
    const int north = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(grid.at(0, 0));
    mesh.uv.push_back({0.5, 0.0});
    const int south = north + 1;
    mesh.vertices.push_back(grid.at(0, np));
    mesh.uv.push_back({0.5, 1.0});

    for (int i = 0; i < nt; ++i) {
        mesh.triangles.push_back({north, vid(i, 1), vid(i + 1, 1)});
        mesh.triangles.push_back({vid(i, np - 1), south, vid(i + 1, np - 1)});
    }
    for (int j = 1; j + 1 < np; ++j)
        for (int i = 0; i < nt; ++i) {
            mesh.triangles.push_back({vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)});
            mesh.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i + 1, j)});
        }
    return mesh;
}

struct MetricsReport {
    double cd = 0.0;
    double nc = 0.0;
    int fold_count = 0;
    double mean_abs_residual = 0.0;
    int iterations = 0;
    int samples_used = 0;
    std::uint64_t seed = 0;

    std::string to_json() const {
        std::ostringstream os;
        os.precision(12);
        os << "{\"cd\": " << cd << ", \"nc\": " << nc
           << ", \"fold_count\": " << fold_count
           << ", \"mean_abs_residual\": " << mean_abs_residual
           << ", \"iterations\": " << iterations
           << ", \"samples_used\": " << samples_used << ", \"seed\": " << seed
           << "}";
        return os.str();
    }

    std::string to_table() const {
        std::ostringstream os;
        os.precision(8);
        os << "metric              value\n"
           << "chamfer-distance    " << cd << "\n"
           << "normal-consistency  " << nc << "\n"
           << "fold-count          " << fold_count << "\n"
           << "mean-abs-residual   " << mean_abs_residual << "\n"
           << "iterations          " << iterations << "\n"
           << "samples             " << samples_used << "\n"
           << "seed                " << seed << "\n";
        return os.str();
    }
};

}  // namespace shrinkwrap
