#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "shrinkwrap/mc_tables.hpp"
#include "shrinkwrap/mesh.hpp"
#include "shrinkwrap/sdf/grid.hpp"

namespace shrinkwrap {

/// Standard marching cubes over a sampled grid. Edge vertices are placed by
/// linear interpolation of the two corner values,
///   u_e = (x_a * s_b - x_b * s_a) / (s_b - s_a),
/// with the midpoint substituted when |s_a - s_b| < 1e-12 (the interpolation
/// is singular there). Shared-edge vertices are deduplicated by a lattice
/// edge key, so adjacent cells emit identical vertices and closed isosurfaces
/// come out watertight. Returns an empty mesh when no cell changes sign.
inline TriangleMesh marching_cubes(const GridSdf& grid, double iso = 0.0) {
    TriangleMesh mesh;
    const std::uint32_t nx = grid.nx(), ny = grid.ny(), nz = grid.nz();

    // Global edge key: owning corner lattice index * 3 + axis.
    std::unordered_map<std::uint64_t, int> edge_vertex;
    auto corner_pos = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k) {
        return grid.origin() + grid.spacing() * Vec3{static_cast<double>(i),
                                                     static_cast<double>(j),
                                                     static_cast<double>(k)};
    };

    for (std::uint32_t k = 0; k + 1 < nz; ++k)
        for (std::uint32_t j = 0; j + 1 < ny; ++j)
            for (std::uint32_t i = 0; i + 1 < nx; ++i) {
                const std::uint32_t ci[8][3] = {
                    {i, j, k},         {i + 1, j, k},
                    {i + 1, j + 1, k}, {i, j + 1, k},
                    {i, j, k + 1},     {i + 1, j, k + 1},
                    {i + 1, j + 1, k + 1}, {i, j + 1, k + 1}};
                double s[8];
                int cube = 0;
                for (int c = 0; c < 8; ++c) {
                    s[c] = static_cast<double>(grid.at(ci[c][0], ci[c][1], ci[c][2])) - iso;
                    if (s[c] < 0.0) cube |= 1 << c;
                }
                const std::uint16_t edges = mc::kEdgeTable[cube];
                if (edges == 0) continue;

                int everts[12];
                for (int e = 0; e < 12; ++e) {
                    if (!(edges & (1u << e))) continue;
                    const int a = mc::kEdgeCorners[e][0];
                    const int b = mc::kEdgeCorners[e][1];
                    // Identify the lattice edge: lower corner + axis.
                    std::uint32_t lo[3];
                    int axis = -1;
                    for (int d = 0; d < 3; ++d) {
                        lo[d] = std::min(ci[a][d], ci[b][d]);
                        if (ci[a][d] != ci[b][d]) axis = d;
                    }
                    const std::uint64_t key =
                        ((static_cast<std::uint64_t>(lo[2]) * ny + lo[1]) * nx +
                         lo[0]) * 3 + static_cast<std::uint64_t>(axis);
                    auto it = edge_vertex.find(key);
                    if (it == edge_vertex.end()) {
                        const Vec3 xa = corner_pos(ci[a][0], ci[a][1], ci[a][2]);
                        const Vec3 xb = corner_pos(ci[b][0], ci[b][1], ci[b][2]);
                        Vec3 v;
                        if (std::abs(s[a] - s[b]) < 1e-12)
                            v = (xa + xb) * 0.5;
                        else
                            v = (xa * s[b] - xb * s[a]) / (s[b] - s[a]);
                        it = edge_vertex.emplace(key, static_cast<int>(
                                                          mesh.vertices.size()))
                                 .first;
                        mesh.vertices.push_back(v);
                    }
                    everts[e] = it->second;
                }

                const auto& tris = mc::kTriTable[cube];
                for (int t = 0; tris[t] != -1; t += 3)
                    mesh.triangles.push_back({everts[tris[t]],
                                              everts[tris[t + 2]],
                                              everts[tris[t + 1]]});
            }
    return mesh;
}

}  // namespace shrinkwrap
