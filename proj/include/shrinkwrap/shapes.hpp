#pragma once

#include <cmath>
#include <map>

#include "shrinkwrap/mesh.hpp"

namespace shrinkwrap {

/// Axis-aligned cube as 8 vertices / 12 triangles, outward-facing windings.
inline TriangleMesh make_cube_mesh(const Vec3& center = {0, 0, 0},
                                   double half_edge = 0.5) {
    TriangleMesh m;
    for (int k = 0; k < 8; ++k)
        m.vertices.push_back(center + half_edge * Vec3{k & 1 ? 1.0 : -1.0,
                                                       k & 2 ? 1.0 : -1.0,
                                                       k & 4 ? 1.0 : -1.0});
    const int quads[6][4] = {
        {0, 2, 3, 1},  // -z
        {4, 5, 7, 6},  // +z
        {0, 1, 5, 4},  // -y
        {2, 6, 7, 3},  // +y
        {0, 4, 6, 2},  // -x
        {1, 3, 7, 5},  // +x
    };
    for (const auto& q : quads) {
        m.triangles.push_back({q[0], q[1], q[2]});
        m.triangles.push_back({q[0], q[2], q[3]});
    }
    return m;
}

/// Icosphere by repeated midpoint subdivision of an icosahedron, vertices
/// projected to the sphere after each level.
inline TriangleMesh make_icosphere(int subdivisions, double radius = 1.0,
                                   const Vec3& center = {0, 0, 0}) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh m;
    const Vec3 base[12] = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (const Vec3& v : base) m.vertices.push_back(v.normalized());
    m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                   {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                   {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                   {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto [it, inserted] =
                midpoint.try_emplace({key.first, key.second},
                                     static_cast<int>(m.vertices.size()));
            if (inserted)
                m.vertices.push_back(
                    ((m.vertices[a] + m.vertices[b]) * 0.5).normalized());
            return it->second;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(m.triangles.size() * 4);
        for (const auto& tri : m.triangles) {
            const int a = mid(tri[0], tri[1]);
            const int b = mid(tri[1], tri[2]);
            const int c = mid(tri[2], tri[0]);
            next.push_back({tri[0], a, c});
            next.push_back({tri[1], b, a});
            next.push_back({tri[2], c, b});
            next.push_back({a, b, c});
        }
        m.triangles = std::move(next);
    }
    for (Vec3& v : m.vertices) v = center + radius * v;
    return m;
}

}  // namespace shrinkwrap
