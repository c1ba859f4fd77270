#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shrinkwrap/vec.hpp"

namespace shrinkwrap {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec2> uv;  // empty, or one entry per vertex

    bool has_uv() const { return !uv.empty(); }

    Vec3 triangle_normal(std::size_t t) const {
        const auto& tri = triangles[t];
        const Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
        const Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
        return e1.cross(e2);
    }

    double triangle_area(std::size_t t) const {
        return 0.5 * triangle_normal(t).norm();
    }

    double total_area() const {
        double a = 0.0;
        for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
        return a;
    }

    void bounds(Vec3& lo, Vec3& hi) const {
        if (vertices.empty())
            throw std::runtime_error("bounds of empty mesh");
        lo = hi = vertices[0];
        for (const Vec3& v : vertices) {
            lo = lo.cwise_min(v);
            hi = hi.cwise_max(v);
        }
    }
};

struct WatertightReport {
    bool closed = false;
    int boundary_edge_count = 0;
};

/// Closed iff every undirected edge is shared by exactly two triangles.
/// Vertices are identified by exact position first, so meshes that duplicate
/// vertices along a UV seam still count as closed.
inline WatertightReport mesh_watertight_check(const TriangleMesh& mesh) {
    std::map<std::array<double, 3>, int> welded;
    std::vector<int> remap(mesh.vertices.size());
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const Vec3& p = mesh.vertices[v];
        auto [it, inserted] =
            welded.try_emplace({p.x, p.y, p.z}, static_cast<int>(v));
        remap[v] = it->second;
    }
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            int a = remap[tri[e]], b = remap[tri[(e + 1) % 3]];
            if (a > b) std::swap(a, b);
            if (a == b) continue;  // collapsed seam edge
            ++edge_count[{a, b}];
        }
    WatertightReport rep;
    for (const auto& [edge, count] : edge_count)
        if (count != 2) ++rep.boundary_edge_count;
    rep.closed = rep.boundary_edge_count == 0 && !mesh.triangles.empty();
    return rep;
}

namespace detail {

inline void parse_face_ref(const std::string& token, int line_no, int& v, int& vt) {
    v = 0;
    vt = 0;
    const std::size_t s1 = token.find('/');
    try {
        if (s1 == std::string::npos) {
            v = std::stoi(token);
        } else {
            v = std::stoi(token.substr(0, s1));
            const std::size_t s2 = token.find('/', s1 + 1);
            const std::string mid = token.substr(
                s1 + 1, s2 == std::string::npos ? std::string::npos : s2 - s1 - 1);
            if (!mid.empty()) vt = std::stoi(mid);
        }
    } catch (const std::exception&) {
        throw std::runtime_error("OBJ line " + std::to_string(line_no) +
                                 ": bad face reference '" + token + "'");
    }
}

}  // namespace detail

/// Reads v / vt / f records (1-based indices); faces are fan-triangulated.
/// When texture coordinates are present, vertices are de-indexed so uv ends
/// up parallel to vertices. Degenerate triangles are dropped with a warning.
inline TriangleMesh load_obj(const std::string& path,
                             std::vector<std::string>* warnings = nullptr) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);

    std::vector<Vec3> positions;
    std::vector<Vec2> texcoords;
    struct Corner { int v, vt; };
    std::vector<std::array<Corner, 3>> faces;
    bool any_vt_ref = false;

    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z))
                throw std::runtime_error("OBJ line " + std::to_string(line_no) +
                                         ": malformed vertex");
            positions.push_back(p);
        } else if (tag == "vt") {
            Vec2 t;
            if (!(ls >> t.x >> t.y))
                throw std::runtime_error("OBJ line " + std::to_string(line_no) +
                                         ": malformed texcoord");
            texcoords.push_back(t);
        } else if (tag == "f") {
            std::vector<Corner> ring;
            std::string token;
            while (ls >> token) {
                int v, vt;
                detail::parse_face_ref(token, line_no, v, vt);
                if (v < 0) v = static_cast<int>(positions.size()) + v + 1;
                if (vt < 0) vt = static_cast<int>(texcoords.size()) + vt + 1;
                if (v < 1 || v > static_cast<int>(positions.size()))
                    throw std::runtime_error("OBJ line " + std::to_string(line_no) +
                                             ": vertex index out of range");
                if (vt != 0) {
                    if (vt < 1 || vt > static_cast<int>(texcoords.size()))
                        throw std::runtime_error("OBJ line " +
                                                 std::to_string(line_no) +
                                                 ": texcoord index out of range");
                    any_vt_ref = true;
                }
                ring.push_back({v - 1, vt - 1});
            }
            if (ring.size() < 3)
                throw std::runtime_error("OBJ line " + std::to_string(line_no) +
                                         ": face with fewer than 3 vertices");
            for (std::size_t i = 1; i + 1 < ring.size(); ++i)
                faces.push_back({ring[0], ring[i], ring[i + 1]});
        }
        // other records (vn, mtllib, usemtl, o, g, s) are ignored
    }

    TriangleMesh mesh;
    if (!any_vt_ref) {
        mesh.vertices = positions;
        for (const auto& f : faces)
            mesh.triangles.push_back({f[0].v, f[1].v, f[2].v});
    } else {
        // De-index so every output vertex carries a single uv.
        std::map<std::pair<int, int>, int> remap;
        for (const auto& f : faces) {
            std::array<int, 3> tri;
            for (int c = 0; c < 3; ++c) {
                const std::pair<int, int> key{f[c].v, f[c].vt};
                auto [it, inserted] = remap.try_emplace(
                    key, static_cast<int>(mesh.vertices.size()));
                if (inserted) {
                    mesh.vertices.push_back(positions[f[c].v]);
                    mesh.uv.push_back(f[c].vt >= 0 ? texcoords[f[c].vt]
                                                   : Vec2{0, 0});
                }
                tri[c] = it->second;
            }
            mesh.triangles.push_back(tri);
        }
    }

    // Drop degenerate triangles; they break pseudonormal signing downstream.
    std::vector<std::array<int, 3>> kept;
    kept.reserve(mesh.triangles.size());
    int dropped = 0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (mesh.triangle_area(t) < 1e-12) {
            ++dropped;
            continue;
        }
        kept.push_back(mesh.triangles[t]);
    }
    mesh.triangles = std::move(kept);
    if (dropped > 0 && warnings)
        warnings->push_back("dropped " + std::to_string(dropped) +
                            " degenerate triangle(s)");
    if (warnings) {
        const auto rep = mesh_watertight_check(mesh);
        if (!rep.closed)
            warnings->push_back("mesh is not watertight (" +
                                std::to_string(rep.boundary_edge_count) +
                                " boundary edges)");
    }
    return mesh;
}

inline void save_obj(const TriangleMesh& mesh, const std::string& path,
                     const std::string& mtl_name = {}) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    if (!mtl_name.empty())
        os << "mtllib " << mtl_name << "\nusemtl checker\n";
    char buf[96];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
        os << buf;
    }
    for (const Vec2& t : mesh.uv) {
        std::snprintf(buf, sizeof buf, "vt %.9g %.9g\n", t.x, t.y);
        os << buf;
    }
    const bool with_uv = mesh.has_uv();
    for (const auto& tri : mesh.triangles) {
        if (with_uv)
            os << "f " << tri[0] + 1 << "/" << tri[0] + 1 << " " << tri[1] + 1
               << "/" << tri[1] + 1 << " " << tri[2] + 1 << "/" << tri[2] + 1
               << "\n";
        else
            os << "f " << tri[0] + 1 << " " << tri[1] + 1 << " " << tri[2] + 1
               << "\n";
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace shrinkwrap
