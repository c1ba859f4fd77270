#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "shrinkwrap/vec.hpp"

namespace shrinkwrap {

/// The evolving parameterized surface: an (n_phi+1) x n_theta lattice of 3D
/// anchors. Row j=0 is the north pole, row j=n_phi the south pole; both are
/// logically a single point stored once per column. UV coordinates are fixed
/// at construction and never change; only positions move.
struct AnchorGrid {
    int n_theta = 0;  // azimuthal segments (closed direction)
    int n_phi = 0;    // polar segments (open direction)
    std::vector<Vec3> positions;  // row-major, (n_phi+1) rows of n_theta
    std::vector<Vec2> uv;         // parallel to positions

    int rows() const { return n_phi + 1; }
    int cols() const { return n_theta; }

    Vec3& at(int i, int j) { return positions[static_cast<std::size_t>(j) * n_theta + i]; }
    const Vec3& at(int i, int j) const {
        return positions[static_cast<std::size_t>(j) * n_theta + i];
    }

    bool is_pole_row(int j) const { return j == 0 || j == n_phi; }

    /// Number of geometrically distinct anchors (pole rows count once).
    int distinct_anchor_count() const { return (n_phi - 1) * n_theta + 2; }
};

/// Anchors on a sphere via uniform spherical-coordinate sampling:
/// theta_i = 2*pi*i/n_theta, phi_j = pi*j/n_phi.
inline AnchorGrid init_sphere(int n_theta, int n_phi, double radius,
                              const Vec3& center = {0, 0, 0}) {
    if (n_theta < 3) throw std::invalid_argument("n_theta must be >= 3");
    if (n_phi < 2) throw std::invalid_argument("n_phi must be >= 2");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
    AnchorGrid g;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    g.positions.reserve(static_cast<std::size_t>(n_phi + 1) * n_theta);
    g.uv.reserve(g.positions.capacity());
    for (int j = 0; j <= n_phi; ++j) {
        const double phi = std::numbers::pi * j / n_phi;
        const double sp = std::sin(phi), cp = std::cos(phi);
        for (int i = 0; i < n_theta; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / n_theta;
            Vec3 p = center + radius * Vec3{sp * std::cos(theta),
                                            sp * std::sin(theta), cp};
            if (j == 0 || j == n_phi) p = center + radius * Vec3{0, 0, cp};
            g.positions.push_back(p);
            g.uv.push_back({static_cast<double>(i) / n_theta,
                            static_cast<double>(j) / n_phi});
        }
    }
    return g;
}

}  // namespace shrinkwrap
