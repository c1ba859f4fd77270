#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shrinkwrap/sdf/field.hpp"

namespace shrinkwrap {

/// Axis-aligned lattice of signed distances with trilinear interpolation.
/// Values are stored x-fastest. Queries outside the bounds clamp to the
/// boundary and report it through the flagged overloads.
class GridSdf final : public ScalarField3 {
public:
    GridSdf(std::uint32_t nx, std::uint32_t ny, std::uint32_t nz, Vec3 origin,
            double spacing, std::vector<float> values)
        : nx_(nx), ny_(ny), nz_(nz), origin_(origin), spacing_(spacing),
          values_(std::move(values)) {
        if (nx_ < 2 || ny_ < 2 || nz_ < 2)
            throw std::invalid_argument("grid resolution must be >= 2 per axis");
        if (!(spacing_ > 0.0))
            throw std::invalid_argument("grid spacing must be > 0");
        if (values_.size() != static_cast<std::size_t>(nx_) * ny_ * nz_)
            throw std::invalid_argument("grid value count does not match resolution");
        for (float v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("grid contains non-finite value");
    }

    std::uint32_t nx() const { return nx_; }
    std::uint32_t ny() const { return ny_; }
    std::uint32_t nz() const { return nz_; }
    const Vec3& origin() const { return origin_; }
    double spacing() const { return spacing_; }
    const std::vector<float>& values() const { return values_; }

    Vec3 max_corner() const {
        return origin_ + Vec3{spacing_ * (nx_ - 1), spacing_ * (ny_ - 1),
                              spacing_ * (nz_ - 1)};
    }

    float at(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        return values_[static_cast<std::size_t>(k) * ny_ * nx_ +
                       static_cast<std::size_t>(j) * nx_ + i];
    }

    double eval(const Vec3& p) const override {
        bool clamped = false;
        return eval_flagged(p, clamped);
    }

    /// Trilinear interpolation; sets `clamped` if p had to be clamped to the
    /// grid bounds.
    double eval_flagged(const Vec3& p, bool& clamped) const {
        const Cell c = locate(p, clamped);
        const double fx = c.f[0], fy = c.f[1], fz = c.f[2];
        double v = 0.0;
        for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx) {
                    const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) *
                                     (dz ? fz : 1.0 - fz);
                    v += w * at(c.i[0] + dx, c.i[1] + dy, c.i[2] + dz);
                }
        return v;
    }

    Vec3 grad(const Vec3& p) const override {
        bool clamped = false;
        const Cell c = locate(p, clamped);
        const double fx = c.f[0], fy = c.f[1], fz = c.f[2];
        auto corner = [&](int dx, int dy, int dz) {
            return static_cast<double>(at(c.i[0] + dx, c.i[1] + dy, c.i[2] + dz));
        };
        // Partial derivatives of the trilinear interpolant over this cell.
        Vec3 g{0, 0, 0};
        for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy) {
                const double wyz = (dy ? fy : 1.0 - fy) * (dz ? fz : 1.0 - fz);
                g.x += wyz * (corner(1, dy, dz) - corner(0, dy, dz));
            }
        for (int dz = 0; dz < 2; ++dz)
            for (int dx = 0; dx < 2; ++dx) {
                const double wxz = (dx ? fx : 1.0 - fx) * (dz ? fz : 1.0 - fz);
                g.y += wxz * (corner(dx, 1, dz) - corner(dx, 0, dz));
            }
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const double wxy = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
                g.z += wxy * (corner(dx, dy, 1) - corner(dx, dy, 0));
            }
        return g / spacing_;
    }

    static constexpr char kMagic[9] = "SDFGRID1";

    void save(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open for writing: " + path);
        os.write(kMagic, 8);
        write_u32(os, nx_);
        write_u32(os, ny_);
        write_u32(os, nz_);
        write_f64(os, origin_.x);
        write_f64(os, origin_.y);
        write_f64(os, origin_.z);
        write_f64(os, spacing_);
        os.write(reinterpret_cast<const char*>(values_.data()),
                 static_cast<std::streamsize>(values_.size() * sizeof(float)));
        if (!os) throw std::runtime_error("write failed: " + path);
    }

    static GridSdf load(const std::string& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw std::runtime_error("cannot open: " + path);
        char magic[8];
        is.read(magic, 8);
        if (!is || std::memcmp(magic, kMagic, 8) != 0)
            throw std::runtime_error("not an SDFGRID1 file: " + path);
        const std::uint32_t nx = read_u32(is), ny = read_u32(is), nz = read_u32(is);
        Vec3 origin{read_f64(is), read_f64(is), read_f64(is)};
        const double spacing = read_f64(is);
        std::vector<float> vals(static_cast<std::size_t>(nx) * ny * nz);
        is.read(reinterpret_cast<char*>(vals.data()),
                static_cast<std::streamsize>(vals.size() * sizeof(float)));
        if (!is) throw std::runtime_error("truncated SDFGRID1 file: " + path);
        return GridSdf(nx, ny, nz, origin, spacing, std::move(vals));
    }

private:
    struct Cell {
        std::uint32_t i[3];
        double f[3];
    };

    Cell locate(const Vec3& p, bool& clamped) const {
        Cell c;
        const std::uint32_t n[3] = {nx_, ny_, nz_};
        for (int a = 0; a < 3; ++a) {
            double u = (p[static_cast<std::size_t>(a)] - origin_[static_cast<std::size_t>(a)]) / spacing_;
            if (u < 0.0) { u = 0.0; clamped = true; }
            const double umax = static_cast<double>(n[a] - 1);
            if (u > umax) { u = umax; clamped = true; }
            double cell = std::floor(u);
            // On a face, take the cell toward the grid interior.
            if (cell == u && 2.0 * cell > static_cast<double>(n[a] - 2)) cell -= 1.0;
            if (cell < 0.0) cell = 0.0;
            if (cell > static_cast<double>(n[a] - 2)) cell = static_cast<double>(n[a] - 2);
            c.i[a] = static_cast<std::uint32_t>(cell);
            c.f[a] = u - cell;
        }
        return c;
    }

    static void write_u32(std::ostream& os, std::uint32_t v) {
        os.write(reinterpret_cast<const char*>(&v), 4);
    }
    static void write_f64(std::ostream& os, double v) {
        os.write(reinterpret_cast<const char*>(&v), 8);
    }
    static std::uint32_t read_u32(std::istream& is) {
        std::uint32_t v = 0;
        is.read(reinterpret_cast<char*>(&v), 4);
        return v;
    }
    static double read_f64(std::istream& is) {
        double v = 0;
        is.read(reinterpret_cast<char*>(&v), 8);
        return v;
    }

    std::uint32_t nx_, ny_, nz_;
    Vec3 origin_;
    double spacing_;
    std::vector<float> values_;
};

}  // namespace shrinkwrap
