#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "shrinkwrap/resample.hpp"
#include "shrinkwrap/sdf/field.hpp"
#include "shrinkwrap/shrink.hpp"

namespace shrinkwrap {

struct DiskSdf final : ScalarField2 {
    Vec2 center;
    double radius;
    DiskSdf(const Vec2& c, double r) : center(c), radius(r) {}
    double eval(const Vec2& p) const override { return (p - center).norm() - radius; }
    Vec2 grad(const Vec2& p) const override {
        const Vec2 d = p - center;
        const double n = d.norm();
        return n > 0.0 ? d / n : Vec2{};
    }
};

/// Exact signed distance to a simple closed polygon (even-odd sign rule).
class PolygonSdf final : public ScalarField2 {
public:
    explicit PolygonSdf(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
        if (verts_.size() < 3)
            throw std::invalid_argument("polygon needs >= 3 vertices");
    }

    double eval(const Vec2& p) const override {
        Vec2 q;
        const double d = unsigned_distance(p, q);
        return inside(p) ? -d : d;
    }

    Vec2 grad(const Vec2& p) const override {
        Vec2 q;
        const double d = unsigned_distance(p, q);
        if (d <= 0.0) return {};
        // Gradient points away from the boundary outside, toward it inside,
        // which is the same direction either way: from q through p (outside)
        // or from p through q negated (inside).
        const Vec2 dir = (p - q) / d;
        return inside(p) ? Vec2{-dir.x, -dir.y} : dir;
    }

private:
    double unsigned_distance(const Vec2& p, Vec2& closest) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < verts_.size(); ++i) {
            const Vec2& a = verts_[i];
            const Vec2& b = verts_[(i + 1) % verts_.size()];
            const Vec2 ab = b - a;
            const double t =
                std::clamp((p - a).dot(ab) / ab.squared_norm(), 0.0, 1.0);
            const Vec2 q = a + ab * t;
            const double d = (p - q).norm();
            if (d < best) {
                best = d;
                closest = q;
            }
        }
        return best;
    }

    bool inside(const Vec2& p) const {
        bool in = false;
        for (std::size_t i = 0, j = verts_.size() - 1; i < verts_.size(); j = i++) {
            const Vec2& a = verts_[i];
            const Vec2& b = verts_[j];
            if ((a.y > p.y) != (b.y > p.y) &&
                p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
                in = !in;
        }
        return in;
    }

    std::vector<Vec2> verts_;
};

/// Closed polyline contracting in the plane; carries per-anchor velocity for
/// momentum.
struct Curve2D {
    std::vector<Vec2> points;
    std::vector<Vec2> velocity;
};

inline Curve2D init_circle(int n, double radius, const Vec2& center = {0, 0}) {
    if (n < 3) throw std::invalid_argument("circle needs n >= 3");
    Curve2D c;
    c.points.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        c.points.push_back(center + radius * Vec2{std::cos(a), std::sin(a)});
    }
    c.velocity.assign(n, Vec2{});
    return c;
}

namespace detail {

inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                               const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return (q - p).cross(r - p);
    };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

inline void check_simple(const std::vector<Vec2>& pts) {
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent around the seam
            if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j],
                                   pts[(j + 1) % n]))
                throw std::runtime_error("curve self-intersects at segments " +
                                         std::to_string(i) + " and " +
                                         std::to_string(j));
        }
}

/// Resamples positions uniformly by arc length and carries velocities along
/// with the same interpolation weights.
inline void resample_curve(Curve2D& c) {
    const auto cum = cumulative_lengths(c.points, /*closed=*/true);
    const double total = cum.back();
    if (!(total > 0.0)) throw std::runtime_error("zero-length curve");
    const std::size_t n = c.points.size();
    std::vector<Vec2> np(n), nv(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = total * static_cast<double>(k) / static_cast<double>(n);
        std::size_t lo = 0, hi = cum.size() - 1;
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cum[mid] <= s) lo = mid;
            else hi = mid;
        }
        const std::size_t next = (lo + 1) % n;
        const double seg = cum[lo + 1] - cum[lo];
        const double t = seg > 0.0 ? (s - cum[lo]) / seg : 0.0;
        np[k] = c.points[lo] + (c.points[next] - c.points[lo]) * t;
        nv[k] = c.velocity[lo] + (c.velocity[next] - c.velocity[lo]) * t;
    }
    c.points = std::move(np);
    c.velocity = std::move(nv);
}

}  // namespace detail

struct Shrink2DResult {
    Curve2D curve;
    std::vector<double> history;
    bool converged = false;
};

/// Planar validation mode: momentum step v <- beta*v - s*g/(|g|+eps)*t,
/// x <- x + v, followed by closed arc-length resampling each iteration.
inline Shrink2DResult shrink_2d(const ScalarField2& field, Curve2D curve,
                                const ShrinkConfig& cfg) {
    cfg.validate();
    Shrink2DResult result;
    result.curve = std::move(curve);
    auto& c = result.curve;
    if (c.velocity.size() != c.points.size()) c.velocity.assign(c.points.size(), {});

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        for (std::size_t k = 0; k < c.points.size(); ++k) {
            const double s = field.eval(c.points[k]);
            if (!std::isfinite(s))
                throw std::runtime_error("non-finite field value at anchor " +
                                         std::to_string(k));
            const Vec2 g = field.grad(c.points[k]);
            const double gn = g.norm();
            Vec2 v = c.velocity[k] * cfg.momentum;
            if (gn > 10.0 * cfg.epsilon)
                v -= g * (s * cfg.step / (gn + cfg.epsilon));
            c.velocity[k] = v;
            c.points[k] += v;
        }
        if (cfg.resample_mode != ResampleMode::Off) {
            detail::resample_curve(c);
            detail::check_simple(c.points);
        }
        double acc = 0.0;
        for (const Vec2& p : c.points) acc += std::abs(field.eval(p));
        const double residual = acc / static_cast<double>(c.points.size());
        result.history.push_back(residual);
        if (residual <= cfg.residual_tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace shrinkwrap
