#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "shrinkwrap/sdf/field.hpp"

namespace shrinkwrap {

/// Closed-form signed distances for simple primitives plus min/max CSG.
/// Single primitives are exact; a union/intersection value is exact away
/// from the medial set of its children and a valid signed bound everywhere.
class AnalyticSdf final : public ScalarField3 {
public:
    static AnalyticSdf sphere(const Vec3& center, double radius) {
        require_positive(radius, "sphere radius");
        AnalyticSdf s(Kind::Sphere);
        s.a_ = center;
        s.radius_ = radius;
        return s;
    }

    /// Axis-aligned box with optional rounded corners. `half_extents` is the
    /// half size of the core box before rounding is added.
    static AnalyticSdf box(const Vec3& center, const Vec3& half_extents,
                           double corner_radius = 0.0) {
        require_positive(half_extents.x, "box half extent x");
        require_positive(half_extents.y, "box half extent y");
        require_positive(half_extents.z, "box half extent z");
        if (corner_radius < 0.0)
            throw std::invalid_argument("box corner radius must be >= 0");
        AnalyticSdf s(Kind::Box);
        s.a_ = center;
        s.b_ = half_extents;
        s.radius_ = corner_radius;
        return s;
    }

    static AnalyticSdf capsule(const Vec3& a, const Vec3& b, double radius) {
        require_positive(radius, "capsule radius");
        AnalyticSdf s(Kind::Capsule);
        s.a_ = a;
        s.b_ = b;
        s.radius_ = radius;
        return s;
    }

    static AnalyticSdf unite(AnalyticSdf lhs, AnalyticSdf rhs) {
        return combine(Kind::Union, std::move(lhs), std::move(rhs));
    }

    static AnalyticSdf intersect(AnalyticSdf lhs, AnalyticSdf rhs) {
        return combine(Kind::Intersection, std::move(lhs), std::move(rhs));
    }

    double eval(const Vec3& p) const override {
        switch (kind_) {
            case Kind::Sphere:
                return (p - a_).norm() - radius_;
            case Kind::Box: {
                const Vec3 q = (p - a_).cwise_abs() - b_;
                const Vec3 qpos = q.cwise_max(Vec3{0, 0, 0});
                return qpos.norm() + std::min(q.max_coeff(), 0.0) - radius_;
            }
            case Kind::Capsule: {
                const Vec3 pa = p - a_, ba = b_ - a_;
                const double h =
                    std::clamp(pa.dot(ba) / ba.squared_norm(), 0.0, 1.0);
                return (pa - ba * h).norm() - radius_;
            }
            case Kind::Union:
                return std::min(children_[0].eval(p), children_[1].eval(p));
            case Kind::Intersection:
                return std::max(children_[0].eval(p), children_[1].eval(p));
        }
        return 0.0;  // unreachable
    }

    Vec3 grad(const Vec3& p) const override {
        switch (kind_) {
            case Kind::Sphere:
                return (p - a_).normalized();
            case Kind::Box: {
                const Vec3 d = p - a_;
                const Vec3 sgn{d.x < 0 ? -1.0 : 1.0, d.y < 0 ? -1.0 : 1.0,
                               d.z < 0 ? -1.0 : 1.0};
                const Vec3 q = d.cwise_abs() - b_;
                const Vec3 qpos = q.cwise_max(Vec3{0, 0, 0});
                if (qpos.squared_norm() > 0.0) {
                    const Vec3 g = qpos.normalized();
                    return {g.x * sgn.x, g.y * sgn.y, g.z * sgn.z};
                }
                // Inside the core box: nearest face is the largest q component.
                Vec3 g{0, 0, 0};
                std::size_t k = 0;
                if (q.y > q[k]) k = 1;
                if (q.z > q[k]) k = 2;
                g[k] = sgn[k];
                return g;
            }
            case Kind::Capsule: {
                const Vec3 pa = p - a_, ba = b_ - a_;
                const double h =
                    std::clamp(pa.dot(ba) / ba.squared_norm(), 0.0, 1.0);
                return (pa - ba * h).normalized();
            }
            case Kind::Union: {
                const double l = children_[0].eval(p), r = children_[1].eval(p);
                return l <= r ? children_[0].grad(p) : children_[1].grad(p);
            }
            case Kind::Intersection: {
                const double l = children_[0].eval(p), r = children_[1].eval(p);
                return l >= r ? children_[0].grad(p) : children_[1].grad(p);
            }
        }
        return {};  // unreachable
    }

private:
    enum class Kind { Sphere, Box, Capsule, Union, Intersection };

    explicit AnalyticSdf(Kind k) : kind_(k) {}

    static AnalyticSdf combine(Kind k, AnalyticSdf lhs, AnalyticSdf rhs) {
        AnalyticSdf s(k);
        s.children_.reserve(2);
        s.children_.push_back(std::move(lhs));
        s.children_.push_back(std::move(rhs));
        return s;
    }

    static void require_positive(double v, const char* what) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string(what) + " must be > 0");
    }

    Kind kind_;
    Vec3 a_{}, b_{};
    double radius_ = 0.0;
    std::vector<AnalyticSdf> children_;
};

}  // namespace shrinkwrap
