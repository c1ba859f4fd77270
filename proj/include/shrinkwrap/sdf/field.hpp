#pragma once

#include "shrinkwrap/vec.hpp"

namespace shrinkwrap {

/// Signed-distance oracle: negative inside, positive outside, zero on the
/// surface. Implementations must be deterministic and safe to query from
/// multiple threads after construction.
class ScalarField3 {
public:
    virtual ~ScalarField3() = default;

    /// Signed distance at p, world units.
    virtual double eval(const Vec3& p) const = 0;

    /// Spatial gradient of eval at p.
    virtual Vec3 grad(const Vec3& p) const = 0;
};

/// 2D counterpart, used by the planar validation mode.
class ScalarField2 {
public:
    virtual ~ScalarField2() = default;
    virtual double eval(const Vec2& p) const = 0;
    virtual Vec2 grad(const Vec2& p) const = 0;
};

}  // namespace shrinkwrap
