#include <catch_amalgamated.hpp>

#include "shrinkwrap/mesh_to_sdf.hpp"
#include "shrinkwrap/shapes.hpp"
#include "test_util.hpp"

using namespace shrinkwrap;
using swtest::Rng;

TEST_CASE("icosphere grid matches the analytic sphere SDF") {
    const auto mesh = make_icosphere(3, 1.0);
    const auto grid = mesh_to_grid_sdf(mesh, 32, 0.1);
    // Max deviation of the tessellation from the true sphere: sagitta of the
    // largest face.
    double tess_err = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec3 c = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] +
                        mesh.vertices[tri[2]]) / 3.0;
        tess_err = std::max(tess_err, 1.0 - c.norm());
    }
    const double tol = 0.02 * grid.spacing() + tess_err;
    for (std::uint32_t k = 0; k < grid.nz(); ++k)
        for (std::uint32_t j = 0; j < grid.ny(); ++j)
            for (std::uint32_t i = 0; i < grid.nx(); ++i) {
                const Vec3 p = grid.origin() +
                               grid.spacing() * Vec3{double(i), double(j), double(k)};
                const double analytic = p.norm() - 1.0;
                REQUIRE(std::abs(grid.at(i, j, k) - analytic) <= tol);
            }
}

TEST_CASE("cube grid center value is minus the half edge") {
    const auto mesh = make_cube_mesh({0, 0, 0}, 0.5);
    const auto grid = mesh_to_grid_sdf(mesh, 16, 0.1);
    CHECK(grid.eval({0, 0, 0}) == Catch::Approx(-0.5).margin(0.05));
}

TEST_CASE("grid corners are outside the shape") {
    const auto mesh = make_icosphere(2, 0.7);
    const auto grid = mesh_to_grid_sdf(mesh, 12, 0.1);
    const std::uint32_t n = grid.nx();
    for (std::uint32_t k : {0u, n - 1})
        for (std::uint32_t j : {0u, n - 1})
            for (std::uint32_t i : {0u, n - 1})
                CHECK(grid.at(i, j, k) > 0.0f);
}

TEST_CASE("flipping windings flips every sign") {
    auto mesh = make_icosphere(1, 0.8);
    const auto grid = mesh_to_grid_sdf(mesh, 10, 0.12);
    for (auto& tri : mesh.triangles) std::swap(tri[1], tri[2]);
    const auto flipped = mesh_to_grid_sdf(mesh, 10, 0.12);
    for (std::size_t v = 0; v < grid.values().size(); ++v)
        REQUIRE(grid.values()[v] == Catch::Approx(-flipped.values()[v]).margin(1e-6));
}

TEST_CASE("non-watertight meshes are rejected with a boundary edge count") {
    TriangleMesh open;
    open.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    open.triangles = {{0, 1, 2}};
    try {
        mesh_to_grid_sdf(open, 8, 0.1);
        FAIL("expected rejection");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("3 boundary edges") != std::string::npos);
    }
}

TEST_CASE("grid values respect the Lipschitz bound between neighbors") {
    const auto mesh = make_cube_mesh({0, 0, 0}, 0.4);
    const auto grid = mesh_to_grid_sdf(mesh, 12, 0.1);
    const double bound = grid.spacing() + 1e-6;
    const std::uint32_t n = grid.nx();
    for (std::uint32_t k = 0; k < n; ++k)
        for (std::uint32_t j = 0; j < n; ++j)
            for (std::uint32_t i = 0; i + 1 < n; ++i)
                REQUIRE(std::abs(grid.at(i + 1, j, k) - grid.at(i, j, k)) <= bound);
}

TEST_CASE("resolution below 8 is rejected") {
    const auto mesh = make_cube_mesh();
    CHECK_THROWS_AS(mesh_to_grid_sdf(mesh, 7, 0.1), std::invalid_argument);
}

TEST_CASE("grid build is deterministic across thread counts") {
    const auto mesh = make_icosphere(1, 0.6);
    const auto g1 = mesh_to_grid_sdf(mesh, 10, 0.1, 1);
    const auto g8 = mesh_to_grid_sdf(mesh, 10, 0.1, 8);
    CHECK(g1.values() == g8.values());
}
