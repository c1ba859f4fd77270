#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>
#include <numeric>

#include "shrinkwrap/resample.hpp"
#include "test_util.hpp"

using namespace shrinkwrap;
using swtest::Rng;

namespace {

double closed_perimeter(const std::vector<Vec3>& pts) {
    double L = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        L += (pts[(i + 1) % pts.size()] - pts[i]).norm();
    return L;
}

std::vector<Vec3> random_closed_polyline(Rng& rng, int n) {
    // a star-shaped loop around the origin, guaranteed simple
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        const double r = rng.uniform(0.5, 1.5);
        pts.push_back({r * std::cos(a), r * std::sin(a), rng.uniform(-0.2, 0.2)});
    }
    return pts;
}

}  // namespace

TEST_CASE("uniform square stays fixed under closed resampling") {
    const std::vector<Vec3> square = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    const auto out = resample_closed_polyline(square, 4);
    for (int i = 0; i < 4; ++i)
        CHECK((out[i] - square[i]).norm() <= 1e-12);
}

TEST_CASE("slid square corner is restored to uniform phase positions") {
    // same square but with one point slid along its edge
    const std::vector<Vec3> slid = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0.5, 1, 0}};
    const auto out = resample_closed_polyline(slid, 4);
    // perimeter 3.5 + sqrt(0.25+1)... compute expected arc positions by hand:
    // L = 1 + 1 + 0.5 + |(0.5,1)->(0,1)->(0,0)| is a 5-segment walk; easier to
    // assert the construction property directly: equal gaps along the slid
    // polyline and output[0] == input[0].
    CHECK((out[0] - slid[0]).norm() == 0.0);
    const double L = closed_perimeter(slid);
    // each output point must lie on the input polyline
    for (const auto& p : out) {
        double dmin = 1e9;
        for (std::size_t i = 0; i < slid.size(); ++i) {
            const Vec3& a = slid[i];
            const Vec3& b = slid[(i + 1) % slid.size()];
            const Vec3 ab = b - a;
            const double t = std::clamp((p - a).dot(ab) / ab.squared_norm(), 0.0, 1.0);
            dmin = std::min(dmin, (p - (a + ab * t)).norm());
        }
        CHECK(dmin <= 1e-12);
    }
    (void)L;
}

namespace {

// Arc-length coordinate of p on the closed polyline (p must lie on it).
double arc_position(const std::vector<Vec3>& pts, const Vec3& p) {
    double best_d = 1e9, best_s = 0.0, cum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3& a = pts[i];
        const Vec3& b = pts[(i + 1) % pts.size()];
        const Vec3 ab = b - a;
        const double len = ab.norm();
        const double t = std::clamp((p - a).dot(ab) / ab.squared_norm(), 0.0, 1.0);
        const double d = (p - (a + ab * t)).norm();
        if (d < best_d) {
            best_d = d;
            best_s = cum + t * len;
        }
        cum += len;
    }
    return best_s;
}

}  // namespace

TEST_CASE("closed resampling yields equal arc-length gaps") {
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = random_closed_polyline(rng, 3 + int(rng.uniform(0, 12)));
        const int n = 3 + int(rng.uniform(0, 20));
        const auto out = resample_closed_polyline(pts, n);
        REQUIRE(int(out.size()) == n);
        const double L = closed_perimeter(pts);
        for (int k = 0; k < n; ++k) {
            const double s = arc_position(pts, out[k]);
            CHECK(s == Catch::Approx(L * k / n).margin(1e-9));
        }
        // outputs lie on the polyline, so chord-shortening applies
        CHECK(closed_perimeter(out) <= L + 1e-9);
    }
}

TEST_CASE("closed resampling places points at exact fractional arc lengths") {
    // L-shaped hexagon with unit edges; perimeter 8, so n=8 gives gaps of 1
    const std::vector<Vec3> hexa = {{0, 0, 0}, {2, 0, 0}, {2, 1, 0},
                                    {1, 1, 0}, {1, 2, 0}, {0, 2, 0}};
    const auto out = resample_closed_polyline(hexa, 8);
    const std::vector<Vec3> expected = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0},
                                        {2, 1, 0}, {1, 1, 0}, {1, 2, 0},
                                        {0, 2, 0}, {0, 1, 0}};
    for (int i = 0; i < 8; ++i)
        CHECK((out[i] - expected[i]).norm() <= 1e-12);
}

TEST_CASE("open resampling keeps endpoints and uniformizes the interior") {
    const std::vector<Vec3> pts = {{0, 0, 0}, {0.9, 0, 0}, {1, 0, 0}};
    const auto out = resample_open_polyline(pts, 3);
    CHECK(out[0] == pts[0]);
    CHECK(out[2] == pts[2]);
    CHECK((out[1] - Vec3{0.5, 0, 0}).norm() <= 1e-12);
}

TEST_CASE("open resampling is idempotent on uniform input") {
    Rng rng(52);
    const Vec3 a = rng.vec(-1, 1), b = rng.vec(-1, 1);
    std::vector<Vec3> uniform;
    const int n = 9;
    for (int i = 0; i < n; ++i)
        uniform.push_back(a + (b - a) * (double(i) / (n - 1)));
    const auto out = resample_open_polyline(uniform, n);
    for (int i = 0; i < n; ++i)
        CHECK((out[i] - uniform[i]).norm() <= 1e-12);
}

TEST_CASE("resampled points are convex combinations of input segments") {
    Rng rng(53);
    const auto pts = random_closed_polyline(rng, 11);
    const auto out = resample_closed_polyline(pts, 29);
    for (const auto& p : out) {
        double dmin = 1e9;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Vec3& a = pts[i];
            const Vec3& b = pts[(i + 1) % pts.size()];
            const Vec3 ab = b - a;
            const double t = std::clamp((p - a).dot(ab) / ab.squared_norm(), 0.0, 1.0);
            dmin = std::min(dmin, (p - (a + ab * t)).norm());
        }
        CHECK(dmin <= 1e-9);
    }
}

TEST_CASE("zero-length polylines are rejected") {
    const std::vector<Vec3> degenerate(4, Vec3{1, 2, 3});
    CHECK_THROWS_AS(resample_closed_polyline(degenerate, 4), std::invalid_argument);
    CHECK_THROWS_AS(resample_open_polyline(degenerate, 4), std::invalid_argument);
}

TEST_CASE("bidirectional resample leaves an exact sphere grid in place") {
    const auto grid = init_sphere(24, 12, 1.0);
    const auto out = resample_bidirectional(grid, PassOrder::RowFirst);
    for (std::size_t v = 0; v < grid.positions.size(); ++v)
        CHECK((out.positions[v] - grid.positions[v]).norm() <= 1e-9);
}

TEST_CASE("row pass restores uniform spacing after a tangential perturbation") {
    auto grid = init_sphere(16, 8, 1.0);
    const auto reference = grid;
    const int j = 4;  // equator row
    // slide one anchor along the row polyline toward its neighbor
    grid.at(3, j) = grid.at(3, j) * 0.3 + grid.at(4, j) * 0.7;
    auto out = grid;
    detail::resample_rows(out);
    std::vector<Vec3> row(grid.n_theta);
    for (int i = 0; i < grid.n_theta; ++i) row[i] = out.at(i, j);
    std::vector<double> gaps;
    for (int i = 0; i < grid.n_theta; ++i)
        gaps.push_back((row[(i + 1) % grid.n_theta] - row[i]).norm());
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
    for (double g : gaps) CHECK(g == Catch::Approx(mean).epsilon(0.02));
}

TEST_CASE("pole rows stay point-identical through resampling") {
    auto grid = init_sphere(12, 6, 1.3, {0.2, 0, -0.1});
    Rng rng(54);
    for (int j = 1; j < grid.n_phi; ++j)
        for (int i = 0; i < grid.n_theta; ++i)
            grid.at(i, j) += rng.vec(-0.05, 0.05);
    const auto out = resample_bidirectional(grid, PassOrder::ColumnFirst);
    for (int i = 0; i < grid.n_theta; ++i) {
        CHECK(out.at(i, 0) == out.at(0, 0));
        CHECK(out.at(i, grid.n_phi) == out.at(0, grid.n_phi));
    }
}
