#pragma once

#include <stdexcept>
#include <vector>

#include "shrinkwrap/anchor_grid.hpp"
#include "shrinkwrap/vec.hpp"

namespace shrinkwrap {

enum class PassOrder { RowFirst, ColumnFirst };

namespace detail {

/// Point at arc length s along the piecewise-linear path given by `pts`
/// plus precomputed cumulative lengths (cum[0]=0, cum[k]=length up to pts[k],
/// last entry = total length; for closed paths the final segment returns to
/// pts[0]).
template <typename V>
V point_at_arclength(const std::vector<V>& pts, const std::vector<double>& cum,
                     double s, bool closed) {
    const std::size_t nseg = cum.size() - 1;
    // binary search for the segment containing s
    std::size_t lo = 0, hi = nseg;
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cum[mid] <= s) lo = mid;
        else hi = mid;
    }
    const V& a = pts[lo];
    const V& b = closed && lo + 1 == pts.size() ? pts[0] : pts[lo + 1];
    const double seg_len = cum[lo + 1] - cum[lo];
    if (seg_len <= 0.0) return a;
    const double t = (s - cum[lo]) / seg_len;
    return a + (b - a) * t;
}

template <typename V>
std::vector<double> cumulative_lengths(const std::vector<V>& pts, bool closed) {
    const std::size_t nseg = closed ? pts.size() : pts.size() - 1;
    std::vector<double> cum(nseg + 1, 0.0);
    for (std::size_t k = 0; k < nseg; ++k) {
        const V& a = pts[k];
        const V& b = pts[(k + 1) % pts.size()];
        cum[k + 1] = cum[k] + (b - a).norm();
    }
    return cum;
}

}  // namespace detail

/// Redistributes n points uniformly by arc length along the closed polyline
/// through `points`. Output point 0 keeps the arc-length phase of input
/// point 0, so the seam does not drift between iterations.
template <typename V>
std::vector<V> resample_closed_polyline(const std::vector<V>& points, int n) {
    if (n < 3) throw std::invalid_argument("closed resample needs n >= 3");
    if (points.size() < 2)
        throw std::invalid_argument("closed resample needs >= 2 input points");
    const auto cum = detail::cumulative_lengths(points, /*closed=*/true);
    const double total = cum.back();
    if (!(total > 0.0)) throw std::invalid_argument("zero-length polyline");
    std::vector<V> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k)
        out.push_back(detail::point_at_arclength(points, cum, total * k / n,
                                                 /*closed=*/true));
    return out;
}

/// Uniform arc-length redistribution with both endpoints pinned bit-exactly.
template <typename V>
std::vector<V> resample_open_polyline(const std::vector<V>& points, int n) {
    if (n < 2) throw std::invalid_argument("open resample needs n >= 2");
    if (points.size() < 2)
        throw std::invalid_argument("open resample needs >= 2 input points");
    const auto cum = detail::cumulative_lengths(points, /*closed=*/false);
    const double total = cum.back();
    if (!(total > 0.0)) throw std::invalid_argument("zero-length polyline");
    std::vector<V> out;
    out.reserve(n);
    out.push_back(points.front());
    for (int k = 1; k < n - 1; ++k)
        out.push_back(detail::point_at_arclength(points, cum, total * k / (n - 1),
                                                 /*closed=*/false));
    out.push_back(points.back());
    return out;
}

namespace detail {

inline void resample_rows(AnchorGrid& g) {
    std::vector<Vec3> row(g.n_theta);
    for (int j = 1; j < g.n_phi; ++j) {
        for (int i = 0; i < g.n_theta; ++i) row[i] = g.at(i, j);
        const auto out = resample_closed_polyline(row, g.n_theta);
        for (int i = 0; i < g.n_theta; ++i) g.at(i, j) = out[i];
    }
}

inline void resample_columns(AnchorGrid& g) {
    std::vector<Vec3> col(g.n_phi + 1);
    for (int i = 0; i < g.n_theta; ++i) {
        for (int j = 0; j <= g.n_phi; ++j) col[j] = g.at(i, j);
        const auto out = resample_open_polyline(col, g.n_phi + 1);
        for (int j = 1; j < g.n_phi; ++j) g.at(i, j) = out[j];
    }
}

}  // namespace detail

/// One row pass (closed polylines along theta) and one column pass (open
/// pole-to-pole polylines), applied in the given order. Pole rows are
/// endpoints of every column and never move.
inline AnchorGrid resample_bidirectional(AnchorGrid grid, PassOrder order) {
    if (order == PassOrder::RowFirst) {
        detail::resample_rows(grid);
        detail::resample_columns(grid);
    } else {
        detail::resample_columns(grid);
        detail::resample_rows(grid);
    }
    return grid;
}

}  // namespace shrinkwrap
