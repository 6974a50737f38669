#pragma once

// Closed-form Voronoi and power vertices of three seeds in a sweep plane.
// Coordinates are (row, z): `row` runs along the sweep direction, `z` along
// the dexel rays. The sweeps call these in dexel-normalised units.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace dexoff {

struct Point2 {
    double row = 0.0;
    double z = 0.0;
};

/// A depth segment lying on one row of a slice.
struct SeedSegment {
    double row = 0.0;
    double z_in = 0.0;
    double z_out = 0.0;
};

/// A disk seed; its power weight is radius².
struct WeightedPoint {
    double row = 0.0;
    double z = 0.0;
    double radius = 0.0;
};

inline double distance(const Point2& a, const Point2& b) { return std::hypot(a.row - b.row, a.z - b.z); }

/// Euclidean distance to a segment, i.e. to its z-clamped projection.
inline double distance(const Point2& p, const SeedSegment& s) {
    return std::hypot(p.row - s.row, p.z - std::clamp(p.z, s.z_in, s.z_out));
}

inline double power_distance(const Point2& p, const WeightedPoint& s) {
    const double dr = p.row - s.row, dz = p.z - s.z;
    return dr * dr + dz * dz - s.radius * s.radius;
}

namespace detail {

inline double spread(std::initializer_list<double> values) {
    const auto [lo, hi] = std::minmax(values);
    return hi - lo;
}

/// Solves [a11 a12; a21 a22] x = b, refusing near-singular systems.
inline std::optional<Point2> solve2(double a11, double a12, double a21, double a22, double b1, double b2,
                                    double scale) {
    const double det = a11 * a22 - a12 * a21;
    if (!(std::abs(det) >= 1e-12 * scale * scale) || scale == 0.0) return std::nullopt;
    return Point2{(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
}

}  // namespace detail

/// Circumcentre of three points: intersection of the two bisector lines.
/// Empty when the points are (nearly) collinear.
inline std::optional<Point2> voronoi_vertex_points(const Point2& p1, const Point2& p2, const Point2& p3) {
    const double scale = std::max(detail::spread({p1.row, p2.row, p3.row}), detail::spread({p1.z, p2.z, p3.z}));
    const double n1 = p1.row * p1.row + p1.z * p1.z;
    const double n2 = p2.row * p2.row + p2.z * p2.z;
    const double n3 = p3.row * p3.row + p3.z * p3.z;
    return detail::solve2(2 * (p2.row - p1.row), 2 * (p2.z - p1.z), 2 * (p3.row - p2.row), 2 * (p3.z - p2.z),
                          n2 - n1, n3 - n2, scale);
}

/// All points equidistant from p1, p2 and the interior of s (nearest point of
/// s strictly between its endpoints, up to rounding). At most two exist: the
/// parabola bisecting s and p1 meets the p1/p2 bisector line at most twice.
/// Results are sorted by row.
inline std::vector<Point2> voronoi_vertices_segment_points(const Point2& p1, const SeedSegment& s, const Point2& p2) {
    std::vector<Point2> out;
    if (s.z_in == s.z_out) {
        if (auto v = voronoi_vertex_points(p1, {s.row, s.z_in}, p2)) out.push_back(*v);
        return out;
    }
    const double scale = std::max(detail::spread({p1.row, p2.row, s.row}),
                                  detail::spread({p1.z, p2.z, s.z_in, s.z_out}));
    if (scale == 0.0) return out;
    // (row - s.row)^2 = |p - p1|^2       <=>  u*row + w = (z - z1)^2
    // |p - p1|^2 = |p - p2|^2            <=>  a*row + b*z = c
    const double u = 2 * (p1.row - s.row);
    const double w = s.row * s.row - p1.row * p1.row;
    const double a = 2 * (p1.row - p2.row);
    const double b = 2 * (p1.z - p2.z);
    const double c = (p1.row * p1.row + p1.z * p1.z) - (p2.row * p2.row + p2.z * p2.z);
    const double tiny = 1e-12 * scale;

    std::vector<double> zs;
    if (std::abs(a) > tiny) {
        // a z^2 + (b u - 2 a z1) z + (a z1^2 - c u - a w) = 0
        const double qa = a, qb = b * u - 2 * a * p1.z, qc = a * p1.z * p1.z - c * u - a * w;
        double disc = qb * qb - 4 * qa * qc;
        // A double root (a point lying on the segment) can come out slightly
        // negative; qc itself suffers cancellation, so bound by its terms.
        const double qc_mag = std::abs(a * p1.z * p1.z) + std::abs(c * u) + std::abs(a * w);
        if (disc < 0.0 && disc > -1e-10 * (qb * qb + std::abs(4 * qa) * qc_mag)) disc = 0.0;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (qb + (qb >= 0 ? sq : -sq));
            if (q != 0.0) {
                zs.push_back(q / qa);
                zs.push_back(qc / q);
            } else {
                zs.push_back(-qb / (2 * qa));
            }
        }
    } else if (std::abs(b) > tiny) {
        zs.push_back(c / b);
    }
    const double ztol = 1e-12 * scale;
    for (double z : zs) {
        if (!std::isfinite(z) || z < s.z_in - ztol || z > s.z_out + ztol) continue;
        double row;
        if (std::abs(u) >= std::abs(a) && std::abs(u) > tiny)
            row = ((z - p1.z) * (z - p1.z) - w) / u;
        else if (std::abs(a) > tiny)
            row = (c - b * z) / a;
        else
            continue;
        if (std::isfinite(row)) out.push_back({row, z});
    }
    std::sort(out.begin(), out.end(), [](const Point2& l, const Point2& r) { return l.row < r.row; });
    if (out.size() == 2 && std::abs(out[0].row - out[1].row) <= 1e-9 * scale &&
        std::abs(out[0].z - out[1].z) <= 1e-9 * scale)
        out.pop_back();
    return out;
}

/// First (lowest-row) vertex between two points and the interior of a segment.
inline std::optional<Point2> voronoi_vertex_segment_points(const Point2& p1, const SeedSegment& s, const Point2& p2) {
    auto all = voronoi_vertices_segment_points(p1, s, p2);
    if (all.empty()) return std::nullopt;
    return all.front();
}

/// Point of equal power distance |p - c_i|^2 - r_i^2 to three disks.
inline std::optional<Point2> power_vertex(const WeightedPoint& p1, const WeightedPoint& p2, const WeightedPoint& p3) {
    const double scale = std::max(detail::spread({p1.row, p2.row, p3.row}), detail::spread({p1.z, p2.z, p3.z}));
    auto lifted = [](const WeightedPoint& p) { return p.row * p.row + p.z * p.z - p.radius * p.radius; };
    return detail::solve2(2 * (p2.row - p1.row), 2 * (p2.z - p1.z), 2 * (p3.row - p2.row), 2 * (p3.z - p2.z),
                          lifted(p2) - lifted(p1), lifted(p3) - lifted(p2), scale);
}

/// Closed range of rows [lo, hi] on which `middle` owns part of the row
/// against `left` and `right` (power cells are convex, so this is an
/// interval). lo > hi encodes "never".
struct RowRange {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool empty() const { return lo > hi; }
};

namespace detail {

/// Power site with an explicit weight (squared radius).
struct PowerSite {
    double row;
    double z;
    double weight;
};

inline RowRange power_cell_rows(const PowerSite& left, const PowerSite& middle, const PowerSite& right) {
    // pow_middle - pow_n <= 0  <=>  A x + B z + C <= 0
    auto constraint = [&](const PowerSite& n, double& A, double& B, double& C) {
        A = 2 * (n.row - middle.row);
        B = 2 * (n.z - middle.z);
        C = (middle.row * middle.row + middle.z * middle.z - middle.weight) -
            (n.row * n.row + n.z * n.z - n.weight);
    };
    double A1, B1, C1, A2, B2, C2;
    constraint(left, A1, B1, C1);
    constraint(right, A2, B2, C2);

    RowRange range;
    auto restrict = [&](double alpha, double beta) {  // keep rows with alpha*x + beta <= 0
        if (alpha > 0)
            range.hi = std::min(range.hi, -beta / alpha);
        else if (alpha < 0)
            range.lo = std::max(range.lo, -beta / alpha);
        else if (beta > 0)
            range = {1.0, 0.0};
    };
    if (B1 == 0.0) restrict(A1, C1);
    if (B2 == 0.0) restrict(A2, C2);
    if (B1 != 0.0 && B2 != 0.0 && (B1 < 0) != (B2 < 0)) {
        // Both bound z from opposite sides; the row is non-empty where the
        // upper bound stays above the lower one. Multiplying through by
        // B1*B2 < 0 gives a linear condition in x.
        restrict(A1 * B2 - A2 * B1, C1 * B2 - C2 * B1);
    }
    return range;
}

}  // namespace detail

inline RowRange power_cell_rows(const WeightedPoint& left, const WeightedPoint& middle, const WeightedPoint& right) {
    auto site = [](const WeightedPoint& p) { return detail::PowerSite{p.row, p.z, p.radius * p.radius}; };
    return detail::power_cell_rows(site(left), site(middle), site(right));
}

/// Whether the middle disk's half-space power cell stops meeting the sweep
/// line once the sweep passes `vertex` (closing vertex), as opposed to a vertex
/// where its cell opens up and keeps intersecting later rows.
inline bool power_vertex_is_removal(const WeightedPoint& left, const WeightedPoint& middle, const WeightedPoint& right,
                                    const Point2& vertex) {
    const RowRange rows = power_cell_rows(left, middle, right);
    if (rows.empty()) return true;
    const double scale = std::max({std::abs(vertex.row), std::abs(left.row), std::abs(right.row), 1.0});
    return rows.hi <= vertex.row + 1e-9 * scale;
}

}  // namespace dexoff
