#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dexoff/error.hpp"

namespace dexoff {

/// One dexel: the depth range [z_in, z_out] where a ray is inside the solid.
struct Interval {
    double z_in = 0.0;
    double z_out = 0.0;

    double length() const { return z_out - z_in; }
    bool contains(double z) const { return z_in <= z && z <= z_out; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise disjoint intervals along one ray. Every column produced by
/// this library is normalized; hand-built ones should go through
/// normalize_column().
using DexelColumn = std::vector<Interval>;

enum class BooleanOp { Union, Intersection, Difference };

inline const char* to_string(BooleanOp op) {
    switch (op) {
        case BooleanOp::Union: return "union";
        case BooleanOp::Intersection: return "intersection";
        case BooleanOp::Difference: return "difference";
    }
    return "?";
}

/// Sorts and merges in place. Gaps of at most eps close, and intervals no longer
/// than eps after merging are dropped.
inline void normalize_in_place(DexelColumn& col, double eps = 0.0) {
    for (const Interval& iv : col) {
        if (!std::isfinite(iv.z_in) || !std::isfinite(iv.z_out))
            throw InvalidInput("normalize_column: non-finite depth value");
        if (iv.z_out < iv.z_in) throw InvalidInput("normalize_column: interval with z_out < z_in");
    }
    if (col.empty()) return;
    if (!std::is_sorted(col.begin(), col.end(),
                        [](const Interval& a, const Interval& b) { return a.z_in < b.z_in; }))
        std::sort(col.begin(), col.end(),
                  [](const Interval& a, const Interval& b) { return a.z_in < b.z_in; });

    std::size_t out = 0;
    Interval cur = col.front();
    auto flush = [&](const Interval& iv) {
        if (iv.z_out - iv.z_in > eps) col[out++] = iv;
    };
    for (std::size_t k = 1; k < col.size(); ++k) {
        const Interval& next = col[k];
        if (next.z_in - cur.z_out <= eps) {
            cur.z_out = std::max(cur.z_out, next.z_out);
        } else {
            flush(cur);
            cur = next;
        }
    }
    flush(cur);
    col.resize(out);
}

inline DexelColumn normalize_column(DexelColumn raw, double eps = 0.0) {
    normalize_in_place(raw, eps);
    return raw;
}

inline bool is_normalized(std::span<const Interval> col, double eps = 0.0) {
    for (std::size_t k = 0; k < col.size(); ++k) {
        if (!(col[k].z_out - col[k].z_in > eps)) return false;
        if (k > 0 && !(col[k].z_in - col[k - 1].z_out > eps)) return false;
    }
    return true;
}

inline double total_length(std::span<const Interval> col) {
    double sum = 0.0;
    for (const Interval& iv : col) sum += iv.length();
    return sum;
}

/// Membership test, closed intervals.
inline bool column_contains(std::span<const Interval> col, double z) {
    auto it = std::upper_bound(col.begin(), col.end(), z,
                               [](double v, const Interval& iv) { return v < iv.z_in; });
    return it != col.begin() && std::prev(it)->contains(z);
}

namespace detail {

/// Walks the merged endpoint sequence of two normalized columns and keeps the
/// runs where keep(inside_a, inside_b) holds.
template <class Keep>
DexelColumn combine_columns(std::span<const Interval> a, std::span<const Interval> b, Keep keep,
                            double eps) {
    DexelColumn out;
    const std::size_t na = a.size() * 2, nb = b.size() * 2;
    auto endpoint = [](std::span<const Interval> c, std::size_t k) {
        return (k & 1u) ? c[k / 2].z_out : c[k / 2].z_in;
    };
    std::size_t ia = 0, ib = 0;
    bool in_a = false, in_b = false, inside = false;
    double start = 0.0;
    while (ia < na || ib < nb) {
        double v = std::numeric_limits<double>::infinity();
        if (ia < na) v = endpoint(a, ia);
        if (ib < nb) v = std::min(v, endpoint(b, ib));
        while (ia < na && endpoint(a, ia) == v) {
            in_a = !(ia & 1u);
            ++ia;
        }
        while (ib < nb && endpoint(b, ib) == v) {
            in_b = !(ib & 1u);
            ++ib;
        }
        const bool now = keep(in_a, in_b);
        if (now && !inside) start = v;
        if (!now && inside) out.push_back({start, v});
        inside = now;
    }
    normalize_in_place(out, eps);
    return out;
}

}  // namespace detail

inline DexelColumn column_boolean(std::span<const Interval> a, std::span<const Interval> b,
                                  BooleanOp op, double eps = 0.0) {
    switch (op) {
        case BooleanOp::Union:
            return detail::combine_columns(a, b, [](bool x, bool y) { return x || y; }, eps);
        case BooleanOp::Intersection:
            return detail::combine_columns(a, b, [](bool x, bool y) { return x && y; }, eps);
        case BooleanOp::Difference:
            return detail::combine_columns(a, b, [](bool x, bool y) { return x && !y; }, eps);
    }
    return {};
}

/// Domain minus the column. Throws if an interval leaves the domain.
inline DexelColumn complement_column(std::span<const Interval> a, double z_min, double z_max,
                                     double eps = 0.0) {
    DexelColumn out;
    double cursor = z_min;
    for (const Interval& iv : a) {
        if (iv.z_in < z_min || iv.z_out > z_max)
            throw InvalidInput("complement_column: interval outside z domain");
        if (iv.z_in > cursor) out.push_back({cursor, iv.z_in});
        cursor = iv.z_out;
    }
    if (cursor < z_max) out.push_back({cursor, z_max});
    normalize_in_place(out, eps);
    return out;
}

/// Restricts a column to [z_min, z_max].
inline DexelColumn clip_column(std::span<const Interval> a, double z_min, double z_max,
                               double eps = 0.0) {
    DexelColumn out;
    for (const Interval& iv : a) {
        Interval c{std::max(iv.z_in, z_min), std::min(iv.z_out, z_max)};
        if (c.z_out > c.z_in) out.push_back(c);
    }
    normalize_in_place(out, eps);
    return out;
}

/// True when both columns have the same interval count and every endpoint
/// agrees within eps.
inline bool columns_equal(std::span<const Interval> a, std::span<const Interval> b, double eps) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k].z_in - b[k].z_in) > eps) return false;
        if (std::abs(a[k].z_out - b[k].z_out) > eps) return false;
    }
    return true;
}

}  // namespace dexoff
