#pragma once

// Shared generators and independent reference checks for the tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "dexoff/dexoff.hpp"

namespace testing_support {

using namespace dexoff;

/// Up to `max_intervals` sorted, well separated intervals inside (lo, hi).
inline DexelColumn random_column(std::mt19937_64& rng, int max_intervals, double lo, double hi) {
    std::uniform_int_distribution<int> count(0, max_intervals);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> cuts;
    for (int k = 0, n = 2 * count(rng); k < n; ++k) cuts.push_back(u(rng));
    std::sort(cuts.begin(), cuts.end());
    DexelColumn col;
    for (std::size_t k = 0; k + 1 < cuts.size(); k += 2)
        if (cuts[k + 1] - cuts[k] > 1e-6 * (hi - lo)) col.push_back({cuts[k], cuts[k + 1]});
    return normalize_column(col, 1e-6 * (hi - lo));
}

/// Random grid with up to max_n columns per side; about `fill` of the
/// columns are non-empty.
inline DexelGrid random_grid(std::mt19937_64& rng, int max_n, int max_intervals, double fill = 0.6) {
    std::uniform_int_distribution<int> size(1, max_n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GridGeometry g;
    g.nx = std::uint32_t(size(rng));
    g.ny = std::uint32_t(size(rng));
    g.spacing = 0.25 + u(rng);
    g.origin_x = 10 * u(rng) - 5;
    g.origin_y = 10 * u(rng) - 5;
    g.z_min = -2.0;
    g.z_max = g.z_min + 4 + 20 * u(rng);
    DexelGrid grid(g);
    for (DexelColumn& c : grid.columns())
        if (u(rng) < fill) c = random_column(rng, max_intervals, g.z_min, g.z_max);
    return grid;
}

/// Euclidean distance from (x, y, z) to the union of the grid's segments.
inline double distance_to_solid(const DexelGrid& g, double x, double y, double z) {
    double best = std::numeric_limits<double>::infinity();
    const GridGeometry& geo = g.geometry();
    for (std::uint32_t j = 0; j < g.ny(); ++j)
        for (std::uint32_t i = 0; i < g.nx(); ++i) {
            const double dx = x - geo.column_x(i), dy = y - geo.column_y(j);
            for (const Interval& iv : g.at(i, j)) {
                const double dz = z - std::clamp(z, iv.z_in, iv.z_out);
                best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
            }
        }
    return best;
}

/// Samples every ray of `out` at `samples` depths and checks membership
/// against the distance to `in`. Points within `band` of the offset surface
/// are skipped. Returns the number of disagreements.
inline int count_membership_errors(const DexelGrid& out, const DexelGrid& in, double r, int samples, double band) {
    int bad = 0;
    const GridGeometry& geo = out.geometry();
    for (std::uint32_t j = 0; j < out.ny(); ++j)
        for (std::uint32_t i = 0; i < out.nx(); ++i)
            for (int k = 0; k < samples; ++k) {
                const double z = geo.z_min + (k + 0.5) * (geo.z_max - geo.z_min) / samples;
                const double d = distance_to_solid(in, geo.column_x(i), geo.column_y(j), z);
                if (std::abs(d - r) < band) continue;
                if ((d < r) != column_contains(out.at(i, j), z)) ++bad;
            }
    return bad;
}

/// Grid holding a solid block of whole dexels: columns [i0, i1) x [j0, j1)
/// filled over [z0, z1].
inline DexelGrid block_grid(std::uint32_t n, std::uint32_t i0, std::uint32_t i1, std::uint32_t j0, std::uint32_t j1,
                            double z0, double z1, double z_max) {
    GridGeometry g;
    g.nx = g.ny = n;
    g.spacing = 1.0;
    g.z_min = 0.0;
    g.z_max = z_max;
    DexelGrid grid(g);
    for (std::uint32_t j = j0; j < j1; ++j)
        for (std::uint32_t i = i0; i < i1; ++i) grid.at(i, j) = {{z0, z1}};
    return grid;
}

}  // namespace testing_support
