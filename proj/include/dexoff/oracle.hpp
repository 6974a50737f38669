#pragma once

// Brute-force reference dilations. Every seed emits its full cross-section on
// every row or column within reach, then the columns are normalized. No
// pruning, so these are slow and obviously right; the sweeps are tested
// against them.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "dexoff/grid.hpp"
#include "dexoff/parallel.hpp"
#include "dexoff/sweep_voronoi.hpp"

namespace dexoff {

/// 2D dilation of a slice by `radius` dexels. Output has the same row count;
/// the caller pads the slice if the grown rows matter.
inline std::vector<DexelColumn> brute_dilate_2d(std::span<const DexelColumn> rows, double radius, double spacing,
                                                double eps = 0.0, std::size_t* emitted = nullptr) {
    if (!(radius >= 0.0)) throw InvalidInput("brute_dilate_2d: radius must be >= 0");
    const double r2 = radius * radius;
    const std::int64_t k = isqrt_floor(r2);
    const auto n = std::int64_t(rows.size());
    std::vector<DexelColumn> out(rows.size());
    std::size_t count = 0;
    for (std::int64_t y = 0; y < n; ++y) {
        for (std::int64_t s = std::max<std::int64_t>(0, y - k); s <= std::min(n - 1, y + k); ++s) {
            const double d = double(y - s);
            const double h = spacing * std::sqrt(r2 - d * d);
            for (const Interval& iv : rows[std::size_t(s)]) out[std::size_t(y)].push_back({iv.z_in - h, iv.z_out + h});
        }
        count += out[std::size_t(y)].size();
        normalize_in_place(out[std::size_t(y)], eps);
    }
    if (emitted) *emitted = count;
    return out;
}

/// 2D dilation where every segment grows by its own radius sqrt(reach2).
inline std::vector<DexelColumn> brute_power_dilate_2d(std::span<const WeightedColumn> rows, double spacing,
                                                      double eps = 0.0, std::size_t* emitted = nullptr) {
    const auto n = std::int64_t(rows.size());
    std::vector<DexelColumn> out(rows.size());
    std::size_t count = 0;
    for (std::int64_t s = 0; s < n; ++s) {
        for (const WeightedSegment& seg : rows[std::size_t(s)]) {
            const std::int64_t k = isqrt_floor(seg.reach2);
            for (std::int64_t y = std::max<std::int64_t>(0, s - k); y <= std::min(n - 1, s + k); ++y) {
                const double d = double(y - s);
                const double h = spacing * std::sqrt(seg.reach2 - d * d);
                out[std::size_t(y)].push_back({seg.z_in - h, seg.z_out + h});
                ++count;
            }
        }
    }
    for (DexelColumn& c : out) normalize_in_place(c, eps);
    if (emitted) *emitted = count;
    return out;
}

/// 3D dilation by world radius r, evaluated on the columns of `out_geo`,
/// which must lie on the same lattice as the input.
inline DexelGrid brute_dilate_3d(const DexelGrid& in, double r, const GridGeometry& out_geo, int threads = 0) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("brute_dilate_3d: radius must be finite and >= 0");
    const auto off = column_offset(in.geometry(), out_geo);
    if (!off) throw IncompatibleGrids("brute_dilate_3d: output grid is not on the input lattice");
    const double s = in.spacing();
    const double rd = r / s;
    const double r2 = rd * rd;
    const std::int64_t k = isqrt_floor(r2);
    const auto nx = std::int64_t(in.nx()), ny = std::int64_t(in.ny());
    DexelGrid out(out_geo);
    const double eps = out.eps_merge();
    parallel_for_index(out_geo.ny, threads, [&](std::size_t jo) {
        const std::int64_t cy = std::int64_t(jo) + off->second;
        for (std::size_t io = 0; io < out_geo.nx; ++io) {
            const std::int64_t cx = std::int64_t(io) + off->first;
            DexelColumn& col = out.at(io, jo);
            for (std::int64_t dy = -k; dy <= k; ++dy) {
                const std::int64_t y = cy + dy;
                if (y < 0 || y >= ny) continue;
                for (std::int64_t dx = -k; dx <= k; ++dx) {
                    const std::int64_t x = cx + dx;
                    if (x < 0 || x >= nx) continue;
                    const double h2 = r2 - double(dx * dx + dy * dy);
                    if (h2 < 0.0) continue;
                    const double h = s * std::sqrt(h2);
                    for (const Interval& iv : in.at(std::size_t(x), std::size_t(y)))
                        col.push_back({iv.z_in - h, iv.z_out + h});
                }
            }
            normalize_in_place(col, eps);
            col = clip_column(col, out_geo.z_min, out_geo.z_max, eps);
        }
    });
    return out;
}

inline DexelGrid brute_dilate_3d(const DexelGrid& in, double r, int threads = 0) {
    return brute_dilate_3d(in, r, dilation_geometry(in.geometry(), r), threads);
}

}  // namespace dexoff
