#pragma once

// Spherical dilation and erosion of dexel grids.
//
// The 3D dilation is split into two 2D sweeps. Stage one sweeps every x-slice
// along y and keeps, per intermediate column, the closest seed pieces with the
// reach their sphere still has there: rho² = r² - dy². Stage two sweeps every
// y-slice of that intermediate along x, dilating each piece by its own rho.
// Because rows are integer dexel offsets the reach subtraction is exact, so
// the half-widths match a brute-force s * sqrt(r² - dx² - dy²) bit for bit.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "dexoff/grid.hpp"
#include "dexoff/oracle.hpp"
#include "dexoff/parallel.hpp"
#include "dexoff/sweep_power.hpp"
#include "dexoff/sweep_voronoi.hpp"

namespace dexoff {

enum class Engine { Sweep, Brute };

inline const char* to_string(Engine e) { return e == Engine::Sweep ? "sweep" : "brute"; }

struct OffsetOptions {
    Engine engine = Engine::Sweep;
    /// Worker threads; 0 picks the hardware concurrency.
    int threads = 0;
};

/// Half-width left of a sphere of radius r at lateral distance d.
inline double radius_transfer(double d, double r) {
    if (!(d >= 0.0) || !(r >= 0.0)) throw InvalidInput("radius_transfer: negative argument");
    if (d > r) throw InvalidInput("radius_transfer: distance exceeds radius");
    return std::sqrt(r * r - d * d);
}

/// Dilation by world radius r evaluated on the columns of `out_geo`, which
/// must share the input lattice. Results are clipped to its z domain.
inline DexelGrid dilate_into(const DexelGrid& in, double r, const GridGeometry& out_geo,
                             const OffsetOptions& opt = {}) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("dilate: radius must be finite and >= 0");
    if (opt.engine == Engine::Brute) return brute_dilate_3d(in, r, out_geo, opt.threads);
    const auto off = column_offset(in.geometry(), out_geo);
    if (!off) throw IncompatibleGrids("dilate: output grid is not on the input lattice");
    const double s = in.spacing();
    const double rd = r / s;
    const auto reach = std::int64_t(std::ceil(rd));
    const auto nx = std::int64_t(in.nx()), ny = std::int64_t(in.ny());
    const auto ox = off->first, oy = off->second;
    const auto onx = std::int64_t(out_geo.nx), ony = std::int64_t(out_geo.ny);

    // Stage 1 covers the input x-slices that can reach the output window and
    // produces only the output rows.
    const std::int64_t x_lo = std::max<std::int64_t>(0, ox - reach);
    const std::int64_t x_hi = std::min<std::int64_t>(nx, ox + onx + reach);
    const std::int64_t mid_nx = std::max<std::int64_t>(0, x_hi - x_lo);
    std::vector<WeightedColumn> mid(std::size_t(mid_nx * ony));

    const std::int64_t y0 = std::min<std::int64_t>(0, oy);
    const std::int64_t y1 = std::max<std::int64_t>(ny, oy + ony);
    const RowWindow ywin{std::size_t(oy - y0), std::size_t(oy - y0 + ony)};
    parallel_for_index(std::size_t(mid_nx), opt.threads, [&](std::size_t k) {
        const std::int64_t x = x_lo + std::int64_t(k);
        RowSource src = [&](std::size_t t) {
            const std::int64_t y = std::int64_t(t) + y0;
            if (y < 0 || y >= ny) return std::span<const Interval>();
            return std::span<const Interval>(in.at(std::size_t(x), std::size_t(y)));
        };
        auto rows = extrude_slice(std::size_t(y1 - y0), src, rd, s, ywin);
        for (std::int64_t j = 0; j < ony; ++j) mid[std::size_t(j * mid_nx) + k] = std::move(rows[std::size_t(j)]);
    });

    DexelGrid out(out_geo);
    const double eps = out.eps_merge();
    const std::int64_t sx0 = std::min(x_lo, ox);
    const std::int64_t sx1 = std::max(x_hi, ox + onx);
    const RowWindow xwin{std::size_t(ox - sx0), std::size_t(ox - sx0 + onx)};
    parallel_for_index(std::size_t(ony), opt.threads, [&](std::size_t j) {
        WeightedRowSource src = [&](std::size_t t) {
            const std::int64_t x = std::int64_t(t) + sx0;
            if (x < x_lo || x >= x_hi) return std::span<const WeightedSegment>();
            return std::span<const WeightedSegment>(mid[j * std::size_t(mid_nx) + std::size_t(x - x_lo)]);
        };
        auto cols = power_dilate_2d(std::size_t(sx1 - sx0), src, s, xwin, 0.0);
        for (std::int64_t i = 0; i < onx; ++i) {
            DexelColumn& c = cols[std::size_t(i)];
            normalize_in_place(c, eps);
            out.at(std::size_t(i), j) = clip_column(c, out_geo.z_min, out_geo.z_max, eps);
        }
    });
    return out;
}

/// Dilation by world radius r onto the grown grid.
inline DexelGrid dilate_grid(const DexelGrid& in, double r, const OffsetOptions& opt = {}) {
    return dilate_into(in, r, dilation_geometry(in.geometry(), r), opt);
}

/// Erosion by world radius r: the complement of the dilated complement, on
/// the input grid.
///
/// Only complement points within r of the solid can reach it, so each
/// complement column is clipped to the depth range of the solid columns in
/// its lateral neighbourhood, widened by r. Columns with no solid nearby drop
/// out entirely. The solid minus the dilated clipped complement equals the
/// plain complement construction.
inline DexelGrid erode_grid(const DexelGrid& in, double r, const OffsetOptions& opt = {}) {
    const GridGeometry padded = dilation_geometry(in.geometry(), r);
    const std::int64_t pad = (std::int64_t(padded.nx) - std::int64_t(in.nx())) / 2;
    const std::size_t pnx = padded.nx, pny = padded.ny;
    const double inf = std::numeric_limits<double>::infinity();

    // Lateral window extremes of the solid's depth range, separably.
    std::vector<double> lo(pnx * pny, inf), hi(pnx * pny, -inf);
    for (std::uint32_t j = 0; j < in.ny(); ++j)
        for (std::uint32_t i = 0; i < in.nx(); ++i) {
            const DexelColumn& c = in.at(i, j);
            if (c.empty()) continue;
            const std::size_t k = (j + pad) * pnx + (i + pad);
            lo[k] = c.front().z_in;
            hi[k] = c.back().z_out;
        }
    auto window = [&](std::vector<double>& v, bool along_x, bool take_min) {
        std::vector<double> src = v;
        const std::size_t n_line = along_x ? pny : pnx, n_pos = along_x ? pnx : pny;
        for (std::size_t line = 0; line < n_line; ++line)
            for (std::size_t p = 0; p < n_pos; ++p) {
                const std::size_t b = p >= std::size_t(pad) ? p - pad : 0;
                const std::size_t e = std::min(n_pos - 1, p + pad);
                double best = take_min ? inf : -inf;
                for (std::size_t q = b; q <= e; ++q) {
                    const double x = along_x ? src[line * pnx + q] : src[q * pnx + line];
                    best = take_min ? std::min(best, x) : std::max(best, x);
                }
                (along_x ? v[line * pnx + p] : v[p * pnx + line]) = best;
            }
    };
    window(lo, true, true);
    window(lo, false, true);
    window(hi, true, false);
    window(hi, false, false);

    DexelGrid outside(padded);
    const double eps = outside.eps_merge();
    for (std::size_t j = 0; j < pny; ++j)
        for (std::size_t i = 0; i < pnx; ++i) {
            const std::size_t k = j * pnx + i;
            if (!(lo[k] <= hi[k])) continue;
            const std::int64_t si = std::int64_t(i) - pad, sj = std::int64_t(j) - pad;
            const bool inside = si >= 0 && sj >= 0 && si < std::int64_t(in.nx()) && sj < std::int64_t(in.ny());
            const DexelColumn empty;
            const DexelColumn& col = inside ? in.at(std::size_t(si), std::size_t(sj)) : empty;
            const DexelColumn comp = complement_column(col, padded.z_min, padded.z_max, eps);
            outside.at(i, j) = clip_column(comp, std::max(padded.z_min, lo[k] - r), std::min(padded.z_max, hi[k] + r), eps);
        }
    const DexelGrid grown = dilate_into(outside, r, in.geometry(), opt);
    return grid_boolean(in, grown, BooleanOp::Difference);
}

}  // namespace dexoff
