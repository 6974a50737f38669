#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dexoff/error.hpp"
#include "dexoff/interval.hpp"

namespace dexoff {

/// Placement of a dexel grid in world space. Rays run along z; column (i, j)
/// is centred at origin + (i + 0.5, j + 0.5) * spacing.
struct GridGeometry {
    std::uint32_t nx = 1;
    std::uint32_t ny = 1;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double spacing = 1.0;
    double z_min = 0.0;
    double z_max = 1.0;

    double column_x(std::size_t i) const { return origin_x + (double(i) + 0.5) * spacing; }
    double column_y(std::size_t j) const { return origin_y + (double(j) + 0.5) * spacing; }

    double diagonal() const {
        const double ex = nx * spacing, ey = ny * spacing, ez = z_max - z_min;
        return std::sqrt(ex * ex + ey * ey + ez * ez);
    }

    /// Merge tolerance used by every grid-level operation.
    double eps_merge() const { return 1e-9 * diagonal(); }

    void validate() const {
        if (nx < 1 || ny < 1) throw InvalidInput("grid: nx and ny must be at least 1");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw InvalidInput("grid: spacing must be positive and finite");
        if (!std::isfinite(origin_x) || !std::isfinite(origin_y) || !std::isfinite(z_min) ||
            !std::isfinite(z_max) || !(z_min < z_max))
            throw InvalidInput("grid: invalid origin or z domain");
    }

    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// The discrete solid: one DexelColumn per (i, j), stored j-major.
class DexelGrid {
  public:
    DexelGrid() = default;
    explicit DexelGrid(const GridGeometry& geo) : geo_(geo) {
        geo_.validate();
        columns_.resize(std::size_t(geo_.nx) * geo_.ny);
    }

    const GridGeometry& geometry() const { return geo_; }
    std::uint32_t nx() const { return geo_.nx; }
    std::uint32_t ny() const { return geo_.ny; }
    double spacing() const { return geo_.spacing; }
    double eps_merge() const { return geo_.eps_merge(); }

    std::size_t index(std::size_t i, std::size_t j) const { return j * geo_.nx + i; }
    DexelColumn& at(std::size_t i, std::size_t j) { return columns_[index(i, j)]; }
    const DexelColumn& at(std::size_t i, std::size_t j) const { return columns_[index(i, j)]; }

    std::vector<DexelColumn>& columns() { return columns_; }
    const std::vector<DexelColumn>& columns() const { return columns_; }

    std::size_t interval_count() const {
        std::size_t n = 0;
        for (const auto& c : columns_) n += c.size();
        return n;
    }

    bool empty() const {
        for (const auto& c : columns_)
            if (!c.empty()) return false;
        return true;
    }

    /// Total solid volume, sum of interval lengths times the column footprint.
    double volume() const {
        double v = 0.0;
        for (const auto& c : columns_) v += total_length(c);
        return v * geo_.spacing * geo_.spacing;
    }

    /// Checks the DexelGrid invariants; throws InvalidInput on violation.
    void validate() const {
        geo_.validate();
        if (columns_.size() != std::size_t(geo_.nx) * geo_.ny)
            throw InvalidInput("grid: column count does not match nx * ny");
        for (const auto& c : columns_) {
            if (!is_normalized(c)) throw InvalidInput("grid: column is not normalized");
            if (!c.empty() && (c.front().z_in < geo_.z_min || c.back().z_out > geo_.z_max))
                throw InvalidInput("grid: interval outside z domain");
        }
    }

  private:
    GridGeometry geo_;
    std::vector<DexelColumn> columns_;
};

inline void require_compatible(const GridGeometry& a, const GridGeometry& b) {
    if (!(a == b))
        throw IncompatibleGrids("grids differ in nx, ny, origin, spacing or z domain");
}

inline DexelGrid grid_boolean(const DexelGrid& a, const DexelGrid& b, BooleanOp op) {
    require_compatible(a.geometry(), b.geometry());
    DexelGrid out(a.geometry());
    const double eps = a.eps_merge();
    for (std::size_t k = 0; k < a.columns().size(); ++k)
        out.columns()[k] = column_boolean(a.columns()[k], b.columns()[k], op, eps);
    return out;
}

inline DexelGrid grid_complement(const DexelGrid& a) {
    const GridGeometry& g = a.geometry();
    DexelGrid out(g);
    const double eps = a.eps_merge();
    for (std::size_t k = 0; k < a.columns().size(); ++k)
        out.columns()[k] = complement_column(a.columns()[k], g.z_min, g.z_max, eps);
    return out;
}

/// Geometry grown by `cols` columns on every x/y side and `dz` on each z side.
inline GridGeometry padded_geometry(const GridGeometry& g, std::uint32_t cols, double dz) {
    GridGeometry p = g;
    p.nx = g.nx + 2 * cols;
    p.ny = g.ny + 2 * cols;
    p.origin_x = g.origin_x - cols * g.spacing;
    p.origin_y = g.origin_y - cols * g.spacing;
    p.z_min = g.z_min - dz;
    p.z_max = g.z_max + dz;
    return p;
}

/// Output geometry of a dilation by world radius r: enough columns for the
/// grown footprint and r of extra depth on both sides.
inline GridGeometry dilation_geometry(const GridGeometry& g, double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("radius must be finite and >= 0");
    const double cols = std::ceil(r / g.spacing);
    if (cols > 1e7) throw InvalidInput("radius too large for the grid spacing");
    return padded_geometry(g, std::uint32_t(cols), r);
}

/// Integer column offset of `inner` inside `outer`, if both share spacing and
/// their origins differ by a whole number of columns.
inline std::optional<std::pair<std::int64_t, std::int64_t>> column_offset(const GridGeometry& outer,
                                                                          const GridGeometry& inner) {
    if (outer.spacing != inner.spacing) return std::nullopt;
    const double fx = (inner.origin_x - outer.origin_x) / outer.spacing;
    const double fy = (inner.origin_y - outer.origin_y) / outer.spacing;
    const double rx = std::round(fx), ry = std::round(fy);
    if (std::abs(fx - rx) > 1e-6 || std::abs(fy - ry) > 1e-6) return std::nullopt;
    return std::pair{std::int64_t(rx), std::int64_t(ry)};
}

/// Copies `src` into a grid with geometry `target`. Columns outside the
/// source footprint are empty; columns of src outside target are dropped, and
/// intervals are clipped to the target z domain.
inline DexelGrid resample_to(const DexelGrid& src, const GridGeometry& target) {
    const auto off = column_offset(target, src.geometry());
    if (!off) throw IncompatibleGrids("resample_to: grids are not aligned on a common lattice");
    DexelGrid out(target);
    const double eps = out.eps_merge();
    const bool clip = src.geometry().z_min < target.z_min || src.geometry().z_max > target.z_max;
    for (std::uint32_t j = 0; j < src.ny(); ++j) {
        const std::int64_t tj = std::int64_t(j) + off->second;
        if (tj < 0 || tj >= std::int64_t(target.ny)) continue;
        for (std::uint32_t i = 0; i < src.nx(); ++i) {
            const std::int64_t ti = std::int64_t(i) + off->first;
            if (ti < 0 || ti >= std::int64_t(target.nx)) continue;
            const DexelColumn& c = src.at(i, j);
            out.at(std::size_t(ti), std::size_t(tj)) =
                clip ? clip_column(c, target.z_min, target.z_max, eps) : c;
        }
    }
    return out;
}

/// Mirror across the grid's x (flip_x) or y axis, keeping geometry.
inline DexelGrid mirror_grid(const DexelGrid& g, bool flip_x, bool flip_y) {
    DexelGrid out(g.geometry());
    for (std::uint32_t j = 0; j < g.ny(); ++j)
        for (std::uint32_t i = 0; i < g.nx(); ++i) {
            const std::size_t si = flip_x ? g.nx() - 1 - i : i;
            const std::size_t sj = flip_y ? g.ny() - 1 - j : j;
            out.at(i, j) = g.at(si, sj);
        }
    return out;
}

/// Location of the first column where two same-geometry grids differ.
struct GridDifference {
    std::size_t i = 0;
    std::size_t j = 0;
};

inline std::optional<GridDifference> first_difference(const DexelGrid& a, const DexelGrid& b,
                                                      double eps) {
    require_compatible(a.geometry(), b.geometry());
    for (std::uint32_t j = 0; j < a.ny(); ++j)
        for (std::uint32_t i = 0; i < a.nx(); ++i)
            if (!columns_equal(a.at(i, j), b.at(i, j), eps)) return GridDifference{i, j};
    return std::nullopt;
}

inline bool grids_equal(const DexelGrid& a, const DexelGrid& b, double eps) {
    return !first_difference(a, b, eps).has_value();
}

/// Pointwise containment a ⊆ b, tolerant to endpoint shifts of eps.
inline bool grid_subset(const DexelGrid& a, const DexelGrid& b, double eps) {
    require_compatible(a.geometry(), b.geometry());
    for (std::size_t k = 0; k < a.columns().size(); ++k) {
        const DexelColumn diff = column_boolean(a.columns()[k], b.columns()[k], BooleanOp::Difference);
        for (const Interval& iv : diff)
            if (iv.length() > 2 * eps) return false;
    }
    return true;
}

}  // namespace dexoff
