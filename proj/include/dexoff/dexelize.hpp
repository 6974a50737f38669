#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dexoff/grid.hpp"
#include "dexoff/mesh.hpp"
#include "dexoff/parallel.hpp"

namespace dexoff {

enum class Axis { X, Y, Z };

struct GridConfig {
    /// Column count along the longest bounding-box axis.
    int resolution = 128;
    /// World-space margin added around the mesh bounding box.
    double padding = 0.0;
    /// Ray direction; the mesh is rotated so this axis becomes z.
    Axis axis = Axis::Z;

    void validate() const {
        if (resolution < 2) throw InvalidInput("GridConfig: resolution must be at least 2");
        if (!(padding >= 0.0) || !std::isfinite(padding))
            throw InvalidInput("GridConfig: padding must be finite and non-negative");
    }
};

/// Cyclic permutation mapping `axis` onto z.
inline Vec3 rotate_to_ray_axis(const Vec3& p, Axis axis) {
    switch (axis) {
        case Axis::X: return {p[1], p[2], p[0]};
        case Axis::Y: return {p[2], p[0], p[1]};
        case Axis::Z: return p;
    }
    return p;
}

namespace detail {

struct ProjectedTriangle {
    double x[3], y[3], z[3];
    double area2;  // signed, in the xy projection
};

enum class RayHit { Miss, Hit, Degenerate };

/// Vertical ray through (px, py) against one triangle. Points on an edge or
/// vertex are reported as degenerate so the caller can perturb the ray.
inline RayHit intersect_vertical(const ProjectedTriangle& t, double px, double py, double tol,
                                 double& z) {
    double e[3];
    for (int k = 0; k < 3; ++k) {
        const int a = k, b = (k + 1) % 3;
        e[k] = (t.x[b] - t.x[a]) * (py - t.y[a]) - (t.y[b] - t.y[a]) * (px - t.x[a]);
    }
    const double s = t.area2 > 0 ? 1.0 : -1.0;
    bool on_edge = false;
    for (double& ek : e) {
        ek *= s;
        if (ek < -tol) return RayHit::Miss;
        if (ek <= tol) on_edge = true;
    }
    if (on_edge) return RayHit::Degenerate;
    if (t.z[0] == t.z[1] && t.z[1] == t.z[2]) {
        z = t.z[0];
        return RayHit::Hit;
    }
    // e[k] is the weight of the vertex opposite edge k.
    const double sum = e[0] + e[1] + e[2];
    z = (e[1] * t.z[0] + e[2] * t.z[1] + e[0] * t.z[2]) / sum;
    return RayHit::Hit;
}

}  // namespace detail

/// Casts one ray per column centre through the mesh and keeps the inside
/// intervals under even-odd parity.
inline DexelGrid dexelize(const TriangleMesh& mesh, const GridConfig& config, int threads = 0) {
    config.validate();
    if (mesh.faces.empty()) throw InvalidInput("dexelize: empty mesh");

    std::vector<detail::ProjectedTriangle> tris;
    tris.reserve(mesh.faces.size());
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const Vec3& p : mesh.vertices) {
        const Vec3 q = rotate_to_ray_axis(p, config.axis);
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], q[k]);
            hi[k] = std::max(hi[k], q[k]);
        }
    }
    for (const auto& f : mesh.faces) {
        detail::ProjectedTriangle t{};
        for (int v = 0; v < 3; ++v) {
            const Vec3 q = rotate_to_ray_axis(mesh.vertices[f[v]], config.axis);
            t.x[v] = q[0];
            t.y[v] = q[1];
            t.z[v] = q[2];
        }
        t.area2 = (t.x[1] - t.x[0]) * (t.y[2] - t.y[0]) - (t.y[1] - t.y[0]) * (t.x[2] - t.x[0]);
        if (t.area2 != 0.0) tris.push_back(t);  // faces parallel to the ray never cross it
    }

    for (int k = 0; k < 3; ++k) {
        lo[k] -= config.padding;
        hi[k] += config.padding;
    }
    const double longest = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
    if (!(longest > 0.0)) throw InvalidInput("dexelize: mesh has zero extent");

    GridGeometry geo;
    geo.spacing = longest / config.resolution;
    geo.nx = std::max<std::uint32_t>(1, std::uint32_t(std::ceil((hi[0] - lo[0]) / geo.spacing - 1e-9)));
    geo.ny = std::max<std::uint32_t>(1, std::uint32_t(std::ceil((hi[1] - lo[1]) / geo.spacing - 1e-9)));
    geo.origin_x = lo[0];
    geo.origin_y = lo[1];
    geo.z_min = lo[2];
    geo.z_max = hi[2];
    if (!(geo.z_min < geo.z_max)) throw InvalidInput("dexelize: mesh is flat along the ray axis");
    DexelGrid grid(geo);

    // Bin triangles by the columns their xy bounding box covers (with a little
    // slack for perturbed rays), CSR layout.
    const double slack = 1e-6;
    const std::size_t ncols = std::size_t(geo.nx) * geo.ny;
    auto column_range = [&](const detail::ProjectedTriangle& t, std::int64_t& i0, std::int64_t& i1,
                            std::int64_t& j0, std::int64_t& j1) {
        const double x0 = std::min({t.x[0], t.x[1], t.x[2]}), x1 = std::max({t.x[0], t.x[1], t.x[2]});
        const double y0 = std::min({t.y[0], t.y[1], t.y[2]}), y1 = std::max({t.y[0], t.y[1], t.y[2]});
        i0 = std::max<std::int64_t>(0, std::int64_t(std::ceil((x0 - geo.origin_x) / geo.spacing - 0.5 - slack)));
        i1 = std::min<std::int64_t>(geo.nx - 1, std::int64_t(std::floor((x1 - geo.origin_x) / geo.spacing - 0.5 + slack)));
        j0 = std::max<std::int64_t>(0, std::int64_t(std::ceil((y0 - geo.origin_y) / geo.spacing - 0.5 - slack)));
        j1 = std::min<std::int64_t>(geo.ny - 1, std::int64_t(std::floor((y1 - geo.origin_y) / geo.spacing - 0.5 + slack)));
    };
    std::vector<std::uint32_t> start(ncols + 1, 0);
    for (const auto& t : tris) {
        std::int64_t i0, i1, j0, j1;
        column_range(t, i0, i1, j0, j1);
        for (std::int64_t j = j0; j <= j1; ++j)
            for (std::int64_t i = i0; i <= i1; ++i) ++start[grid.index(std::size_t(i), std::size_t(j)) + 1];
    }
    for (std::size_t k = 0; k < ncols; ++k) start[k + 1] += start[k];
    std::vector<std::uint32_t> binned(start.back());
    {
        std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
        for (std::uint32_t t = 0; t < tris.size(); ++t) {
            std::int64_t i0, i1, j0, j1;
            column_range(tris[t], i0, i1, j0, j1);
            for (std::int64_t j = j0; j <= j1; ++j)
                for (std::int64_t i = i0; i <= i1; ++i)
                    binned[fill[grid.index(std::size_t(i), std::size_t(j))]++] = t;
        }
    }

    const double eps_perturb = geo.spacing * 1e-7;
    const double tol = 1e-12 * geo.spacing * geo.spacing;
    const double eps = grid.eps_merge();
    parallel_for_index(geo.ny, threads, [&](std::size_t j) {
        std::vector<double> hits;
        for (std::size_t i = 0; i < geo.nx; ++i) {
            const std::size_t col = grid.index(i, j);
            bool resolved = false;
            // Symbolic perturbation by (eps, eps^2); retried with growing
            // eps should a perturbed ray still graze an edge.
            for (int attempt = 0; attempt < 8 && !resolved; ++attempt) {
                const double d = attempt == 0 ? 0.0 : eps_perturb * attempt;
                const double px = geo.column_x(i) + d;
                const double py = geo.column_y(j) + d * d / geo.spacing;
                hits.clear();
                resolved = true;
                for (std::uint32_t k = start[col]; k < start[col + 1]; ++k) {
                    double z = 0.0;
                    const auto hit = detail::intersect_vertical(tris[binned[k]], px, py, tol, z);
                    if (hit == detail::RayHit::Degenerate) {
                        resolved = false;
                        break;
                    }
                    if (hit == detail::RayHit::Hit) hits.push_back(z);
                }
            }
            if (!resolved || hits.size() % 2 != 0) throw NonWatertight(i, j);
            std::sort(hits.begin(), hits.end());
            DexelColumn& out = grid.columns()[col];
            for (std::size_t k = 0; k < hits.size(); k += 2) out.push_back({hits[k], hits[k + 1]});
            normalize_in_place(out, eps);
            out = clip_column(out, geo.z_min, geo.z_max, eps);
        }
    });
    return grid;
}

}  // namespace dexoff
