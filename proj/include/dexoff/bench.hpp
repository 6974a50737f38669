#pragma once

// Benchmark harness: procedural test models, a suite runner and the summary
// outputs. Radii are given relative to the grid size, i.e. a relative radius
// of 0.05 at resolution 256 is 12.8 dexels.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dexoff/dexelize.hpp"
#include "dexoff/morphology.hpp"
#include "dexoff/offset3d.hpp"

namespace dexoff {

struct BenchRecord {
    std::string model;
    std::string op;
    std::string engine;
    int size = 0;
    double rel_radius = 0.0;
    int threads = 1;
    double seconds = 0.0;
    std::size_t n = 0;  // input intervals
    std::size_t m = 0;  // output intervals
};

struct BenchFailure {
    std::string model;
    std::string message;
};

struct SuiteResult {
    std::vector<BenchRecord> records;
    std::vector<BenchFailure> failures;
};

/// Least-squares slope of log(time) against log(size).
inline double fit_loglog_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw InvalidInput("fit_loglog_slope: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [size, time] : points) {
        if (!(size > 0.0) || !(time > 0.0)) throw InvalidInput("fit_loglog_slope: values must be positive");
        const double x = std::log(size), y = std::log(time);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = double(points.size());
    const double den = n * sxx - sx * sx;
    if (!(std::abs(den) > 1e-12 * n * sxx)) throw InvalidInput("fit_loglog_slope: sizes must not all be equal");
    return (n * sxy - sx * sy) / den;
}

// ---- procedural models ----------------------------------------------------

/// Closed tube of radius `tube` around the (2,3) torus knot.
inline TriangleMesh make_torus_knot(double tube, int segments, int sides) {
    TriangleMesh m;
    auto curve = [](double t) {
        const double r = 2.0 + std::cos(3 * t);
        return Vec3{r * std::cos(2 * t), r * std::sin(2 * t), std::sin(3 * t)};
    };
    for (int s = 0; s < segments; ++s) {
        const double t = 2 * std::numbers::pi * s / segments, dt = 1e-4;
        const Vec3 c = curve(t);
        Vec3 tan = detail::sub(curve(t + dt), curve(t - dt));
        const double tl = std::sqrt(detail::norm2(tan));
        for (double& v : tan) v /= tl;
        // The knot's tangent is never vertical, so z gives a stable frame.
        Vec3 n = detail::cross(tan, {0, 0, 1});
        const double nl = std::sqrt(detail::norm2(n));
        for (double& v : n) v /= nl;
        const Vec3 b = detail::cross(tan, n);
        for (int k = 0; k < sides; ++k) {
            const double a = 2 * std::numbers::pi * k / sides;
            const double ca = std::cos(a) * tube, sa = std::sin(a) * tube;
            m.vertices.push_back({c[0] + ca * n[0] + sa * b[0], c[1] + ca * n[1] + sa * b[1],
                                  c[2] + ca * n[2] + sa * b[2]});
        }
    }
    auto idx = [&](int s, int k) { return std::uint32_t((s % segments) * sides + (k % sides)); };
    for (int s = 0; s < segments; ++s)
        for (int k = 0; k < sides; ++k) {
            m.faces.push_back({idx(s, k), idx(s + 1, k), idx(s + 1, k + 1)});
            m.faces.push_back({idx(s, k), idx(s + 1, k + 1), idx(s, k + 1)});
        }
    return m;
}

namespace detail {

inline GridGeometry unit_geometry(int size, double z_min, double z_max) {
    GridGeometry g;
    g.nx = g.ny = std::uint32_t(size);
    g.spacing = 1.0 / size;
    g.z_min = z_min;
    g.z_max = z_max;
    return g;
}

}  // namespace detail

/// Unit square plate, 0.25 thick, with horizontal bores along x and a row of
/// vertical holes.
inline DexelGrid make_perforated_plate(int size) {
    const double thick = 0.25, bore = 0.07, hole = 0.06;
    DexelGrid g(detail::unit_geometry(size, 0.0, thick));
    const GridGeometry& geo = g.geometry();
    for (std::uint32_t j = 0; j < g.ny(); ++j)
        for (std::uint32_t i = 0; i < g.nx(); ++i) {
            const double x = geo.column_x(i), y = geo.column_y(j);
            bool drilled = false;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double cx = 0.2 + 0.2 * a, cy = 0.3 + 0.4 * b;
                    if (std::hypot(x - cx, y - cy) < hole) drilled = true;
                }
            if (drilled) continue;
            DexelColumn col{{0.0, thick}};
            for (int k = 0; k < 5; ++k) {
                const double dy = y - (0.1 + 0.2 * k);
                if (std::abs(dy) >= bore) continue;
                const double h = std::sqrt(bore * bore - dy * dy);
                col = column_boolean(col, DexelColumn{{0.5 * thick - h, 0.5 * thick + h}}, BooleanOp::Difference);
            }
            g.at(i, j) = col;
        }
    return g;
}

/// Union of 16 axis-aligned boxes with a fixed seed.
inline DexelGrid make_box_union(int size) {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> pos(0.0, 0.75), ext(0.1, 0.35);
    struct Box {
        double lo[3], hi[3];
    };
    std::vector<Box> boxes;
    for (int k = 0; k < 16; ++k) {
        Box b{};
        for (int a = 0; a < 3; ++a) {
            b.lo[a] = pos(rng);
            b.hi[a] = std::min(1.0, b.lo[a] + ext(rng));
        }
        boxes.push_back(b);
    }
    DexelGrid g(detail::unit_geometry(size, 0.0, 1.0));
    const GridGeometry& geo = g.geometry();
    for (std::uint32_t j = 0; j < g.ny(); ++j)
        for (std::uint32_t i = 0; i < g.nx(); ++i) {
            const double x = geo.column_x(i), y = geo.column_y(j);
            DexelColumn col;
            for (const Box& b : boxes)
                if (x >= b.lo[0] && x <= b.hi[0] && y >= b.lo[1] && y <= b.hi[1]) col.push_back({b.lo[2], b.hi[2]});
            normalize_in_place(col, g.eps_merge());
            g.at(i, j) = col;
        }
    return g;
}

inline std::vector<std::string> default_models() { return {"sphere", "knot", "plate", "boxes"}; }

/// Builds a named procedural model at grid resolution `size`.
inline DexelGrid make_model(const std::string& name, int size, int threads = 0) {
    GridConfig cfg;
    cfg.resolution = size;
    if (name == "sphere") return dexelize(make_icosphere({0, 0, 0}, 1.0, 5), cfg, threads);
    if (name == "knot") return dexelize(make_torus_knot(0.4, 360, 24), cfg, threads);
    if (name == "plate") return make_perforated_plate(size);
    if (name == "boxes") return make_box_union(size);
    throw InvalidInput("unknown model: " + name);
}

// ---- suite ------------------------------------------------------------------

struct SuiteConfig {
    std::vector<std::string> models = default_models();
    std::vector<int> sizes = {64, 128, 256};
    std::vector<double> radii = {0.05};
    std::vector<int> threads = {0};
    std::vector<Engine> engines = {Engine::Sweep};
    std::vector<std::string> ops = {"dilate", "erode"};
    int repetitions = 3;
};

inline DexelGrid run_op(const std::string& op, const DexelGrid& g, double r, const OffsetOptions& opt) {
    if (op == "dilate") return dilate_grid(g, r, opt);
    if (op == "erode") return erode_grid(g, r, opt);
    if (op == "open") return open_grid(g, r, opt);
    if (op == "close") return close_grid(g, r, opt);
    throw InvalidInput("unknown operation: " + op);
}

/// Runs every configuration; records hold the median wall time of the
/// repetitions. A model that fails is reported and skipped.
inline SuiteResult run_suite(const SuiteConfig& cfg,
                             const std::function<void(const BenchRecord&)>& progress = {}) {
    if (cfg.repetitions < 3) throw InvalidInput("run_suite: at least 3 repetitions required");
    SuiteResult result;
    for (const std::string& model : cfg.models) {
        try {
            for (int size : cfg.sizes) {
                const DexelGrid g = make_model(model, size);
                for (double rel : cfg.radii) {
                    const double r = rel * size * g.spacing();
                    for (const std::string& op : cfg.ops)
                        for (Engine engine : cfg.engines)
                            for (int threads : cfg.threads) {
                                const int t = threads > 0 ? threads : default_thread_count();
                                std::vector<double> times;
                                std::size_t m = 0;
                                for (int rep = 0; rep < cfg.repetitions; ++rep) {
                                    const auto t0 = std::chrono::steady_clock::now();
                                    const DexelGrid out = run_op(op, g, r, {engine, t});
                                    const auto t1 = std::chrono::steady_clock::now();
                                    times.push_back(std::chrono::duration<double>(t1 - t0).count());
                                    m = out.interval_count();
                                }
                                std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
                                BenchRecord rec{model, op, to_string(engine), size, rel, t,
                                                std::max(times[times.size() / 2], 1e-9), g.interval_count(), m};
                                if (progress) progress(rec);
                                result.records.push_back(rec);
                            }
                }
            }
        } catch (const std::exception& e) {
            result.failures.push_back({model, e.what()});
        }
    }
    return result;
}

inline std::string bench_csv(std::span<const BenchRecord> records) {
    std::ostringstream out;
    out << "model,op,engine,size,rel_radius,threads,seconds,n,m\n";
    out << std::setprecision(6);
    for (const BenchRecord& r : records)
        out << r.model << ',' << r.op << ',' << r.engine << ',' << r.size << ',' << r.rel_radius << ','
            << r.threads << ',' << r.seconds << ',' << r.n << ',' << r.m << '\n';
    return out.str();
}

/// Fixed-width table of the records plus the size slope of every series
/// with at least three sizes.
inline std::string bench_summary(std::span<const BenchRecord> records) {
    std::ostringstream out;
    out << std::left << std::setw(8) << "model" << std::setw(8) << "op" << std::setw(7) << "engine" << std::right
        << std::setw(6) << "size" << std::setw(8) << "radius" << std::setw(5) << "thr" << std::setw(11)
        << "seconds" << std::setw(10) << "n" << std::setw(10) << "m" << '\n';
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (const BenchRecord& r : records) {
        out << std::left << std::setw(8) << r.model << std::setw(8) << r.op << std::setw(7) << r.engine
            << std::right << std::setw(6) << r.size << std::setw(8) << r.rel_radius << std::setw(5) << r.threads
            << std::setw(11) << std::fixed << std::setprecision(4) << r.seconds << std::defaultfloat
            << std::setw(10) << r.n << std::setw(10) << r.m << '\n';
        std::ostringstream key;
        key << r.model << ' ' << r.op << ' ' << r.engine << " r=" << r.rel_radius << " t=" << r.threads;
        series[key.str()].push_back({double(r.size), r.seconds});
    }
    for (const auto& [key, pts] : series)
        if (pts.size() >= 3) out << "slope " << key << ": " << std::setprecision(3) << fit_loglog_slope(pts) << '\n';
    return out.str();
}

}  // namespace dexoff
