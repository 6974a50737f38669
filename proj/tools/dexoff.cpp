#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "dexoff/dexoff.hpp"

using namespace dexoff;

namespace {

enum Exit { Ok = 0, Mismatch = 1, Usage = 2, Data = 3 };

// Thrown for problems with the input files themselves.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

DexelGrid load_grid(const std::string& path) {
    try {
        return load_dxl(path);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
}

void save_grid(const DexelGrid& g, const std::string& path) {
    try {
        save_dxl(g, path);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
}

std::string format_column(const DexelColumn& c) {
    std::string s = "[";
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) s += ", ";
        char buf[80];
        std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", c[k].z_in, c[k].z_out);
        s += buf;
    }
    return s + "]";
}

const std::map<std::string, Engine> engine_names{{"sweep", Engine::Sweep}, {"brute", Engine::Brute}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Morphological offsets of dexel solids"};
    app.require_subcommand(1);

    // dexelize
    std::string mesh_path, out_path;
    int resolution = 128;
    double padding = 0.0;
    std::string axis = "z";
    auto* dex = app.add_subcommand("dexelize", "Convert an OBJ/STL mesh to a dexel grid");
    dex->add_option("mesh", mesh_path, "Input mesh (.obj or .stl)")->required();
    dex->add_option("-o,--output", out_path, "Output .dxl")->required();
    dex->add_option("--resolution", resolution, "Columns along the longest axis")->check(CLI::Range(2, 1 << 16));
    dex->add_option("--padding", padding, "World margin around the mesh")->check(CLI::NonNegativeNumber);
    dex->add_option("--axis", axis, "Ray axis")->check(CLI::IsMember({"x", "y", "z"}));

    // offsets
    std::string in_path, radius_unit = "world";
    double radius = 0.0;
    Engine engine = Engine::Sweep;
    int threads = 0;
    std::map<std::string, CLI::App*> offset_cmds;
    for (const char* name : {"dilate", "erode", "open", "close"}) {
        auto* c = app.add_subcommand(name, std::string(name) + " by a sphere");
        c->add_option("input", in_path, "Input .dxl")->required();
        c->add_option("-o,--output", out_path, "Output .dxl")->required();
        c->add_option("--radius", radius, "Sphere radius")->required()->check(CLI::NonNegativeNumber);
        c->add_option("--radius-unit", radius_unit, "world or dexel")->check(CLI::IsMember({"world", "dexel"}));
        c->add_option("--engine", engine, "sweep or brute")->transform(CLI::CheckedTransformer(engine_names));
        c->add_option("--threads", threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
        offset_cmds[name] = c;
    }

    double r_out = 0.0, r_in = 0.0;
    auto* shell = app.add_subcommand("shell", "Dilation minus erosion");
    shell->add_option("input", in_path, "Input .dxl")->required();
    shell->add_option("-o,--output", out_path, "Output .dxl")->required();
    shell->add_option("--r-out", r_out, "Outer radius")->required()->check(CLI::NonNegativeNumber);
    shell->add_option("--r-in", r_in, "Inner radius")->required()->check(CLI::NonNegativeNumber);
    shell->add_option("--radius-unit", radius_unit, "world or dexel")->check(CLI::IsMember({"world", "dexel"}));
    shell->add_option("--engine", engine, "sweep or brute")->transform(CLI::CheckedTransformer(engine_names));
    shell->add_option("--threads", threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

    std::string a_path, b_path, op_name;
    auto* boolean = app.add_subcommand("boolean", "Set operation on two grids");
    boolean->add_option("a", a_path, "First .dxl")->required();
    boolean->add_option("b", b_path, "Second .dxl")->required();
    boolean->add_option("--op", op_name, "union, intersection or difference")
        ->required()
        ->check(CLI::IsMember({"union", "intersection", "difference"}));
    boolean->add_option("-o,--output", out_path, "Output .dxl")->required();

    std::string mode = "points";
    auto* exp = app.add_subcommand("export", "Write an OBJ for inspection");
    exp->add_option("input", in_path, "Input .dxl")->required();
    exp->add_option("-o,--output", out_path, "Output .obj")->required();
    exp->add_option("--mode", mode, "points or boxes")->check(CLI::IsMember({"points", "boxes"}));

    double cmp_eps = -1.0;
    auto* cmp = app.add_subcommand("compare", "Exit 0 if two grids are interval-equal");
    cmp->add_option("a", a_path, "First .dxl")->required();
    cmp->add_option("b", b_path, "Second .dxl")->required();
    cmp->add_option("--eps", cmp_eps, "Endpoint tolerance (default: the grid merge tolerance)")
        ->check(CLI::NonNegativeNumber);

    std::string suite = "default";
    SuiteConfig bench_cfg;
    std::vector<std::string> engines_in;
    auto* bench = app.add_subcommand("bench", "Run the benchmark suite");
    bench->add_option("--suite", suite, "default or quick")->check(CLI::IsMember({"default", "quick"}));
    bench->add_option("-o,--output", out_path, "CSV output");
    bench->add_option("--models", bench_cfg.models, "Model names");
    bench->add_option("--sizes", bench_cfg.sizes, "Grid sizes");
    bench->add_option("--radii", bench_cfg.radii, "Radii relative to the grid size");
    bench->add_option("--threads", bench_cfg.threads, "Thread counts");
    bench->add_option("--engines", engines_in, "sweep and/or brute")->check(CLI::IsMember({"sweep", "brute"}));
    bench->add_option("--ops", bench_cfg.ops, "Operations")
        ->check(CLI::IsMember({"dilate", "erode", "open", "close"}));
    bench->add_option("--reps", bench_cfg.repetitions, "Repetitions per case")->check(CLI::Range(3, 1000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }

    try {
        if (*dex) {
            const TriangleMesh mesh = [&] {
                try {
                    return load_mesh(mesh_path);
                } catch (const std::exception& e) {
                    throw DataError(e.what());
                }
            }();
            GridConfig cfg;
            cfg.resolution = resolution;
            cfg.padding = padding;
            cfg.axis = axis == "x" ? Axis::X : axis == "y" ? Axis::Y : Axis::Z;
            const DexelGrid g = dexelize(mesh, cfg, 0);
            save_grid(g, out_path);
            std::cout << g.nx() << " x " << g.ny() << " columns, " << g.interval_count() << " intervals\n";
            return Ok;
        }
        for (const auto& [name, cmd] : offset_cmds) {
            if (!*cmd) continue;
            const DexelGrid g = load_grid(in_path);
            const double r = radius_unit == "dexel" ? radius * g.spacing() : radius;
            const DexelGrid out = run_op(name, g, r, {engine, threads});
            save_grid(out, out_path);
            std::cout << name << " r=" << r << ": " << g.interval_count() << " -> " << out.interval_count()
                      << " intervals\n";
            return Ok;
        }
        if (*shell) {
            const DexelGrid g = load_grid(in_path);
            const double k = radius_unit == "dexel" ? g.spacing() : 1.0;
            const DexelGrid out = shell_grid(g, r_out * k, r_in * k, {engine, threads});
            save_grid(out, out_path);
            std::cout << "shell: " << out.interval_count() << " intervals\n";
            return Ok;
        }
        if (*boolean) {
            const DexelGrid a = load_grid(a_path), b = load_grid(b_path);
            const BooleanOp op = op_name == "union"          ? BooleanOp::Union
                                 : op_name == "intersection" ? BooleanOp::Intersection
                                                             : BooleanOp::Difference;
            const DexelGrid out = [&] {
                try {
                    return grid_boolean(a, b, op);
                } catch (const IncompatibleGrids& e) {
                    throw DataError(e.what());
                }
            }();
            save_grid(out, out_path);
            return Ok;
        }
        if (*exp) {
            const DexelGrid g = load_grid(in_path);
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw DataError("cannot write " + out_path);
            f << export_obj(g, mode == "boxes" ? ExportMode::Boxes : ExportMode::Points);
            return Ok;
        }
        if (*cmp) {
            const DexelGrid a = load_grid(a_path), b = load_grid(b_path);
            if (a.geometry() != b.geometry()) throw DataError("grids differ in nx, ny, origin, spacing or z domain");
            const double eps = cmp_eps >= 0.0 ? cmp_eps : a.eps_merge();
            const auto diff = first_difference(a, b, eps);
            if (!diff) {
                std::cout << "equal\n";
                return Ok;
            }
            std::cout << "first difference at column (" << diff->i << ", " << diff->j << ")\n"
                      << "  a: " << format_column(a.at(diff->i, diff->j)) << "\n"
                      << "  b: " << format_column(b.at(diff->i, diff->j)) << "\n";
            return Mismatch;
        }
        if (*bench) {
            if (suite == "quick") {
                if (bench->count("--sizes") == 0) bench_cfg.sizes = {32, 48, 64};
            }
            if (!engines_in.empty()) {
                bench_cfg.engines.clear();
                for (const auto& e : engines_in) bench_cfg.engines.push_back(engine_names.at(e));
            }
            const SuiteResult res = run_suite(bench_cfg, [](const BenchRecord& r) {
                std::cerr << r.model << ' ' << r.op << ' ' << r.engine << ' ' << r.size << ' ' << r.seconds
                          << "s\n";
            });
            if (!out_path.empty()) {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) throw DataError("cannot write " + out_path);
                f << bench_csv(res.records);
            }
            std::cout << bench_summary(res.records);
            for (const auto& f : res.failures) std::cerr << "model " << f.model << " failed: " << f.message << '\n';
            return res.failures.empty() ? Ok : Data;
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Data;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Data;
    }
    return Usage;
}
