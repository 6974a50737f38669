#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "support.hpp"

using namespace dexoff;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("dexoff_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Runs the CLI with stdout captured to a file; returns the exit status.
    int run(const std::string& args) {
        const std::string cmd = std::string(DEXOFF_CLI) + " " + args + " > " + path("stdout.txt") + " 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string output() const {
        std::ifstream in(path("stdout.txt"));
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    std::string bytes(const std::string& name) const { return detail::read_file(path(name)); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, DexelizeDilateZeroRoundTrip) {
    {
        std::ofstream f(path("cube.obj"));
        f << to_obj(make_box_mesh({0, 0, 0}, {1, 1, 1}));
    }
    ASSERT_EQ(run("dexelize " + path("cube.obj") + " -o " + path("cube.dxl") + " --resolution 16"), 0) << output();
    ASSERT_EQ(run("dilate " + path("cube.dxl") + " -o " + path("d0.dxl") + " --radius 0"), 0) << output();
    EXPECT_EQ(run("compare " + path("cube.dxl") + " " + path("d0.dxl")), 0) << output();
    EXPECT_EQ(load_dxl(path("cube.dxl")).nx(), 16u);
}

TEST_F(Cli, SweepMatchesBrute) {
    std::mt19937_64 rng(71);
    save_dxl(testing_support::random_grid(rng, 24, 3), path("g.dxl"));
    ASSERT_EQ(run("dilate " + path("g.dxl") + " -o " + path("s.dxl") + " --radius 3.5 --radius-unit dexel"), 0);
    ASSERT_EQ(run("dilate " + path("g.dxl") + " -o " + path("b.dxl") +
                  " --radius 3.5 --radius-unit dexel --engine brute --threads 2"),
              0);
    EXPECT_EQ(run("compare " + path("s.dxl") + " " + path("b.dxl")), 0) << output();
}

TEST_F(Cli, RadiusUnits) {
    std::mt19937_64 rng(72);
    const DexelGrid g = testing_support::random_grid(rng, 12, 3);
    save_dxl(g, path("g.dxl"));
    ASSERT_EQ(run("erode " + path("g.dxl") + " -o " + path("a.dxl") + " --radius 2 --radius-unit dexel"), 0);
    EXPECT_EQ(bytes("a.dxl"), encode_dxl(erode_grid(g, 2 * g.spacing())));
}

TEST_F(Cli, DeterministicAcrossThreads) {
    std::mt19937_64 rng(73);
    save_dxl(testing_support::random_grid(rng, 32, 3), path("g.dxl"));
    for (const char* op : {"dilate", "erode", "open", "close"}) {
        ASSERT_EQ(run(std::string(op) + " " + path("g.dxl") + " -o " + path("t1.dxl") + " --radius 2.5 --threads 1"), 0);
        ASSERT_EQ(run(std::string(op) + " " + path("g.dxl") + " -o " + path("t4.dxl") + " --radius 2.5 --threads 4"), 0);
        EXPECT_EQ(bytes("t1.dxl"), bytes("t4.dxl")) << op;
    }
}

TEST_F(Cli, CompareMismatchAndErrors) {
    std::mt19937_64 rng(74);
    DexelGrid a = testing_support::random_grid(rng, 8, 2);
    DexelGrid b = a;
    b.at(3 % a.nx(), 0) = {{0, 1}};
    a.at(3 % a.nx(), 0) = {};
    save_dxl(a, path("a.dxl"));
    save_dxl(b, path("b.dxl"));
    EXPECT_EQ(run("compare " + path("a.dxl") + " " + path("b.dxl")), 1);
    EXPECT_NE(output().find("first difference at column (" + std::to_string(3 % a.nx()) + ", 0)"),
              std::string::npos);

    GridGeometry wide = a.geometry();
    wide.nx += 1;
    save_dxl(DexelGrid(wide), path("w.dxl"));
    EXPECT_EQ(run("compare " + path("a.dxl") + " " + path("w.dxl")), 3);
    EXPECT_EQ(run("compare " + path("a.dxl") + " " + path("missing.dxl")), 3);
    EXPECT_EQ(run("boolean " + path("a.dxl") + " " + path("w.dxl") + " --op union -o " + path("u.dxl")), 3);
    EXPECT_EQ(run("dilate " + path("a.dxl") + " -o " + path("x.dxl") + " --radius 1 --bogus"), 2);
    EXPECT_EQ(run("dilate " + path("a.dxl") + " -o " + path("x.dxl")), 2);
    EXPECT_EQ(run("dilate " + path("a.dxl") + " -o " + path("x.dxl") + " --radius -1"), 2);
    EXPECT_EQ(run("dilate " + path("a.dxl") + " -o " + path("x.dxl") + " --radius 1 --engine gpu"), 2);
    EXPECT_EQ(run(""), 2);
    {
        std::ofstream f(path("junk.dxl"));
        f << "not a grid";
    }
    EXPECT_EQ(run("erode " + path("junk.dxl") + " -o " + path("x.dxl") + " --radius 1"), 3);
}

TEST_F(Cli, BooleanShellExport) {
    std::mt19937_64 rng(75);
    const DexelGrid a = testing_support::random_grid(rng, 10, 3);
    DexelGrid b(a.geometry());
    for (std::size_t k = 0; k < b.columns().size(); ++k)
        b.columns()[k] = testing_support::random_column(rng, 2, a.geometry().z_min, a.geometry().z_max);
    save_dxl(a, path("a.dxl"));
    save_dxl(b, path("b.dxl.txt"));
    ASSERT_EQ(run("boolean " + path("a.dxl") + " " + path("b.dxl.txt") + " --op difference -o " + path("d.dxl")), 0);
    EXPECT_EQ(bytes("d.dxl"), encode_dxl(grid_boolean(a, b, BooleanOp::Difference)));

    ASSERT_EQ(run("shell " + path("a.dxl") + " -o " + path("s.dxl") + " --r-out 1 --r-in 0.5"), 0);
    EXPECT_EQ(bytes("s.dxl"), encode_dxl(shell_grid(a, 1, 0.5)));

    ASSERT_EQ(run("export " + path("a.dxl") + " -o " + path("a.obj") + " --mode boxes"), 0);
    EXPECT_EQ(bytes("a.obj"), export_obj(a, ExportMode::Boxes));
    ASSERT_EQ(run("export " + path("a.dxl") + " -o " + path("p.obj")), 0);
    EXPECT_EQ(bytes("p.obj"), export_obj(a, ExportMode::Points));
}

TEST_F(Cli, BenchWritesCsv) {
    ASSERT_EQ(run("bench --suite quick --models boxes --sizes 16 24 32 --ops dilate -o " + path("r.csv")), 0)
        << output();
    const std::string csv = bytes("r.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,op,engine,size,rel_radius,threads,seconds,n,m");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_NE(output().find("slope boxes dilate sweep"), std::string::npos);
}
