#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace dexoff;
using testing_support::block_grid;
using testing_support::random_grid;

namespace {

// Erosion spelled out as complement, dilate, complement.
DexelGrid erode_by_duality(const DexelGrid& s, double r) {
    const GridGeometry padded = dilation_geometry(s.geometry(), r);
    const DexelGrid outside = grid_complement(resample_to(s, padded));
    return grid_complement(resample_to(dilate_grid(outside, r), s.geometry()));
}

DexelGrid single_column(double z0, double z1) {
    GridGeometry g;
    g.nx = g.ny = 5;
    g.z_min = -3;
    g.z_max = 3;
    DexelGrid grid(g);
    grid.at(2, 2) = {{z0, z1}};
    return grid;
}

}  // namespace

TEST(RadiusTransfer, Examples) {
    EXPECT_DOUBLE_EQ(radius_transfer(0, 1), 1);
    EXPECT_DOUBLE_EQ(radius_transfer(1, 1), 0);
    EXPECT_NEAR(radius_transfer(0.6, 1), 0.8, 1e-15);
    EXPECT_THROW(radius_transfer(1.5, 1), InvalidInput);
    EXPECT_THROW(radius_transfer(-1, 1), InvalidInput);
}

TEST(DilateGrid, SingleColumnUnitRadius) {
    const DexelGrid out = dilate_grid(single_column(0, 1), 1.0);
    ASSERT_EQ(out.nx(), 7u);
    EXPECT_DOUBLE_EQ(out.geometry().z_min, -4);
    // input column (2,2) sits at (3,3) of the grown grid
    EXPECT_EQ(out.at(3, 3), (DexelColumn{{-1, 2}}));
    for (auto [i, j] : {std::pair{2, 3}, {4, 3}, {3, 2}, {3, 4}}) EXPECT_EQ(out.at(i, j), (DexelColumn{{0, 1}}));
    for (auto [i, j] : {std::pair{2, 2}, {4, 4}, {2, 4}, {4, 2}}) EXPECT_TRUE(out.at(i, j).empty());
    EXPECT_EQ(out.interval_count(), 5u);
}

TEST(DilateGrid, ZeroRadiusIsIdentity) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        const DexelGrid g = random_grid(rng, 16, 3);
        EXPECT_EQ(encode_dxl(dilate_grid(g, 0.0)), encode_dxl(g));
        EXPECT_EQ(encode_dxl(erode_grid(g, 0.0)), encode_dxl(g));
    }
}

TEST(DilateGrid, NegativeRadiusRejected) {
    const DexelGrid g = single_column(0, 1);
    EXPECT_THROW(dilate_grid(g, -1), InvalidInput);
    EXPECT_THROW(erode_grid(g, -1), InvalidInput);
    EXPECT_THROW(dilate_grid(g, std::nan("")), InvalidInput);
}

TEST(DilateGrid, MatchesBruteForce) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> rad(0, 6);
    for (int t = 0; t < 60; ++t) {
        const DexelGrid g = random_grid(rng, 32, 3);
        const double r = rad(rng) * g.spacing();
        const DexelGrid sweep = dilate_grid(g, r, {Engine::Sweep, 1});
        const DexelGrid brute = dilate_grid(g, r, {Engine::Brute, 1});
        const auto diff = first_difference(sweep, brute, sweep.eps_merge());
        ASSERT_FALSE(diff) << "trial " << t << " column " << diff->i << "," << diff->j;
    }
}

TEST(DilateGrid, MembershipBySampling) {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 10; ++t) {
        const DexelGrid g = random_grid(rng, 8, 2, 0.4);
        const double r = 2.3 * g.spacing();
        const DexelGrid out = dilate_grid(g, r);
        EXPECT_EQ(testing_support::count_membership_errors(out, g, r, 25, 1e-9), 0) << t;
    }
}

TEST(DilateGrid, Properties) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> rad(0, 5);
    for (int t = 0; t < 40; ++t) {
        const DexelGrid g = random_grid(rng, 20, 3);
        const double r1 = rad(rng) * g.spacing(), r2 = r1 + rad(rng) * g.spacing();
        const DexelGrid d1 = dilate_grid(g, r1), d2 = dilate_grid(g, r2);
        EXPECT_TRUE(grid_subset(resample_to(g, d1.geometry()), d1, d1.eps_merge()));
        EXPECT_TRUE(grid_subset(resample_to(d1, d2.geometry()), d2, d2.eps_merge()));
        const DexelGrid e1 = erode_grid(g, r1);
        EXPECT_TRUE(grid_subset(e1, g, g.eps_merge()));
        EXPECT_TRUE(grid_subset(erode_grid(g, r2), e1, g.eps_merge()));
    }
}

TEST(DilateGrid, MirrorSymmetry) {
    std::mt19937_64 rng(45);
    for (int t = 0; t < 20; ++t) {
        const DexelGrid g = random_grid(rng, 16, 3);
        const double r = 3.7 * g.spacing();
        for (auto [fx, fy] : {std::pair{true, false}, {false, true}}) {
            const DexelGrid a = dilate_grid(mirror_grid(g, fx, fy), r);
            const DexelGrid b = mirror_grid(dilate_grid(g, r), fx, fy);
            EXPECT_EQ(encode_dxl(a), encode_dxl(b));
        }
    }
}

TEST(DilateGrid, DeterministicAcrossThreadCounts) {
    std::mt19937_64 rng(46);
    const DexelGrid g = random_grid(rng, 32, 3);
    const double r = 4.2 * g.spacing();
    const std::string one = encode_dxl(dilate_grid(g, r, {Engine::Sweep, 1}));
    EXPECT_EQ(encode_dxl(dilate_grid(g, r, {Engine::Sweep, 3})), one);
    EXPECT_EQ(encode_dxl(dilate_grid(g, r, {Engine::Sweep, 0})), one);
}

TEST(DilateInto, WindowMatchesCrop) {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 20; ++t) {
        const DexelGrid g = random_grid(rng, 16, 3);
        const double r = 2.5 * g.spacing();
        const DexelGrid full = dilate_grid(g, r);
        EXPECT_EQ(encode_dxl(dilate_into(g, r, g.geometry())), encode_dxl(resample_to(full, g.geometry())));
        GridGeometry off = g.geometry();
        off.origin_x += 2 * off.spacing;
        off.nx = std::max(1u, off.nx / 2);
        EXPECT_EQ(encode_dxl(dilate_into(g, r, off)), encode_dxl(resample_to(full, off)));
        off.origin_x += 0.5 * off.spacing;
        EXPECT_THROW(dilate_into(g, r, off), IncompatibleGrids);
    }
}

TEST(ErodeGrid, CubeShrinksByOneDexel) {
    const DexelGrid cube = block_grid(8, 2, 6, 2, 6, 0, 4, 8);
    const DexelGrid out = erode_grid(cube, 1.0);
    EXPECT_EQ(out.geometry(), cube.geometry());
    EXPECT_EQ(out.interval_count(), 4u);
    for (std::uint32_t j = 3; j < 5; ++j)
        for (std::uint32_t i = 3; i < 5; ++i) EXPECT_EQ(out.at(i, j), (DexelColumn{{1, 3}}));
}

TEST(ErodeGrid, EmptyStaysEmpty) {
    GridGeometry g;
    g.nx = g.ny = 6;
    const DexelGrid empty(g);
    EXPECT_TRUE(erode_grid(dilate_grid(empty, 2.0), 2.0).empty());
}

TEST(ErodeGrid, DualityIsByteIdentical) {
    std::mt19937_64 rng(48);
    std::uniform_real_distribution<double> rad(0, 6);
    for (int t = 0; t < 60; ++t) {
        const DexelGrid g = random_grid(rng, 24, 3, 0.8);
        const double r = rad(rng) * g.spacing();
        ASSERT_EQ(encode_dxl(erode_grid(g, r)), encode_dxl(erode_by_duality(g, r))) << t;
    }
}

TEST(ErodeGrid, BruteEngineAgrees) {
    std::mt19937_64 rng(49);
    for (int t = 0; t < 20; ++t) {
        const DexelGrid g = random_grid(rng, 16, 3, 0.8);
        const double r = 2.2 * g.spacing();
        EXPECT_EQ(encode_dxl(erode_grid(g, r, {Engine::Sweep, 1})), encode_dxl(erode_grid(g, r, {Engine::Brute, 1})));
    }
}
