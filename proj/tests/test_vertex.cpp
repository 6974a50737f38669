#include <gtest/gtest.h>

#include <random>

#include "vertex_oracle.hpp"

using namespace dexoff;
using testing_support::Search;

TEST(VoronoiPoints, Examples) {
    auto v = voronoi_vertex_points({-1, 0}, {1, 0}, {0, 1});
    ASSERT_TRUE(v);
    EXPECT_NEAR(v->row, 0, 1e-12);
    EXPECT_NEAR(v->z, 0, 1e-12);

    v = voronoi_vertex_points({0, 0}, {2, 0}, {1, 1});
    ASSERT_TRUE(v);
    EXPECT_NEAR(v->row, 1, 1e-12);
    EXPECT_NEAR(v->z, 0, 1e-12);
    const double d = distance(*v, Point2{0, 0});
    EXPECT_NEAR(distance(*v, Point2{2, 0}), d, 1e-12);
    EXPECT_NEAR(distance(*v, Point2{1, 1}), d, 1e-12);

    EXPECT_FALSE(voronoi_vertex_points({0, 0}, {1, 0}, {2, 0}));
    EXPECT_EQ(testing_support::search_points({0, 0}, {1, 0}, {2, 0}), Search::NoZero);
}

TEST(VoronoiSegmentPoints, SymmetricExample) {
    const SeedSegment s{0, -1, 1};
    const auto v = voronoi_vertex_segment_points({1, 2}, s, {1, -2});
    ASSERT_TRUE(v);
    EXPECT_NEAR(v->row, 2.5, 1e-12);
    EXPECT_NEAR(v->z, 0.0, 1e-12);
    EXPECT_NEAR(distance(*v, s), distance(*v, Point2{1, 2}), 1e-12);
}

TEST(VoronoiSegmentPoints, PointOnSegmentGivesTangentVertex) {
    // b lies on s, so the vertex is where the a/b bisector crosses z = b.z.
    const Point2 a{4, -0.35495174140985419}, b{6, 0.0019308850954367074};
    const SeedSegment s{6, -4.449020532728138, 8.7993487086946658};
    const auto vs = voronoi_vertices_segment_points(a, s, b);
    ASSERT_EQ(vs.size(), 1u);
    EXPECT_NEAR(vs[0].z, b.z, 1e-6);
    EXPECT_NEAR(distance(vs[0], a), distance(vs[0], b), 1e-9);
    EXPECT_NEAR(distance(vs[0], b), std::abs(vs[0].row - s.row), 1e-9);
}

TEST(VoronoiSegmentPoints, BothPointsOnSegmentRowIsNone) {
    const SeedSegment s{-8, -5.6, 9.4};
    const Point2 a{-8, 2.2}, b{-8, 2.3};
    EXPECT_TRUE(voronoi_vertices_segment_points(a, s, b).empty());
    EXPECT_EQ(testing_support::search_segment_points(a, s, b), Search::NoZero);
}

TEST(VoronoiSegmentPoints, RootOutsideSegmentIsNone) {
    // The points' bisector is the line z = 7, above the segment's tip.
    const SeedSegment s{0, -1, 1};
    const Point2 a{1, 5}, b{1, 9};
    EXPECT_TRUE(voronoi_vertices_segment_points(a, s, b).empty());
    EXPECT_EQ(testing_support::search_segment_points(a, s, b), Search::NoZero);
    EXPECT_TRUE(voronoi_vertex_points(a, {0, 1}, b).has_value());
}

TEST(VoronoiSegmentPoints, DegenerateSegmentDelegates) {
    const Point2 a{1, 2}, b{3, -1};
    const auto seg = voronoi_vertex_segment_points(a, {0.5, 0.25, 0.25}, b);
    const auto pts = voronoi_vertex_points(a, {0.5, 0.25}, b);
    ASSERT_TRUE(seg && pts);
    EXPECT_NEAR(seg->row, pts->row, 1e-9);
    EXPECT_NEAR(seg->z, pts->z, 1e-9);
}

TEST(VoronoiSegmentPoints, RandomEquidistance) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-4, 4);
    int found = 0;
    for (int t = 0; t < 2000; ++t) {
        const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
        double z0 = u(rng), z1 = u(rng);
        if (z0 > z1) std::swap(z0, z1);
        const SeedSegment s{u(rng), z0, z1};
        const auto vs = voronoi_vertices_segment_points(a, s, b);
        for (const Point2& v : vs) {
            const double ds = distance(v, s);
            const double scale = std::max(1.0, ds);
            EXPECT_NEAR(distance(v, a), ds, 1e-7 * scale);
            EXPECT_NEAR(distance(v, b), ds, 1e-7 * scale);
            EXPECT_GE(v.z, z0 - 1e-9);
            EXPECT_LE(v.z, z1 + 1e-9);
        }
        found += !vs.empty();
        if (vs.empty() && t % 10 == 0) {
            EXPECT_NE(testing_support::search_segment_points(a, s, b), Search::Zero);
        }
    }
    EXPECT_GT(found, 100);
}

TEST(PowerVertex, Examples) {
    auto v = power_vertex({0, 0, 1}, {2, 0, 1}, {1, 1, 1});
    ASSERT_TRUE(v);
    EXPECT_NEAR(v->row, 1, 1e-12);
    EXPECT_NEAR(v->z, 0, 1e-12);

    const WeightedPoint a{0, 0, 1}, b{2, 0, 0}, c{1, 1, 0};
    v = power_vertex(a, b, c);
    ASSERT_TRUE(v);
    EXPECT_NEAR(v->row, 1.25, 1e-12);
    EXPECT_NEAR(v->z, 0.25, 1e-12);
    for (const auto& p : {a, b, c}) EXPECT_NEAR(power_distance(*v, p), 0.625, 1e-12);

    EXPECT_FALSE(power_vertex({0, 0, 1}, {1, 1, 2}, {2, 2, 0.5}));
}

TEST(PowerVertex, EqualRadiiReduceToCircumcentre) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int t = 0; t < 500; ++t) {
        const double r = std::abs(u(rng));
        const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        const auto pv = power_vertex({a.row, a.z, r}, {b.row, b.z, r}, {c.row, c.z, r});
        const auto vv = voronoi_vertex_points(a, b, c);
        ASSERT_EQ(pv.has_value(), vv.has_value());
        if (!pv) continue;
        const double scale = std::max(1.0, std::abs(vv->row) + std::abs(vv->z));
        EXPECT_NEAR(pv->row, vv->row, 1e-9 * scale);
        EXPECT_NEAR(pv->z, vv->z, 1e-9 * scale);
    }
}

namespace {

// Brute-force check: does `middle` still own some z of a row just past
// `vertex` against its two neighbours? Sampled densely along z.
bool middle_survives(const WeightedPoint& l, const WeightedPoint& m, const WeightedPoint& r, double row) {
    const double z0 = std::min({l.z, m.z, r.z}) - 50, z1 = std::max({l.z, m.z, r.z}) + 50;
    for (int k = 0; k <= 200000; ++k) {
        const Point2 p{row, z0 + (z1 - z0) * k / 200000.0};
        const double pm = power_distance(p, m);
        if (pm < power_distance(p, l) && pm < power_distance(p, r)) return true;
    }
    return false;
}

}  // namespace

TEST(PowerVertexIsRemoval, SymmetricTripleClosesBehind) {
    const WeightedPoint l{0, -1, 1}, m{-1, 0, 1}, r{0, 1, 1};
    const auto v = power_vertex(l, m, r);
    ASSERT_TRUE(v);
    EXPECT_TRUE(power_vertex_is_removal(l, m, r, *v));
    EXPECT_FALSE(middle_survives(l, m, r, v->row + 0.01));
    EXPECT_TRUE(middle_survives(l, m, r, v->row - 0.01));
}

TEST(PowerVertexIsRemoval, MiddleAheadPersists) {
    // The middle disk lies ahead of its neighbours in sweep order, so its
    // cell opens at the vertex instead of closing.
    const WeightedPoint l{0, -1, 0.2}, m{1, 0, 0.2}, r{0, 1, 0.2};
    const auto v = power_vertex(l, m, r);
    ASSERT_TRUE(v);
    EXPECT_FALSE(power_vertex_is_removal(l, m, r, *v));
    EXPECT_TRUE(middle_survives(l, m, r, v->row + 0.01));
}

TEST(PowerVertexIsRemoval, DominatedMiddle) {
    const WeightedPoint l{0, 0, 2}, m{0, 0, 1}, r{1, 3, 1};
    EXPECT_TRUE(power_vertex_is_removal(l, m, r, {0, 0}));
    EXPECT_FALSE(middle_survives(l, m, r, 0.5));
}

TEST(PowerVertexIsRemoval, AgreesWithSampling) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3, 3), rad(0, 2);
    int checked = 0;
    for (int t = 0; t < 200 && checked < 60; ++t) {
        WeightedPoint l{u(rng), u(rng), rad(rng)}, m{u(rng), u(rng), rad(rng)}, r{u(rng), u(rng), rad(rng)};
        if (l.z > r.z) std::swap(l, r);
        if (!(l.z < m.z && m.z < r.z)) continue;
        const auto v = power_vertex(l, m, r);
        if (!v) continue;
        // Only meaningful where the middle cell actually reaches the vertex row.
        if (!middle_survives(l, m, r, v->row - 1e-3) && !middle_survives(l, m, r, v->row + 1e-3)) continue;
        ++checked;
        EXPECT_EQ(power_vertex_is_removal(l, m, r, *v), !middle_survives(l, m, r, v->row + 1e-3))
            << l.row << ' ' << l.z << ' ' << l.radius << " | " << m.row << ' ' << m.z << ' ' << m.radius << " | "
            << r.row << ' ' << r.z << ' ' << r.radius;
    }
    EXPECT_GT(checked, 20);
}
