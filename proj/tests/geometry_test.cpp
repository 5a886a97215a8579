#include <gtest/gtest.h>

#include <random>

#include "flc/errors.hpp"
#include "flc/geometry.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using flc::Complex;

TEST(Geometry, MaxDistIsTheLargestCoordinateGap) {
    EXPECT_DOUBLE_EQ(flc::max_dist(flc::Point{{0, 0}}, flc::Point{{1, -3}}), 3.0);
    EXPECT_THROW(flc::max_dist(flc::Point{{0}}, flc::Point{{0, 1}}), flc::InputError);
}

TEST(Geometry, BoxMembershipIsStrictWithBoundaryTolerance) {
    flc::Box b{flc::Point{{0.0}}, 1.0};
    EXPECT_TRUE(b.contains(flc::Point{{0.999}}));
    EXPECT_FALSE(b.contains(flc::Point{{1.0}}));
    EXPECT_FALSE(b.contains(flc::Point{{-1.0 + 1e-13}}));
}

TEST(Geometry, CoveringGridCoversTheBox) {
    std::mt19937_64 rng(7);
    for (double spacing : {0.3, 0.177, 1.0}) {
        const double bound = 2.3;
        auto g = flc::covering_grid(bound, spacing);
        ASSERT_EQ(g.points.size(), g.side() * g.side());
        for (std::size_t k = 0; k < g.points.size(); ++k) {
            EXPECT_NEAR(g.points[k].real(), g.real_index(k) * spacing, 1e-12);
            EXPECT_NEAR(g.points[k].imag(), g.imag_index(k) * spacing, 1e-12);
        }
        std::uniform_real_distribution<double> u(-bound, bound);
        for (int i = 0; i < 500; ++i) {
            Complex z(u(rng), u(rng));
            EXPECT_LE(oracle::distance_to_points(z, g.points), spacing / std::sqrt(2.0) + 1e-12);
        }
    }
}

TEST(Geometry, CoveringGridRowMajorImaginaryOuter) {
    auto g = flc::covering_grid(1.0, 1.0);
    ASSERT_EQ(g.half_extent, 1);
    EXPECT_EQ(g.points.front(), Complex(-1, -1));
    EXPECT_EQ(g.points[1], Complex(0, -1));
    EXPECT_EQ(g.points.back(), Complex(1, 1));
}

TEST(Geometry, HausdorffMatchesBruteForceOnBothCodePaths) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int n : {5, 60, 1500}) {
        std::vector<Complex> a, b;
        for (int i = 0; i < n; ++i) a.emplace_back(u(rng), u(rng));
        for (int i = 0; i < n + 3; ++i) b.emplace_back(u(rng), 0.3 * u(rng));
        EXPECT_NEAR(flc::euclidean_hausdorff(a, b), oracle::hausdorff(a, b), 1e-12) << n;
    }
    EXPECT_THROW(flc::euclidean_hausdorff({}, std::vector<Complex>{1.0}), flc::InputError);
}

TEST(Geometry, HausdorffSandwichProperty) {
    auto o = props::hausdorff_sandwich(200, 3);
    EXPECT_TRUE(o.ok()) << o.first;
}

TEST(Geometry, MaxMetricHausdorff) {
    std::vector<flc::Point> a{{{0, 0}}, {{2, 0}}}, b{{{0, 1}}};
    EXPECT_DOUBLE_EQ(flc::max_metric_hausdorff(a, b), 2.0);
}

TEST(Geometry, GridFamilyIsNDisjointAndSplitsMass) {
    auto o = props::mass_splitting(200, 5);
    EXPECT_TRUE(o.ok()) << o.first;
}

TEST(Geometry, GridFamilyRejectsOverlappingStrips) {
    EXPECT_THROW(flc::disjoint_grid_family(1, 3, 2.0, 1.0), flc::PreconditionError);
    EXPECT_NO_THROW(flc::disjoint_grid_family(1, 3, 2.5, 1.0));
}

TEST(Geometry, GridFamilyStripsArePairwiseDisjoint) {
    auto fam = flc::disjoint_grid_family(1, 4, 3.5, 1.0);
    for (double u = -40; u < 40; u += 0.01) {
        int c = 0;
        for (int i = 0; i < 4; ++i) c += fam.in_strip(i, u);
        EXPECT_LE(c, 1) << u;
    }
}
