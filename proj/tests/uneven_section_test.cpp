#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flc/errors.hpp"
#include "flc/models.hpp"
#include "flc/uneven_section.hpp"
#include "oracles.hpp"

using flc::Complex;

namespace {

const flc::Patch& undominated(const flc::PatchCatalog& cat) {
    for (const auto& p : cat.patches) {
        if (!p.dominated) return p;
    }
    throw std::logic_error("catalog has only dominated patches");
}

flc::UnevenSection wrap(const Eigen::MatrixXcd& dense) {
    flc::UnevenSection q;
    q.matrix = dense.sparseView();
    return q;
}

Eigen::MatrixXcd random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) a(i, j) = Complex(g(rng), g(rng));
    }
    return a;
}

}  // namespace

TEST(UnevenSection, FreeLaplacianSingleColumn) {
    auto op = flc::make_operator(flc::builtin_model("free1d"));
    // The three-site window centred on a lattice point.
    const auto& patch = op.catalog(2.0)->patches.front();
    ASSERT_EQ(patch.points.size(), 3u);
    auto q = flc::build_uneven_section(op, patch, 2.0, 1.0, 0.0);
    ASSERT_EQ(q.matrix.rows(), 3);
    ASSERT_EQ(q.matrix.cols(), 1);
    Eigen::MatrixXcd d(q.matrix);
    EXPECT_EQ(d(0, 0), Complex(-1.0));
    EXPECT_EQ(d(1, 0), Complex(2.0));
    EXPECT_EQ(d(2, 0), Complex(-1.0));
    auto v = flc::smallest_singular_interval(q, 1e-9);
    EXPECT_TRUE(v.contains(std::sqrt(6.0))) << v.lo << " " << v.hi;
    EXPECT_LE(v.hi - v.lo, 1e-9);

    auto q2 = flc::build_uneven_section(op, patch, 2.0, 1.0, 2.0);
    Eigen::MatrixXcd d2(q2.matrix);
    EXPECT_EQ(d2(1, 0), Complex(0.0));
    EXPECT_TRUE(flc::smallest_singular_interval(q2, 1e-9).contains(std::sqrt(2.0)));
}

TEST(UnevenSection, RejectsUndersizedPatches) {
    auto op = flc::make_operator(flc::builtin_model("free1d"));
    const auto& patch = undominated(*op.catalog(2.0));
    EXPECT_THROW(flc::build_uneven_section(op, patch, 2.0, 3.0, 0.0), flc::PreconditionError);
    EXPECT_THROW(flc::build_uneven_section(op, patch, 2.0, -1.0, 0.0), flc::InputError);
}

TEST(UnevenSection, ZeroColumnGivesZero) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 2);
    a(0, 0) = 1.0;
    auto v = flc::smallest_singular_interval(wrap(a), 1e-6);
    EXPECT_EQ(v.lo, 0.0);
    EXPECT_EQ(v.hi, 0.0);
}

TEST(UnevenSection, PaddedDiagonal) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 3.0;
    auto v = flc::smallest_singular_interval(wrap(a), 1e-10);
    EXPECT_TRUE(v.contains(2.0));
    EXPECT_LE(v.hi - v.lo, 1e-10);
    EXPECT_THROW(flc::smallest_singular_interval(wrap(a), 0.0), flc::InputError);
}

TEST(UnevenSection, PositiveDefiniteness) {
    EXPECT_TRUE(flc::is_positive_definite(Eigen::MatrixXcd::Identity(4, 4)));
    Eigen::MatrixXcd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    EXPECT_FALSE(flc::is_positive_definite(indefinite));
    EXPECT_THROW(flc::is_positive_definite(Eigen::MatrixXcd::Identity(2, 3)), flc::InputError);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd a = random_matrix(12, 8, rng);
        Eigen::MatrixXcd g = a.adjoint() * a;
        const double s = oracle::smallest_singular_value(a);
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(8, 8);
        EXPECT_TRUE(flc::is_positive_definite(g - 0.9 * s * s * id));
        EXPECT_FALSE(flc::is_positive_definite(g - 1.1 * s * s * id));
    }
}

TEST(UnevenSection, IntervalContainsTheDenseSingularValue) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXcd a = random_matrix(30, 20, rng);
        const double s = oracle::smallest_singular_value(a);
        auto v = flc::smallest_singular_interval(wrap(a), 1e-8);
        EXPECT_LE(v.lo, s + 1e-12);
        EXPECT_GE(v.hi, s - 1e-12);
        EXPECT_LE(v.hi - v.lo, 1e-8);
    }
}

TEST(UnevenSection, PreparedGramMatchesDirectSection) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (const char* name : {"complex-rotation", "period2", "hofstadter-half", "fibonacci"}) {
        auto op = flc::make_operator(flc::builtin_model(name));
        const double L = 4.0;
        const double m = op.require_range();
        auto cat = op.catalog(L + m);
        for (const auto& patch : cat->patches) {
            flc::PreparedSection prep(patch, L, m);
            for (int k = 0; k < 3; ++k) {
                const Complex lambda(u(rng), u(rng));
                auto direct = flc::build_uneven_section(op, patch, L + m, L, lambda);
                const double s = oracle::smallest_singular_value(Eigen::MatrixXcd(direct.matrix));
                auto search = prep.search(lambda);
                search.refine(1e-9);
                EXPECT_LE(search.lo(), s + 1e-9) << name;
                EXPECT_GE(search.hi(), s - 1e-9) << name;
            }
        }
    }
}

TEST(UnevenSection, QuasimodeVectorAttainsTheMinimum) {
    auto op = flc::make_operator(flc::builtin_model("complex-rotation"));
    const double L = 6.0;
    auto cat = op.catalog(L + 1.0);
    for (const auto& patch : cat->patches) {
        auto q = flc::build_uneven_section(op, patch, L + 1.0, L, Complex(0.7, 0.2));
        auto v = flc::smallest_right_singular_vector(q, 1e-10);
        auto s = flc::smallest_singular_interval(q, 1e-10);
        ASSERT_EQ(v.size(), q.matrix.cols());
        EXPECT_NEAR(v.norm(), 1.0, 1e-10);
        const double residual = (Eigen::MatrixXcd(q.matrix) * v).norm();
        EXPECT_GE(residual, s.lo - 1e-9);
        EXPECT_LE(residual, s.hi + 1e-6);
    }
}

TEST(UnevenSection, SectionShapeFollowsTheBoxes) {
    auto op = flc::make_operator(flc::builtin_model("free2d"));
    auto cat = op.catalog(4.0);
    const auto& patch = undominated(*cat);
    auto q = flc::build_uneven_section(op, patch, 4.0, 3.0, 0.0);
    for (std::size_t i = 0; i < q.cols.size(); ++i) {
        EXPECT_LT(flc::max_dist(q.cols[i], patch.center.coords), 3.0);
    }
    for (std::size_t i = 0; i < q.rows.size(); ++i) {
        EXPECT_LT(flc::max_dist(q.rows[i], patch.center.coords), 4.0);
    }
    EXPECT_GT(q.rows.size(), q.cols.size());
}
