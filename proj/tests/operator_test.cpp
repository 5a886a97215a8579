#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "flc/errors.hpp"
#include "flc/models.hpp"
#include "flc/operator.hpp"
#include "oracles.hpp"

using flc::Complex;

namespace {

flc::SparseMatrix random_local_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<Eigen::Triplet<Complex>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, Complex(g(rng), g(rng)));
        if (i + 1 < n) {
            t.emplace_back(i, i + 1, Complex(g(rng), g(rng)));
            t.emplace_back(i + 1, i, Complex(g(rng), g(rng)));
        }
        if (i + 3 < n) t.emplace_back(i + 3, i, Complex(g(rng), g(rng)));
    }
    flc::SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

flc::SparseMatrix conjugate_by_phases(const flc::SparseMatrix& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const auto n = m.rows();
    std::vector<Complex> d(n);
    for (auto& z : d) z = std::polar(1.0, u(rng));
    flc::SparseMatrix out = m;
    for (int c = 0; c < out.outerSize(); ++c) {
        for (flc::SparseMatrix::InnerIterator it(out, c); it; ++it) {
            it.valueRef() = d[it.row()] * it.value() * std::conj(d[it.col()]);
        }
    }
    return out;
}

flc::PointCloud line(int n, double start) {
    flc::PointCloud p(1);
    for (int i = 0; i < n; ++i) {
        const double x = start + i;
        p.push_back(std::span<const double>(&x, 1));
    }
    return p;
}

flc::OperatorSpec decaying(double C, double eps) {
    auto def = flc::builtin_model("power-law");
    def.decay = flc::DecayBound{C, eps};
    return flc::make_operator(def);
}

}  // namespace

TEST(Operator, CanonicalGaugeIsInvariantUnderDiagonalUnitaries) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto m = random_local_matrix(12, rng);
        auto u = conjugate_by_phases(m, rng);
        Eigen::MatrixXcd a(flc::canonical_gauge(m));
        Eigen::MatrixXcd b(flc::canonical_gauge(u));
        EXPECT_LT((a - b).norm(), 1e-10 * (1.0 + a.norm()));
    }
}

TEST(Operator, EquivalentPatchesUpToTranslationAndGauge) {
    std::mt19937_64 rng(3);
    auto m = random_local_matrix(8, rng);
    auto u = conjugate_by_phases(m, rng);
    EXPECT_TRUE(flc::equivalent_patches(line(8, 0), m, line(8, 17), u));
    auto other = random_local_matrix(8, rng);
    EXPECT_FALSE(flc::equivalent_patches(line(8, 0), m, line(8, 0), other));
    EXPECT_FALSE(flc::equivalent_patches(line(8, 0), m, line(7, 0), m.topLeftCorner(7, 7)));
}

TEST(Operator, DecayTailConstantInOneDimension) {
    EXPECT_NEAR(flc::decay_tail_constant(1, 1.0, 1.0), 8.0, 1e-12);
    EXPECT_THROW(flc::decay_tail_constant(1, 0.0, 1.0), flc::InputError);
}

TEST(Operator, DecayTailConstantDominatesPartialSums) {
    // sum_{|k| > m} (1 + |k|)^-(1+eps) <= C2 m^-eps on Z.
    for (double eps : {0.5, 1.0, 2.0}) {
        const double c2 = flc::decay_tail_constant(1, eps, 1.0);
        for (long m : {1L, 2L, 5L, 20L, 100L}) {
            double s = 0.0;
            for (long k = m + 1; k < 2000000; ++k) s += 2.0 * std::pow(1.0 + k, -(1.0 + eps));
            EXPECT_LE(s, c2 * std::pow(static_cast<double>(m), -eps)) << "eps=" << eps << " m=" << m;
        }
    }
}

TEST(Operator, CutoffLengthIsTheSmallestAdmissiblePowerOfTwo) {
    auto op = decaying(1.0, 1.0);  // C * C2 = 8
    EXPECT_DOUBLE_EQ(flc::cutoff_length(op, 1.0), 8.0);
    EXPECT_DOUBLE_EQ(flc::cutoff_length(op, 0.1), 128.0);
    EXPECT_DOUBLE_EQ(flc::cutoff_length(op, 100.0), 1.0);
    auto free1d = flc::make_operator(flc::builtin_model("free1d"));
    EXPECT_DOUBLE_EQ(flc::cutoff_length(free1d, 1e-6), 1.0);
}

TEST(Operator, TrimReportsTheTailBound) {
    auto op = decaying(1.0, 1.0);
    auto t = flc::trim(op, 8.0);
    EXPECT_DOUBLE_EQ(t.m, 8.0);
    EXPECT_NEAR(t.trim_error, 1.0, 1e-12);
    ASSERT_TRUE(t.op.range().has_value());
    EXPECT_DOUBLE_EQ(*t.op.range(), 8.0);
    EXPECT_NEAR(t.op.norm_bound(), op.norm_bound() + 1.0, 1e-12);
    for (const auto& p : t.op.catalog(12.0)->patches) {
        for (int c = 0; c < p.matrix.outerSize(); ++c) {
            for (flc::SparseMatrix::InnerIterator it(p.matrix, c); it; ++it) {
                EXPECT_LE(flc::max_dist(p.points[it.row()], p.points[it.col()]), 8.0);
            }
        }
    }
}

TEST(Operator, TrimIsIdempotentOnFiniteRange) {
    auto op = flc::make_operator(flc::builtin_model("period2"));
    auto t = flc::trim(op, 4.0);
    EXPECT_EQ(t.trim_error, 0.0);
    EXPECT_EQ(t.op.id(), op.id());
    auto tt = flc::trim(decaying(1.0, 1.0), 4.0);
    auto again = flc::trim(tt.op, 4.0);
    EXPECT_EQ(again.trim_error, 0.0);
    EXPECT_EQ(again.op.id(), tt.op.id());
}

TEST(Operator, TrimWithoutDecayDataRefuses) {
    auto def = flc::builtin_model("free1d");
    auto op = flc::make_operator(def);
    flc::OperatorParams p = op.params();
    p.range.reset();
    flc::OperatorSpec bare(p, op.oracle());
    EXPECT_THROW(flc::trim(bare, 2.0), flc::CertificationError);
    EXPECT_THROW(flc::cutoff_length(bare, 0.5), flc::CertificationError);
    EXPECT_THROW(bare.require_range(), flc::PreconditionError);
}

TEST(Operator, SchurBoundOfTheFreeLaplacian) {
    auto op = flc::make_operator(flc::builtin_model("free1d"));
    EXPECT_NEAR(flc::schur_norm_bound(op, 4.0), 4.0, 1e-12);
    EXPECT_NEAR(flc::norm_shift_bound(op, 0.0), 4.0, 1e-12);
    EXPECT_NEAR(flc::norm_shift_bound(op, Complex(3.0, 4.0)), 9.0, 1e-12);
    EXPECT_THROW(flc::schur_norm_bound(op, 1.0), flc::PreconditionError);
}

TEST(Operator, SchurBoundDominatesDenseNorms) {
    for (const char* name : {"free1d", "period2", "complex-rotation", "jump", "free2d", "hofstadter-half"}) {
        auto def = flc::builtin_model(name);
        auto op = flc::make_operator(def);
        const long size = def.dimension == 1 ? 60 : 12;
        const double dense = oracle::operator_norm(flc::sample_section(def, size));
        EXPECT_LE(dense, op.norm_bound() + 1e-9) << name;
        EXPECT_LE(dense, flc::schur_norm_bound(op, 6.0) + 1e-9) << name;
    }
}

TEST(Operator, CatalogsAreMemoisedAndDeterministic) {
    auto op = flc::make_operator(flc::builtin_model("fibonacci"));
    auto a = op.catalog(6.0);
    auto b = op.catalog(6.0);
    EXPECT_EQ(a.get(), b.get());
    auto fresh = flc::make_operator(flc::builtin_model("fibonacci")).catalog(6.0);
    ASSERT_EQ(a->size(), fresh->size());
    for (std::size_t i = 0; i < a->size(); ++i) {
        EXPECT_EQ(a->patches[i].points, fresh->patches[i].points);
        EXPECT_EQ(Eigen::MatrixXcd(a->patches[i].matrix), Eigen::MatrixXcd(fresh->patches[i].matrix));
    }
    EXPECT_THROW(op.catalog(0.0), flc::InputError);
}
