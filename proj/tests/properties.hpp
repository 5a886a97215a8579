#pragma once

// Randomised property checks shared by the unit tests and the acceptance runner.
// Each returns the number of violations and a short description of the first one.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flc/geometry.hpp"
#include "flc/lower_norm.hpp"
#include "flc/models.hpp"
#include "flc/operator.hpp"
#include "flc/uneven_section.hpp"
#include "oracles.hpp"

namespace props {

using flc::Complex;

struct Outcome {
    int checked = 0;
    int violations = 0;
    std::string first;

    bool ok() const { return violations == 0 && checked > 0; }
    void fail(const std::string& what) {
        if (violations++ == 0) first = what;
    }
};

/// Lattice points of Z^n inside [-S, S]^n in lexicographic order.
inline std::vector<std::vector<double>> lattice_box(int n, long S) {
    std::vector<std::vector<double>> pts;
    if (n == 1) {
        for (long i = -S; i <= S; ++i) pts.push_back({double(i)});
    } else {
        for (long i = -S; i <= S; ++i)
            for (long j = -S; j <= S; ++j) pts.push_back({double(i), double(j)});
    }
    return pts;
}

/// n-disjointness of the grid family and the mass-splitting bound min_i ||psi_{A_i}||^2 <= (n/r)||psi||^2,
/// plus the decomposition of the complement of A_i into boxes B_L(z), z in Z_i.
inline Outcome mass_splitting(int vectors, unsigned seed) {
    Outcome o;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> rdist(2, 6), mdist(1, 2), ndist(1, 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < vectors; ++t) {
        const int n = ndist(rng), r = rdist(rng);
        const double m = mdist(rng);
        const double L = (r - 1) * m + 0.25 + 3.0 * u(rng);
        auto fam = flc::disjoint_grid_family(n, r, L, m);
        const long S = static_cast<long>(std::ceil((n == 1 ? 3.0 : 1.2) * (L + m)));
        auto pts = lattice_box(n, S);
        std::vector<double> psi2(pts.size());
        double total = 0.0;
        // Mix spread-out and strip-concentrated vectors.
        const bool concentrate = t % 2 == 1;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            double a = g(rng);
            if (concentrate && fam.membership_count(pts[k]) == 0) a *= 1e-3;
            psi2[k] = a * a;
            total += psi2[k];
        }
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < r; ++i) {
            double mass = 0.0;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const bool inA = fam.in_A(i, pts[k]);
                if (inA) mass += psi2[k];
                const bool inBox = flc::Box{fam.nearest_center(i, pts[k]), L}.contains(pts[k]);
                if (inA == inBox) {
                    std::ostringstream s;
                    s << "complement of A_" << i << " is not the union of boxes (n=" << n << ", r=" << r << ")";
                    o.fail(s.str());
                }
            }
            best = std::min(best, mass);
        }
        for (const auto& p : pts) {
            if (fam.membership_count(p) > n) o.fail("a point lies in more than n of the A_i");
        }
        if (best > double(n) / r * total * (1.0 + 1e-12)) o.fail("mass splitting bound violated");
        ++o.checked;
    }
    return o;
}

/// Lemma: if A ⊆ B ⊆ C then d_H(X, B) <= max(d_H(X, A), d_H(X, C)).
inline Outcome hausdorff_sandwich(int triples, unsigned seed) {
    Outcome o;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> sz(1, 40);
    for (int t = 0; t < triples; ++t) {
        auto draw = [&](int k) {
            std::vector<Complex> v;
            for (int i = 0; i < k; ++i) v.emplace_back(u(rng), u(rng));
            return v;
        };
        auto A = draw(sz(rng));
        auto B = A;
        for (auto z : draw(sz(rng))) B.push_back(z);
        auto C = B;
        for (auto z : draw(sz(rng))) C.push_back(z);
        auto X = draw(sz(rng));
        const double dB = flc::euclidean_hausdorff(X, B);
        const double bound = std::max(flc::euclidean_hausdorff(X, A), flc::euclidean_hausdorff(X, C));
        if (dB > bound + 1e-12) o.fail("sandwich inequality violated");
        if (std::abs(dB - oracle::hausdorff(X, B)) > 1e-12) o.fail("Hausdorff distance disagrees with brute force");
        ++o.checked;
    }
    return o;
}

/// Section Q_{L,lambda,x} of a catalog patch as a dense matrix.
inline Eigen::MatrixXcd dense_section(const flc::OperatorSpec& op, const flc::Patch& p, double patch_scale, double L,
                                      Complex lambda) {
    return Eigen::MatrixXcd(flc::build_uneven_section(op, p, patch_scale, L, lambda).matrix);
}

/// eps_{L2,lambda,x} <= eps_{L1,lambda,x} for L1 <= L2 at a common centre.
inline Outcome monotone_in_L(const std::vector<std::string>& models, int samples, unsigned seed) {
    Outcome o;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-1.0, 5.0), im(-1.5, 1.5), frac(0.0, 1.0);
    for (int t = 0; t < samples; ++t) {
        const auto def = flc::builtin_model(models[t % models.size()]);
        const auto op = flc::make_operator(def);
        const double m = op.require_range();
        const int maxL = def.dimension == 1 ? 14 : 4;
        const double L1 = 1.5 + frac(rng) * (maxL - 3);
        const double L2 = L1 + 0.5 + frac(rng) * 3;
        const auto cat = op.catalog(L2 + m);
        const auto& patch = cat->patches[static_cast<std::size_t>(frac(rng) * cat->size()) % cat->size()];
        const Complex lambda(re(rng), im(rng));
        const double s1 = oracle::smallest_singular_value(dense_section(op, patch, L2 + m, L1, lambda));
        const double s2 = oracle::smallest_singular_value(dense_section(op, patch, L2 + m, L2, lambda));
        if (s2 > s1 + 1e-9) {
            std::ostringstream s;
            s << def.id << ": eps at L=" << L2 << " (" << s2 << ") exceeds eps at L=" << L1 << " (" << s1 << ")";
            o.fail(s.str());
        }
        ++o.checked;
    }
    return o;
}

/// ||(H - lambda) psi|| >= (eps_L sqrt(1 - delta_L) - ||H - lambda|| sqrt(delta_L)) ||psi|| for finitely
/// supported psi, with the action of H computed on a dense section containing supp(H psi).
inline Outcome quasimode_inequality(const std::vector<std::string>& models, int vectors, unsigned seed) {
    Outcome o;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-0.5, 4.5), im(-1.0, 1.0), frac(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    const long N = 60;
    for (int t = 0; t < vectors; ++t) {
        const auto def = flc::builtin_model(models[t % models.size()]);
        const auto op = flc::make_operator(def);
        const double m = op.require_range();
        const double L = 2.0 + std::floor(frac(rng) * 8.0);
        const Complex lambda(re(rng), im(rng));
        const long offset = static_cast<long>(std::floor(frac(rng) * 400.0)) - 200;
        // Section on [offset - 1, offset + 2N + 1]; psi lives on the interior sites.
        const long size = 2 * N + 3;
        Eigen::MatrixXcd H = flc::sample_section(def, size, {offset - 1});
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(size);
        const double k = 2.0 * std::acos(0.0) * frac(rng);
        const double width = 4.0 + 30.0 * frac(rng);
        for (long i = 1; i + 1 < size; ++i) {
            if (t % 2 == 0) {
                psi(i) = Complex(g(rng), g(rng));
            } else {
                // Wave packet: a near-quasimode for spectral lambda.
                const double x = (i - N - 1) / width;
                psi(i) = std::polar(std::exp(-x * x), k * i);
            }
        }
        const double lhs = ((H - lambda * Eigen::MatrixXcd::Identity(size, size)) * psi).norm();
        const auto e = flc::epsilon_L(op, L, lambda, 1e-6);
        const double delta = flc::delta_L(1, L, m);
        const double rhs = flc::gap_bound(e.value.lo, flc::norm_shift_bound(op, lambda), delta) * psi.norm();
        if (lhs < rhs - 1e-9 * psi.norm()) {
            std::ostringstream s;
            s << def.id << ": ||(H-l)psi|| = " << lhs << " < bound " << rhs;
            o.fail(s.str());
        }
        ++o.checked;
    }
    return o;
}

/// ||H - G^m|| <= trim_error, checked on a dense section of H - G^m (a compression, so its norm
/// is a lower bound for the infinite-volume norm).
inline Outcome trim_error_bound(const std::vector<std::string>& models, long size) {
    Outcome o;
    for (const auto& name : models) {
        const auto def = flc::builtin_model(name);
        const auto op = flc::make_operator(def);
        Eigen::MatrixXcd H = flc::sample_section(def, size, {-size / 2});
        for (double m : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            const auto g = flc::trim(op, m);
            Eigen::MatrixXcd B = H;
            for (long i = 0; i < size; ++i)
                for (long j = 0; j < size; ++j)
                    if (std::abs(i - j) <= m) B(i, j) = 0.0;
            const double norm = oracle::operator_norm(B);
            if (norm > g.trim_error * (1.0 + 1e-12)) {
                std::ostringstream s;
                s << name << " m=" << m << ": ||H - G^m|| >= " << norm << " > bound " << g.trim_error;
                o.fail(s.str());
            }
            ++o.checked;
        }
    }
    return o;
}

/// The patch B_L(x) ∩ Γ at a real centre x, cut from a dense section, as (points, matrix).
inline std::pair<flc::PointCloud, flc::SparseMatrix> patch_at(const flc::ModelDefinition& def, const flc::OperatorSpec& op,
                                                              const std::vector<double>& x, double L) {
    const int n = def.dimension;
    std::vector<long> lo(n), count(n);
    for (int d = 0; d < n; ++d) {
        lo[d] = static_cast<long>(std::floor(x[d] - L)) + 1;
        while (!(std::abs(double(lo[d]) - x[d]) < L - flc::kBoundaryTolerance)) ++lo[d];
        long hi = static_cast<long>(std::ceil(x[d] + L)) - 1;
        while (!(std::abs(double(hi) - x[d]) < L - flc::kBoundaryTolerance)) --hi;
        count[d] = hi - lo[d] + 1;
    }
    const long side = *std::max_element(count.begin(), count.end());
    Eigen::MatrixXcd H = flc::sample_section(def, side, lo);
    std::vector<long> idx;
    flc::PointCloud pts(n);
    if (n == 1) {
        for (long i = 0; i < count[0]; ++i) {
            idx.push_back(i);
            double p = double(lo[0] + i);
            pts.push_back(std::span<const double>(&p, 1));
        }
    } else {
        for (long i = 0; i < count[0]; ++i)
            for (long j = 0; j < count[1]; ++j) {
                idx.push_back(i * side + j);
                double p[2] = {double(lo[0] + i), double(lo[1] + j)};
                pts.push_back(p);
            }
    }
    const double hop = op.range() ? *op.range() : std::numeric_limits<double>::infinity();
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) {
            const Complex v = H(idx[a], idx[b]);
            if (v != Complex(0.0) && flc::max_dist(pts[a], pts[b]) <= hop) trip.emplace_back(a, b, v);
        }
    flc::SparseMatrix M(idx.size(), idx.size());
    M.setFromTriplets(trip.begin(), trip.end());
    return {pts, M};
}

/// Every patch at a random real centre matches a catalog entry.
inline Outcome catalog_completeness(const std::string& model, const std::vector<double>& scales, int centers,
                                    unsigned seed) {
    Outcome o;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-500.0, 500.0);
    const auto def = flc::builtin_model(model);
    const auto op = flc::make_operator(def);
    for (double L : scales) {
        const auto cat = op.catalog(L);
        for (int c = 0; c < centers; ++c) {
            std::vector<double> x(def.dimension);
            for (auto& v : x) v = u(rng);
            auto [pts, M] = patch_at(def, op, x, L);
            if (!cat->find_equivalent(pts, M)) {
                std::ostringstream s;
                s << model << " L=" << L << ": patch at x=" << x[0] << " missing from the catalog";
                o.fail(s.str());
            }
            ++o.checked;
        }
    }
    return o;
}

}  // namespace props
