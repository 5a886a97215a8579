#include "flc/uneven_section.hpp"

#include <algorithm>
#include <cmath>

#include "flc/errors.hpp"

namespace flc {

namespace {

struct SectionIndex {
    std::vector<Eigen::Index> rows;  // patch indices
    std::vector<Eigen::Index> cols;
    std::vector<Eigen::Index> row_of;  // patch index -> row position or -1
    std::vector<Eigen::Index> col_of;
};

SectionIndex select_section(const Patch& patch, double L, double m) {
    SectionIndex s;
    const auto n = static_cast<Eigen::Index>(patch.points.size());
    s.row_of.assign(n, -1);
    s.col_of.assign(n, -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        double d = max_dist(patch.points[i], patch.center.coords);
        if (d < L + m - kBoundaryTolerance) {
            s.row_of[i] = static_cast<Eigen::Index>(s.rows.size());
            s.rows.push_back(i);
        }
        if (d < L - kBoundaryTolerance) {
            s.col_of[i] = static_cast<Eigen::Index>(s.cols.size());
            s.cols.push_back(i);
        }
    }
    if (s.cols.empty()) throw PreconditionError("uneven section: no patch point within L of the centre");
    return s;
}

// Q0 = H restricted to rows x cols, shifted by -lambda on the embedded diagonal.
SparseMatrix section_matrix(const Patch& patch, const SectionIndex& s, Complex lambda) {
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t c = 0; c < s.cols.size(); ++c) {
        const Eigen::Index pc = s.cols[c];
        for (SparseMatrix::InnerIterator it(patch.matrix, pc); it; ++it) {
            Eigen::Index r = s.row_of[it.row()];
            if (r >= 0) trip.emplace_back(r, static_cast<Eigen::Index>(c), it.value());
        }
        if (lambda != Complex(0.0)) trip.emplace_back(s.row_of[pc], static_cast<Eigen::Index>(c), -lambda);
    }
    SparseMatrix q(static_cast<Eigen::Index>(s.rows.size()), static_cast<Eigen::Index>(s.cols.size()));
    q.setFromTriplets(trip.begin(), trip.end());
    return q;
}

std::size_t lower_bandwidth(const SparseMatrix& m) {
    std::size_t b = 0;
    for (int c = 0; c < m.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
            b = std::max<std::size_t>(b, static_cast<std::size_t>(std::abs(it.row() - it.col())));
        }
    }
    return b;
}

bool all_real(const SparseMatrix& m) {
    for (int c = 0; c < m.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
            if (it.value().imag() != 0.0) return false;
        }
    }
    return true;
}

template <class S>
HermitianBand<S> band_from_sparse(const SparseMatrix& g, std::size_t b) {
    HermitianBand<S> out(static_cast<std::size_t>(g.rows()), b);
    for (int c = 0; c < g.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(g, c); it; ++it) {
            if (it.row() < it.col()) continue;
            auto k = static_cast<std::size_t>(it.row() - it.col());
            if constexpr (std::is_floating_point_v<S>) {
                out.at(static_cast<std::size_t>(it.row()), k) = it.value().real();
            } else {
                out.at(static_cast<std::size_t>(it.row()), k) = it.value();
            }
        }
    }
    return out;
}

SingularValueSearch search_for(const SparseMatrix& q) {
    if (q.cols() == 0) throw InputError("smallest singular value: section has no columns");
    SparseMatrix g = SparseMatrix(q.adjoint()) * q;
    g.prune(Complex(0.0));
    const std::size_t b = lower_bandwidth(g);
    if (all_real(g)) return SingularValueSearch(band_from_sparse<double>(g, b));
    return SingularValueSearch(band_from_sparse<Complex>(g, b));
}

}  // namespace

UnevenSection build_uneven_section(const OperatorSpec& op, const Patch& patch, double patch_scale,
                                   double L, Complex lambda) {
    const double m = op.require_range();
    if (!(L > 0.0)) throw InputError("uneven section: L must be positive");
    if (patch_scale < L + m - kBoundaryTolerance) {
        throw PreconditionError("uneven section: patch scale is smaller than L + m");
    }
    if (static_cast<int>(patch.center.dim()) != patch.points.dimension()) {
        throw InputError("uneven section: patch centre has the wrong dimension");
    }
    SectionIndex s = select_section(patch, L, m);
    UnevenSection q;
    q.rows = PointCloud(patch.points.dimension());
    q.cols = PointCloud(patch.points.dimension());
    for (auto i : s.rows) q.rows.push_back(patch.points[i]);
    for (auto i : s.cols) q.cols.push_back(patch.points[i]);
    q.matrix = section_matrix(patch, s, lambda);
    q.lambda = lambda;
    q.L = L;
    q.m = m;
    q.center = patch.center;
    return q;
}

bool is_positive_definite(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw InputError("is_positive_definite: matrix must be square");
    const auto n = static_cast<std::size_t>(a.rows());
    if (n == 0) return true;
    const double scale = 1.0 + a.cwiseAbs().maxCoeff();
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw InputError("is_positive_definite: matrix is not Hermitian");
    }
    HermitianBand<Complex> band(n, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) band.at(i, i - j) = a(i, j);
    }
    std::vector<Complex> factor;
    return band.cholesky(0.0, pivot_floor(n, band.max_diagonal()), factor);
}

SingularValueSearch::SingularValueSearch(HermitianBand<double> gram) : gram_(std::move(gram)) { init(); }
SingularValueSearch::SingularValueSearch(HermitianBand<Complex> gram) : gram_(std::move(gram)) { init(); }

void SingularValueSearch::init() {
    std::visit(
        [&](const auto& g) {
            if (g.size() == 0) throw InputError("smallest singular value: empty Gram matrix");
            max_diag_ = g.max_diagonal();
            // Gram diagonal entries are squared column norms; rounding is a few ulps of max_diag.
            double mind = std::max(0.0, g.min_diagonal());
            double slack = 8.0 * std::numeric_limits<double>::epsilon() * max_diag_;
            hi_ = std::sqrt(mind + slack) * (1.0 + 1e-12);
        },
        gram_);
    lo_ = 0.0;
}

double SingularValueSearch::floor_at(double t) const {
    const std::size_t n = std::visit([](const auto& g) { return g.size(); }, gram_);
    return pivot_floor(n, std::max(max_diag_, t * t));
}

bool SingularValueSearch::probe(double t) {
    if (!(t > 0.0)) return true;
    const double t2 = t * t;
    bool pd = std::visit(
        [&](const auto& g) {
            const double floor = pivot_floor(g.size(), std::max(max_diag_, t2));
            bool ok;
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, HermitianBand<double>>) {
                ok = g.cholesky(t2, floor, work_real_);
            } else {
                ok = g.cholesky(t2, floor, work_complex_);
            }
            if (ok) {
                lo_ = std::max(lo_, std::sqrt(std::max(0.0, t2 - floor)));
            } else {
                hi_ = std::min(hi_, std::sqrt(t2 + 2.0 * floor));
            }
            return ok;
        },
        gram_);
    ++probes_;
    if (lo_ > hi_) lo_ = hi_;
    return pd;
}

void SingularValueSearch::refine(double width) {
    for (int iter = 0; iter < 200 && gap() > width; ++iter) {
        const double before = gap();
        probe(0.5 * (lo_ + hi_));
        if (!(gap() < before)) break;
    }
}

CertifiedValue SingularValueSearch::result(double width, std::string provenance) const {
    return CertifiedValue{lo_, hi_, width, std::move(provenance)};
}

Eigen::VectorXcd SingularValueSearch::right_singular_vector(int iterations) const {
    return std::visit(
        [&](const auto& g) -> Eigen::VectorXcd {
            using S = std::decay_t<decltype(g.at(0, 0))>;
            const std::size_t n = g.size();
            std::vector<S> factor;
            double spread = std::max(hi_ * hi_ - lo_ * lo_, 1e-14 * std::max(1.0, max_diag_));
            double shift = lo_ * lo_ - 0.01 * spread;
            for (int k = 0; k < 60; ++k) {
                if (g.cholesky(shift, 0.0, factor)) break;
                spread *= 4.0;
                shift = lo_ * lo_ - spread;
            }
            std::vector<Complex> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = Complex(1.0 + 0.25 * std::sin(1.7 * i + 0.3), 0.0);
            for (int it = 0; it < iterations; ++it) {
                if constexpr (std::is_floating_point_v<S>) {
                    std::vector<double> re(n), im(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        re[i] = x[i].real();
                        im[i] = x[i].imag();
                    }
                    g.solve(factor, re);
                    g.solve(factor, im);
                    for (std::size_t i = 0; i < n; ++i) x[i] = Complex(re[i], im[i]);
                } else {
                    g.solve(factor, x);
                }
                double nrm = 0.0;
                for (auto v : x) nrm += std::norm(v);
                nrm = std::sqrt(nrm);
                for (auto& v : x) v /= nrm;
            }
            Eigen::VectorXcd out(static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = x[i];
            return out;
        },
        gram_);
}

CertifiedValue smallest_singular_interval(const UnevenSection& q, double width) {
    if (!(width > 0.0)) throw InputError("smallest singular value: width must be positive");
    for (int c = 0; c < q.matrix.outerSize(); ++c) {
        bool zero = true;
        for (SparseMatrix::InnerIterator it(q.matrix, c); it && zero; ++it) zero = it.value() == Complex(0.0);
        if (zero) return CertifiedValue{0.0, 0.0, width, "zero-column"};
    }
    SingularValueSearch s = search_for(q.matrix);
    s.refine(width);
    return s.result(width, "cholesky-bisection");
}

Eigen::VectorXcd smallest_right_singular_vector(const UnevenSection& q, double width) {
    SingularValueSearch s = search_for(q.matrix);
    s.refine(width);
    return s.right_singular_vector();
}

PreparedSection::PreparedSection(const Patch& patch, double L, double m) : patch_id_(patch.id) {
    SectionIndex s = select_section(patch, L, m);
    SparseMatrix q0 = section_matrix(patch, s, Complex(0.0));
    SparseMatrix g0 = SparseMatrix(q0.adjoint()) * q0;
    g0.prune(Complex(0.0));
    // A = the column block of H: rows of q0 that are themselves columns.
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t c = 0; c < s.cols.size(); ++c) {
        for (SparseMatrix::InnerIterator it(patch.matrix, s.cols[c]); it; ++it) {
            Eigen::Index r = s.col_of[it.row()];
            if (r >= 0) trip.emplace_back(r, static_cast<Eigen::Index>(c), it.value());
        }
    }
    n_ = s.cols.size();
    SparseMatrix a(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    a.setFromTriplets(trip.begin(), trip.end());
    b_ = std::max(lower_bandwidth(g0), lower_bandwidth(a));
    const std::size_t w = b_ + 1;
    g0_.assign(n_ * w, Complex(0.0));
    a_lower_.assign(n_ * w, Complex(0.0));
    a_upper_.assign(n_ * w, Complex(0.0));
    for (int c = 0; c < g0.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(g0, c); it; ++it) {
            if (it.row() >= it.col()) g0_[it.row() * w + (it.row() - it.col())] = it.value();
        }
    }
    for (int c = 0; c < a.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
            if (it.row() >= it.col()) {
                a_lower_[it.row() * w + (it.row() - it.col())] = it.value();
            } else {
                a_upper_[it.col() * w + (it.col() - it.row())] = it.value();
            }
        }
    }
    // Diagonal of A sits in a_lower_; mirror it so a_upper_(i,0) = A(i,i) too.
    for (std::size_t i = 0; i < n_; ++i) a_upper_[i * w] = a_lower_[i * w];
    real_ = all_real(g0) && all_real(a);
    for (std::size_t i = 0; real_ && i < n_ * w; ++i) real_ = (a_lower_[i] == a_upper_[i]);
}

SingularValueSearch PreparedSection::search(Complex lambda) const {
    const std::size_t w = b_ + 1;
    const double lam2 = std::norm(lambda);
    if (real_) {
        const double two_re = 2.0 * lambda.real();
        HermitianBand<double> g(n_, b_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k <= b_ && k <= i; ++k) {
                double v = g0_[i * w + k].real() - two_re * a_lower_[i * w + k].real();
                if (k == 0) v += lam2;
                g.at(i, k) = v;
            }
        }
        return SingularValueSearch(std::move(g));
    }
    const Complex lam_bar = std::conj(lambda);
    HermitianBand<Complex> g(n_, b_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k <= b_ && k <= i; ++k) {
            Complex v = g0_[i * w + k] - lambda * std::conj(a_upper_[i * w + k]) - lam_bar * a_lower_[i * w + k];
            if (k == 0) v = Complex(v.real() + lam2, 0.0);
            g.at(i, k) = v;
        }
    }
    return SingularValueSearch(std::move(g));
}

}  // namespace flc
