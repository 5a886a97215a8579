#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "flc/banded.hpp"
#include "flc/operator.hpp"

namespace flc {

/// lo <= true value <= hi. `width` is the width that was requested.
struct CertifiedValue {
    double lo = 0.0;
    double hi = 0.0;
    double width = 0.0;
    std::string provenance;

    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Q = 1_{B_{L+m}(x)} (H - lambda) 1_{B_L(x)}: rows are the patch points within L+m of the
/// centre, columns those within L.
struct UnevenSection {
    PointCloud rows;
    PointCloud cols;
    SparseMatrix matrix;  // rows x cols
    Complex lambda;
    double L = 0.0;
    double m = 0.0;
    Point center;
};

/// Requires a finite-range operator and a patch taken at scale >= L + m.
UnevenSection build_uneven_section(const OperatorSpec& op, const Patch& patch, double patch_scale,
                                   double L, Complex lambda);

/// Dense Hermitian positive-definiteness by Cholesky with the dimension-scaled pivot floor.
/// Throws InputError for non-square or visibly non-Hermitian input.
bool is_positive_definite(const Eigen::MatrixXcd& a);

/// Bisection state for the smallest singular value of one Gram matrix Q*Q.
/// A probe at t runs Cholesky on Q*Q - t^2 I: success raises lo, failure lowers hi.
/// The pivot floor is folded into both ends, so lo/hi are only ever moved by a probe,
/// apart from the starting hi = smallest column norm (an exact upper bound for s_1).
class SingularValueSearch {
public:
    explicit SingularValueSearch(HermitianBand<double> gram);
    explicit SingularValueSearch(HermitianBand<Complex> gram);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double gap() const { return hi_ - lo_; }
    int probes() const { return probes_; }
    /// Pivot floor used by a probe at t (folded into lo/hi after that probe).
    double floor_at(double t) const;

    /// Returns true when Q*Q - t^2 I is positive definite (so t < s_1).
    bool probe(double t);
    /// Bisects until hi - lo <= width (or no further progress is possible).
    void refine(double width);
    CertifiedValue result(double width, std::string provenance) const;

    /// Inverse iteration on the Gram matrix, shifted just below lo. Unit norm.
    Eigen::VectorXcd right_singular_vector(int iterations = 60) const;

private:
    void init();
    std::variant<HermitianBand<double>, HermitianBand<Complex>> gram_;
    std::vector<double> work_real_;
    std::vector<Complex> work_complex_;
    double max_diag_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
    int probes_ = 0;
};

/// Certified interval of width <= `width` around the smallest singular value of Q.
CertifiedValue smallest_singular_interval(const UnevenSection& q, double width);

/// Right singular vector for the smallest singular value (unit norm, column order of q.cols).
Eigen::VectorXcd smallest_right_singular_vector(const UnevenSection& q, double width);

/// Lambda-independent data for the uneven sections of one patch:
/// Gram(lambda) = G0 - lambda A^* - conj(lambda) A + |lambda|^2 I, where G0 = Q0^* Q0,
/// Q0 is the section of H itself and A is its column-by-column block.
class PreparedSection {
public:
    PreparedSection(const Patch& patch, double L, double m);

    std::size_t patch_id() const { return patch_id_; }
    std::size_t columns() const { return n_; }
    std::size_t bandwidth() const { return b_; }
    /// True when the Gram matrix is real for every lambda (G0 real, A real symmetric).
    bool real_gram() const { return real_; }

    SingularValueSearch search(Complex lambda) const;

private:
    std::size_t patch_id_ = 0;
    std::size_t n_ = 0;
    std::size_t b_ = 0;
    bool real_ = false;
    std::vector<Complex> g0_;       // G0(i, i-k)
    std::vector<Complex> a_lower_;  // A(i, i-k)
    std::vector<Complex> a_upper_;  // A(i-k, i)
};

}  // namespace flc
