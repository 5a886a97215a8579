#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "flc/operator.hpp"
#include "flc/uneven_section.hpp"

namespace flc {

/// Catalog minimum of the smallest singular values of the uneven sections at scale L.
/// value.lo / value.hi are the componentwise minima of the per-patch intervals.
struct EpsilonL {
    double L = 0.0;
    Complex lambda;
    CertifiedValue value;
    std::size_t argmin_patch = 0;  // patch attaining the minimal hi
};

/// n / floor(L/m). Requires L >= m.
double delta_L(int dimension, double L, double m);

/// eps * sqrt(1 - delta) - M_shift * sqrt(delta), the lower bound for rho at scale L.
double gap_bound(double eps, double M_shift, double delta);

/// gap_bound(e.value.lo, M_shift, delta_L(n, e.L, m)).
double gap_lower_bound(const EpsilonL& e, double M_shift, int dimension, double m);

/// eps(1 - sqrt(1 - delta)) + M sqrt(delta): the error allowance at scale L with delta_L < delta.
double scale_error(double eps, double M, double delta);

/// max(L0, m * ceil(n / delta)) + m, a scale whose delta_L is below delta.
double scale_for_delta(int dimension, double m, double L0, double delta);

/// Largest delta in {1/2, 1/4, ...} with scale_error(eps0, M, delta) < tau.
double choose_delta(double eps0, double M, double tau);

struct ScaleChoice {
    double L = 0.0;
    double delta = 0.0;
    double eps0 = 0.0;  // upper end of the catalog minimum at L0 = m + 1
    double M_shift = 0.0;
};

/// rho-tilde: value = hi end of the catalog minimum at the chosen scale.
/// |value - rho| <= tau.
struct RhoTilde {
    Complex lambda;
    double tau = 0.0;
    double L = 0.0;
    double value = 0.0;
    CertifiedValue epsilon;
};

/// Prepared uneven sections for every non-dominated catalog patch at one scale.
struct SectionSet {
    double L = 0.0;
    double m = 0.0;
    std::vector<PreparedSection> sections;
};

class LazyEpsilon;

/// Certified lower-norm estimates for one finite-range operator. Thread-safe; prepared
/// sections are memoised per scale.
class LowerNormEngine {
public:
    explicit LowerNormEngine(OperatorSpec op);

    const OperatorSpec& op() const { return op_; }
    double range() const { return m_; }

    std::shared_ptr<const SectionSet> sections(double L) const;

    EpsilonL epsilon(double L, Complex lambda, double width) const;
    /// Scale choice for an accuracy budget tau.
    ScaleChoice choose_scale(Complex lambda, double tau) const;
    RhoTilde rho_tilde(Complex lambda, double tau) const;
    /// Lazy view of the catalog minimum at scale L, refined to `width` only where needed.
    LazyEpsilon lazy(double L, Complex lambda, double width) const;
    /// Scale used by rho-tilde with budget tau.
    double rho_scale(Complex lambda, double tau) const;
    /// Lazy view at the scale chosen for rho-tilde with budget tau.
    LazyEpsilon lazy_rho(Complex lambda, double tau) const;
    /// Scales below L_final at which a point may be decided early: those with
    /// delta_L below 1/2, 1/8, 1/32, ..., ascending.
    std::vector<double> screening_scales(double L_final) const;

private:
    OperatorSpec op_;
    double m_;
    mutable std::mutex mu_;
    mutable std::map<double, std::shared_ptr<const SectionSet>> cache_;
};

/// Questions about the catalog minima after refinement of every patch interval to `width`,
/// answered with as few Cholesky probes as the answer allows. Any answer is the one some
/// full refinement would give, so certificates carry over unchanged.
class LazyEpsilon {
public:
    LazyEpsilon(std::shared_ptr<const SectionSet> set, Complex lambda, double width);

    double L() const { return set_->L; }
    double width() const { return width_; }

    /// min_p hi_p < theta.
    bool min_hi_below(double theta);
    /// min_p hi_p > theta.
    bool min_hi_above(double theta);
    /// min_p lo_p > theta.
    bool min_lo_above(double theta);

    /// Current componentwise minima (valid certified bounds at any time).
    double min_lo() const;
    double min_hi() const;
    std::size_t argmin_hi() const;
    /// Refines every patch to width and returns the result.
    EpsilonL resolve();
    int probes() const;

private:
    SingularValueSearch& search(std::size_t p);
    void probe_toward(std::size_t p, double theta, bool below_first);

    std::shared_ptr<const SectionSet> set_;
    Complex lambda_;
    double width_;
    std::vector<std::unique_ptr<SingularValueSearch>> searches_;
};

/// Decides gap_bound(min lo, M + |lambda|, delta_L) > theta on a lazy view of `op` (range m).
/// On success the bound is stored in *gap_lower.
bool gap_exceeds(LazyEpsilon& lazy, const OperatorSpec& op, double m, Complex lambda, double theta,
                 double* gap_lower);

/// Free-function forms.
EpsilonL epsilon_L(const OperatorSpec& op, double L, Complex lambda, double width);
double choose_L(const OperatorSpec& op, Complex lambda, double tau);
RhoTilde rho_tilde(const OperatorSpec& op, Complex lambda, double tau);

}  // namespace flc
