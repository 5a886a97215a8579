#pragma once

#include <string>
#include <vector>

#include "flc/operator.hpp"
#include "flc/spectrum.hpp"

namespace flc {

enum class Region : unsigned char { S, U, R };

/// Per grid point: the scale used and the bound that decided the label.
/// S: upper < threshold; R: gap_lower > epsilon. Unused bounds are NaN.
struct RegionCertificate {
    double L = 0.0;
    double upper = 0.0;      // certified upper bound on the catalog minimum at L
    double gap_lower = 0.0;  // certified lower bound on rho (R points only)
};

/// S ∪ U ∪ R partitions the grid.
struct SRUClassification {
    double epsilon = 0.0;
    double tau = 0.0;
    double fixed_L = 0.0;  // 0 when the scale follows the rho-tilde budget
    ComplexGrid grid;
    std::vector<Region> labels;
    std::vector<RegionCertificate> certificates;
    std::vector<std::size_t> S, U, R;
    /// Points whose rho-tilde exceeded epsilon + 2 tau but whose gap bound did not reach
    /// epsilon; they are kept in U.
    std::size_t demoted = 0;
    SpectrumDiagnostics diagnostics;

    std::vector<Complex> points_of(Region r) const;
};

/// Grid tau*sqrt(2) Z^2 covering [-(M+eps), M+eps]^2, labelled with rho-tilde(., tau):
/// S when below eps - tau, R when above eps + 2 tau (and the gap bound exceeds eps), U otherwise.
/// Coarser screening scales decide a point early when its upper end is below eps - tau (S) or
/// its gap bound exceeds eps + tau (R).
SRUClassification classify_grid(const OperatorSpec& op, double epsilon, double tau,
                                const EvaluationOptions& opts = {});

/// One fixed scale L on the same grid, catalog minima refined to tau/10 where needed:
/// S when hi < eps (so rho < eps), R when the gap bound at L exceeds eps, U otherwise.
SRUClassification classify_at_scale(const OperatorSpec& op, double epsilon, double tau, double L,
                                    const EvaluationOptions& opts = {});

struct IterationTrace {
    int j = 0;
    double tau = 0.0;
    std::size_t s = 0, u = 0, r = 0;
    double u_to_s = 0.0;  // max over U of the distance to S (infinity if S is empty)
    bool accepted = false;
};

/// d_H(points, Spec_eps(H)) < hausdorff_radius on termination.
struct PseudospectrumApprox {
    std::string operator_id;
    double epsilon = 0.0;
    double hausdorff_radius = 0.0;
    std::vector<Complex> points;
    std::vector<IterationTrace> trace;
    SRUClassification final_classification;
    double trim_m = 0.0;
    double trim_error = 0.0;
};

/// True when every U point lies within delta - tau (Euclidean, strict) of S.
bool sru_condition(const SRUClassification& c, double delta, double* u_to_s = nullptr);

/// tau = 2^-j delta for j = 1, 2, ... until sru_condition holds; returns S with radius delta.
/// Throws IterationCapError after max_iterations.
PseudospectrumApprox approx_pseudospectrum(const OperatorSpec& op, double epsilon, double delta,
                                           const EvaluationOptions& opts = {}, int max_iterations = 20);

/// Trims at tau = 1, 1/2, ... (skipping tau >= eps), approximates Spec_{eps -/+ tau}(G^m) to
/// delta/6 and stops once they are within delta/2. Radius delta.
PseudospectrumApprox pseudospectrum_short_range(const OperatorSpec& op, double epsilon, double delta,
                                                const EvaluationOptions& opts = {}, int max_iterations = 20);

/// Binary PGM, one pixel per grid point, imaginary axis upward: S black, U gray, R white.
/// Throws InputError when the file cannot be written.
void render_classification(const SRUClassification& c, const std::string& path);
std::string classification_pgm(const SRUClassification& c);

}  // namespace flc
