#pragma once

#include <string>
#include <vector>

#include "flc/operator.hpp"

namespace flc {

struct EvaluationOptions {
    unsigned workers = 0;      // 0: default_workers()
    bool deterministic = false;  // forces one worker
    std::size_t chunk = 256;
};

/// Why an output point was accepted: the catalog minimum at scale L has hi < threshold.
struct PointCertificate {
    Complex lambda;
    double L = 0.0;
    double upper = 0.0;  // certified upper bound on the catalog minimum at L
};

struct SpectrumDiagnostics {
    std::vector<double> scales;  // distinct L values used, ascending
    std::size_t grid_size = 0;
    long probes = 0;
    double wall_seconds = 0.0;
};

/// d_H(points, Spec(H)) <= hausdorff_radius, given catalog completeness and normality.
struct SpectrumApprox {
    std::string operator_id;
    double tau = 0.0;
    double hausdorff_radius = 0.0;
    double trim_m = 0.0;      // range of the operator actually evaluated
    double trim_error = 0.0;  // ||H - G^m|| bound paid out of the radius
    std::vector<Complex> points;
    std::vector<PointCertificate> certificates;
    SpectrumDiagnostics diagnostics;
};

/// Keeps the points lambda of the covering grid of [-M, M]^2 with spacing tau*sqrt(2)/4
/// whose rho-tilde(lambda, tau/4) is below tau/2. Radius tau.
/// Coarser screening scales may accept a point earlier (upper end below tau/2) or reject it
/// (certified rho > tau/4); neither changes the radius.
/// Throws PreconditionError unless the operator is declared normal and has finite range.
SpectrumApprox approx_spectrum(const OperatorSpec& op, double tau, const EvaluationOptions& opts = {});

/// Trims at cutoff_length(op, 2^-(k+1)) and runs approx_spectrum at tau = 2^-(k+1).
/// Radius 2^-k.
SpectrumApprox spectrum_with_error(const OperatorSpec& op, int k, const EvaluationOptions& opts = {});

}  // namespace flc
