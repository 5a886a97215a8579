#include "flc/spectrum.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <set>

#include "flc/errors.hpp"
#include "flc/lower_norm.hpp"
#include "flc/parallel.hpp"

namespace flc {

namespace {

unsigned workers_for(const EvaluationOptions& o) { return o.deterministic ? 1u : o.workers; }

}  // namespace

SpectrumApprox approx_spectrum(const OperatorSpec& op, double tau, const EvaluationOptions& opts) {
    if (!(tau > 0.0)) throw InputError("approx_spectrum: tau must be positive");
    if (!op.normal()) {
        throw PreconditionError("approx_spectrum: operator '" + op.id() +
                                "' is not declared normal; the Hausdorff guarantee would be void");
    }
    const auto t0 = std::chrono::steady_clock::now();
    LowerNormEngine engine(op);
    const ComplexGrid grid = covering_grid(op.norm_bound(), tau * std::sqrt(2.0) / 4.0);
    const std::size_t n = grid.points.size();

    std::vector<std::optional<PointCertificate>> accepted(n);
    std::vector<double> scale_of(n, 0.0);
    std::vector<long> probes(n, 0);
    parallel_for(n, opts.chunk, workers_for(opts), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Complex lambda = grid.points[i];
            const double L_final = engine.rho_scale(lambda, tau / 4.0);
            // Coarser scales first: hi < tau/2 accepts at any scale. A certified rho > tau/4
            // rejects, since only points with rho <= tau/4 are needed to cover the spectrum.
            bool decided = false;
            for (double L : engine.screening_scales(L_final)) {
                LazyEpsilon lazy = engine.lazy(L, lambda, tau / 40.0);
                scale_of[i] = L;
                if (lazy.min_hi_below(tau / 2.0)) {
                    accepted[i] = PointCertificate{lambda, L, lazy.min_hi()};
                    decided = true;
                } else {
                    decided = gap_exceeds(lazy, op, engine.range(), lambda, tau / 4.0, nullptr);
                }
                probes[i] += lazy.probes();
                if (decided) break;
            }
            if (decided) continue;
            LazyEpsilon lazy = engine.lazy(L_final, lambda, tau / 40.0);
            scale_of[i] = L_final;
            // Strict: ties are excluded.
            if (lazy.min_hi_below(tau / 2.0)) accepted[i] = PointCertificate{lambda, L_final, lazy.min_hi()};
            probes[i] += lazy.probes();
        }
    });

    SpectrumApprox out;
    out.operator_id = op.id();
    out.tau = tau;
    out.hausdorff_radius = tau;
    out.trim_m = engine.range();
    std::set<double> scales;
    for (std::size_t i = 0; i < n; ++i) {
        scales.insert(scale_of[i]);
        out.diagnostics.probes += probes[i];
        if (accepted[i]) {
            out.points.push_back(accepted[i]->lambda);
            out.certificates.push_back(*accepted[i]);
        }
    }
    out.diagnostics.scales.assign(scales.begin(), scales.end());
    out.diagnostics.grid_size = n;
    out.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

SpectrumApprox spectrum_with_error(const OperatorSpec& op, int k, const EvaluationOptions& opts) {
    if (k < 0) throw InputError("spectrum_with_error: k must be >= 0");
    const double half = std::ldexp(1.0, -(k + 1));
    const double m = cutoff_length(op, half);
    TrimmedOperator g = trim(op, m);
    if (g.trim_error > half) {
        throw CertificationError("spectrum_with_error: trim error exceeds 2^-(k+1)");
    }
    SpectrumApprox out = approx_spectrum(g.op, half, opts);
    out.operator_id = op.id();
    out.hausdorff_radius = 2.0 * half;
    out.trim_m = g.m;
    out.trim_error = g.trim_error;
    return out;
}

}  // namespace flc
