#include "flc/pseudospectrum.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "flc/errors.hpp"
#include "flc/lower_norm.hpp"
#include "flc/parallel.hpp"

namespace flc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Decision {
    Region region = Region::U;
    RegionCertificate cert;
    bool demoted = false;
    long probes = 0;
};

template <class Decide>
SRUClassification sweep(double epsilon, double tau, double fixed_L, ComplexGrid grid,
                        const EvaluationOptions& opts, Decide decide) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = grid.points.size();
    std::vector<Decision> d(n);
    parallel_for(n, opts.chunk, opts.deterministic ? 1u : opts.workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) d[i] = decide(grid.points[i]);
    });

    SRUClassification c;
    c.epsilon = epsilon;
    c.tau = tau;
    c.fixed_L = fixed_L;
    c.labels.resize(n);
    c.certificates.resize(n);
    std::set<double> scales;
    for (std::size_t i = 0; i < n; ++i) {
        c.labels[i] = d[i].region;
        c.certificates[i] = d[i].cert;
        scales.insert(d[i].cert.L);
        c.diagnostics.probes += d[i].probes;
        if (d[i].demoted) ++c.demoted;
        switch (d[i].region) {
            case Region::S: c.S.push_back(i); break;
            case Region::U: c.U.push_back(i); break;
            case Region::R: c.R.push_back(i); break;
        }
    }
    c.grid = std::move(grid);
    c.diagnostics.scales.assign(scales.begin(), scales.end());
    c.diagnostics.grid_size = n;
    c.diagnostics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

void check_positive(double epsilon, double tau, const char* what) {
    if (!(epsilon > 0.0)) throw InputError(std::string(what) + ": epsilon must be positive");
    if (!(tau > 0.0)) throw InputError(std::string(what) + ": tau must be positive");
}

}  // namespace

std::vector<Complex> SRUClassification::points_of(Region r) const {
    const auto& idx = r == Region::S ? S : (r == Region::U ? U : R);
    std::vector<Complex> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(grid.points[i]);
    return out;
}

SRUClassification classify_grid(const OperatorSpec& op, double epsilon, double tau, const EvaluationOptions& opts) {
    check_positive(epsilon, tau, "classify_grid");
    LowerNormEngine engine(op);
    ComplexGrid grid = covering_grid(op.norm_bound() + epsilon, tau * std::sqrt(2.0));
    return sweep(epsilon, tau, 0.0, std::move(grid), opts, [&](Complex lambda) {
        Decision d;
        const double L_final = engine.rho_scale(lambda, tau);
        // Coarser scales first. An early S point has rho < epsilon - tau. An early R point has
        // rho > epsilon + tau, so it is never the grid point nearest to a point of the pseudospectrum.
        for (double L : engine.screening_scales(L_final)) {
            LazyEpsilon lazy = engine.lazy(L, lambda, tau / 10.0);
            d.cert = RegionCertificate{L, kNaN, kNaN};
            const bool s = lazy.min_hi_below(epsilon - tau);
            const bool r = !s && gap_exceeds(lazy, op, engine.range(), lambda, epsilon + tau, &d.cert.gap_lower);
            d.probes += lazy.probes();
            if (s) {
                d.region = Region::S;
                d.cert.upper = lazy.min_hi();
                return d;
            }
            if (r) {
                d.region = Region::R;
                return d;
            }
        }
        LazyEpsilon lazy = engine.lazy(L_final, lambda, tau / 10.0);
        d.cert = RegionCertificate{L_final, kNaN, kNaN};
        if (lazy.min_hi_below(epsilon - tau)) {
            d.region = Region::S;
            d.cert.upper = lazy.min_hi();
        } else if (lazy.min_hi_above(epsilon + 2.0 * tau)) {
            if (gap_exceeds(lazy, op, engine.range(), lambda, epsilon, &d.cert.gap_lower)) {
                d.region = Region::R;
            } else {
                d.demoted = true;
            }
        }
        d.probes += lazy.probes();
        return d;
    });
}

SRUClassification classify_at_scale(const OperatorSpec& op, double epsilon, double tau, double L,
                                    const EvaluationOptions& opts) {
    check_positive(epsilon, tau, "classify_at_scale");
    LowerNormEngine engine(op);
    if (!(L > engine.range())) throw InputError("classify_at_scale: L must exceed the range");
    ComplexGrid grid = covering_grid(op.norm_bound() + epsilon, tau * std::sqrt(2.0));
    return sweep(epsilon, tau, L, std::move(grid), opts, [&](Complex lambda) {
        Decision d;
        LazyEpsilon lazy = engine.lazy(L, lambda, tau / 10.0);
        d.cert = RegionCertificate{L, kNaN, kNaN};
        if (lazy.min_hi_below(epsilon)) {
            d.region = Region::S;
            d.cert.upper = lazy.min_hi();
        } else if (gap_exceeds(lazy, op, engine.range(), lambda, epsilon, &d.cert.gap_lower)) {
            d.region = Region::R;
        }
        d.probes = lazy.probes();
        return d;
    });
}

bool sru_condition(const SRUClassification& c, double delta, double* u_to_s) {
    double dist = 0.0;
    if (!c.U.empty()) {
        dist = c.S.empty() ? std::numeric_limits<double>::infinity()
                           : directed_euclidean_hausdorff(c.points_of(Region::U), c.points_of(Region::S));
    }
    if (u_to_s) *u_to_s = dist;
    return dist < delta - c.tau;
}

PseudospectrumApprox approx_pseudospectrum(const OperatorSpec& op, double epsilon, double delta,
                                           const EvaluationOptions& opts, int max_iterations) {
    check_positive(epsilon, delta, "approx_pseudospectrum");
    if (max_iterations < 1) throw InputError("approx_pseudospectrum: iteration cap must be >= 1");
    PseudospectrumApprox out;
    out.operator_id = op.id();
    out.epsilon = epsilon;
    out.trim_m = op.require_range();
    for (int j = 1; j <= max_iterations; ++j) {
        const double tau = std::ldexp(delta, -j);
        SRUClassification c = classify_grid(op, epsilon, tau, opts);
        IterationTrace t{j, tau, c.S.size(), c.U.size(), c.R.size(), 0.0, false};
        t.accepted = sru_condition(c, delta, &t.u_to_s);
        out.trace.push_back(t);
        if (t.accepted) {
            out.points = c.points_of(Region::S);
            out.hausdorff_radius = delta;
            out.final_classification = std::move(c);
            return out;
        }
    }
    throw IterationCapError("approx_pseudospectrum: no termination within " + std::to_string(max_iterations) +
                                " refinements of tau (delta too small for the budget, or a modelling error)",
                            max_iterations);
}

PseudospectrumApprox pseudospectrum_short_range(const OperatorSpec& op, double epsilon, double delta,
                                                const EvaluationOptions& opts, int max_iterations) {
    check_positive(epsilon, delta, "pseudospectrum_short_range");
    if (!op.range() && !op.decay()) {
        throw PreconditionError("pseudospectrum_short_range: operator has neither a range nor decay data");
    }
    int iterations = 0;
    for (int i = 0; iterations < max_iterations; ++i) {
        const double tau = std::ldexp(1.0, -i);
        if (tau >= epsilon) continue;
        ++iterations;
        TrimmedOperator g = trim(op, cutoff_length(op, tau));
        if (g.trim_error > tau) throw CertificationError("pseudospectrum_short_range: trim error exceeds tau");
        PseudospectrumApprox a = approx_pseudospectrum(g.op, epsilon - tau, delta / 6.0, opts, max_iterations);
        PseudospectrumApprox b = approx_pseudospectrum(g.op, epsilon + tau, delta / 6.0, opts, max_iterations);
        double d = 0.0;
        if (a.points.empty() != b.points.empty()) {
            d = std::numeric_limits<double>::infinity();
        } else if (!a.points.empty()) {
            d = euclidean_hausdorff(a.points, b.points);
        }
        if (d <= delta / 2.0) {
            a.operator_id = op.id();
            a.epsilon = epsilon;
            a.hausdorff_radius = delta;
            a.trim_m = g.m;
            a.trim_error = g.trim_error;
            return a;
        }
    }
    throw IterationCapError("pseudospectrum_short_range: no termination within " + std::to_string(max_iterations) +
                                " trimming steps",
                            max_iterations);
}

std::string classification_pgm(const SRUClassification& c) {
    if (c.grid.points.empty()) throw InputError("render_classification: empty grid");
    if (c.labels.size() != c.grid.points.size()) throw InputError("render_classification: label count mismatch");
    const std::size_t side = c.grid.side();
    std::string img(side * side, static_cast<char>(255));
    for (std::size_t k = 0; k < c.grid.points.size(); ++k) {
        // Positions come from the coordinates, so partial grids render with white gaps.
        const long re = std::lround(c.grid.points[k].real() / c.grid.spacing);
        const long im = std::lround(c.grid.points[k].imag() / c.grid.spacing);
        if (std::labs(re) > c.grid.half_extent || std::labs(im) > c.grid.half_extent) {
            throw InputError("render_classification: point outside the grid extent");
        }
        const std::size_t col = static_cast<std::size_t>(re + c.grid.half_extent);
        const std::size_t row = static_cast<std::size_t>(c.grid.half_extent - im);
        unsigned char v = c.labels[k] == Region::S ? 0 : (c.labels[k] == Region::U ? 128 : 255);
        img[row * side + col] = static_cast<char>(v);
    }
    return "P5\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n" + img;
}

void render_classification(const SRUClassification& c, const std::string& path) {
    const std::string data = classification_pgm(c);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write image '" + path + "'");
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f) throw InputError("cannot write image '" + path + "'");
}

}  // namespace flc
