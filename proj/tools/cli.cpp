#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "flc/errors.hpp"
#include "flc/io.hpp"
#include "flc/lower_norm.hpp"
#include "flc/models.hpp"
#include "flc/pseudospectrum.hpp"
#include "flc/spectrum.hpp"

namespace flc::cli {

namespace {

struct Config {
    std::string command;
    std::string model;
    std::optional<int> k;
    std::optional<double> delta;
    std::optional<double> epsilon;
    std::optional<std::string> lambda;
    std::optional<double> tau;
    std::optional<double> L;
    std::string out_path;
    std::string image_path;
    unsigned workers = 0;
    int max_iter = 20;
    bool deterministic = false;
};

Complex parse_lambda(const std::string& s) {
    std::stringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw InputError("--lambda: expected <re> or <re>,<im>");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) throw InputError("--lambda: expected <re> or <re>,<im>");
    }
    if (in >> comma) throw InputError("--lambda: trailing characters");
    return {re, im};
}

template <class T>
T require(const std::optional<T>& v, const char* flag) {
    if (!v) throw InputError(std::string(flag) + " is required for this command");
    return *v;
}

void require_positive(double v, const char* flag) {
    if (!(v > 0.0)) throw InputError(std::string(flag) + " must be positive");
}

void emit(const Config& c, const ResultFile& r, std::ostream& out) {
    const std::string text = result_to_json(r);
    if (c.out_path.empty()) {
        out << text;
    } else {
        write_text_file(c.out_path, text);
    }
}

EvaluationOptions eval_options(const Config& c) {
    EvaluationOptions o;
    o.workers = c.workers;
    o.deterministic = c.deterministic;
    return o;
}

int run_spectrum(const Config& c, const OperatorSpec& op, std::ostream& out, std::ostream& err) {
    const int k = require(c.k, "--k");
    if (k < 0) throw InputError("--k must be >= 0");
    // Finite range: no trimming, so the whole 2^-k budget goes to the grid test.
    SpectrumApprox s = op.range() ? approx_spectrum(op, std::ldexp(1.0, -k), eval_options(c))
                                  : spectrum_with_error(op, k, eval_options(c));
    ResultFile r = to_result(s);
    r.parameters["k"] = k;
    emit(c, r, out);
    err << "spectrum: " << s.points.size() << " points, radius " << s.hausdorff_radius << ", grid "
        << s.diagnostics.grid_size << ", " << s.diagnostics.wall_seconds << " s\n";
    return kSuccess;
}

int run_pseudospectrum(const Config& c, const OperatorSpec& op, std::ostream& out, std::ostream& err) {
    const double eps = require(c.epsilon, "--epsilon");
    require_positive(eps, "--epsilon");
    double delta = 0.0;
    if (c.delta) {
        delta = *c.delta;
    } else if (c.k) {
        delta = std::ldexp(1.0, -*c.k);
    } else {
        throw InputError("--delta (or --k) is required for pseudospectrum");
    }
    require_positive(delta, "--delta");
    PseudospectrumApprox p = op.range() ? approx_pseudospectrum(op, eps, delta, eval_options(c), c.max_iter)
                                        : pseudospectrum_short_range(op, eps, delta, eval_options(c), c.max_iter);
    ResultFile r = to_result(p);
    r.parameters["delta"] = delta;
    emit(c, r, out);
    if (!c.image_path.empty()) render_classification(p.final_classification, c.image_path);
    err << "pseudospectrum: " << p.points.size() << " points, radius " << p.hausdorff_radius << " after "
        << p.trace.size() << " iterations\n";
    return kSuccess;
}

int run_rho(const Config& c, const OperatorSpec& op, std::ostream& out, std::ostream& err) {
    const Complex lambda = parse_lambda(require(c.lambda, "--lambda"));
    const double tau = require(c.tau, "--tau");
    require_positive(tau, "--tau");
    // Short-range input: half the budget pays for the trimming (|rho_H - rho_G| <= ||H - G||).
    TrimmedOperator g = trim(op, cutoff_length(op, op.range() ? tau : tau / 2.0));
    RhoTilde rt = rho_tilde(g.op, lambda, op.range() ? tau : tau / 2.0);
    ResultFile r;
    r.command = "rho";
    r.operator_id = op.id();
    r.parameters = {{"tau", tau}, {"lambda_re", lambda.real()}, {"lambda_im", lambda.imag()},
                    {"value", rt.value}, {"L", rt.L}, {"trim_m", g.m}, {"trim_error", g.trim_error}};
    r.hausdorff_radius = tau;
    r.entries.push_back(ResultEntry{lambda, "", rt.L, rt.epsilon.hi, std::nullopt});
    r.provenance = {"value: certified upper end of the catalog minimum at L, |value - rho| <= tau",
                    "scale: eps(1 - sqrt(1 - delta)) + (M + |lambda|) sqrt(delta) < 0.9 tau"};
    emit(c, r, out);
    err << "rho-tilde(" << lambda.real() << (lambda.imag() < 0 ? "" : "+") << lambda.imag() << "i, " << tau
        << ") = " << rt.value << " at L = " << rt.L << "\n";
    return kSuccess;
}

int run_gap(const Config& c, const OperatorSpec& op, std::ostream& out, std::ostream& err) {
    const Complex lambda = parse_lambda(require(c.lambda, "--lambda"));
    const double L = require(c.L, "--L");
    const double width = c.tau.value_or(1e-3);
    require_positive(width, "--tau");
    const double m = op.require_range();
    if (!(L > m)) throw InputError("--L must exceed the operator range");
    EpsilonL e = epsilon_L(op, L, lambda, width);
    const double M_shift = norm_shift_bound(op, lambda);
    const double lower = gap_lower_bound(e, M_shift, op.dimension(), m);
    ResultFile r;
    r.command = "gap";
    r.operator_id = op.id();
    r.parameters = {{"L", L}, {"width", width}, {"lambda_re", lambda.real()}, {"lambda_im", lambda.imag()},
                    {"gap_lower", lower}, {"upper", e.value.hi}, {"M_shift", M_shift},
                    {"delta_L", delta_L(op.dimension(), L, m)}};
    r.entries.push_back(ResultEntry{lambda, "", L, e.value.hi, lower});
    r.provenance = {"upper: certified upper end of the catalog minimum at L (rho <= upper)",
                    "gap_lower: lo * sqrt(1 - delta_L) - (M + |lambda|) sqrt(delta_L) (rho >= gap_lower)"};
    emit(c, r, out);
    err << "gap: " << lower << " <= rho <= " << e.value.hi << " at L = " << L << "\n";
    return kSuccess;
}

int run_classify(const Config& c, const OperatorSpec& op, std::ostream& out, std::ostream& err) {
    const double eps = require(c.epsilon, "--epsilon");
    require_positive(eps, "--epsilon");
    const double L = require(c.L, "--L");
    const double tau = c.tau.value_or(0.05);
    require_positive(tau, "--tau");
    SRUClassification cl = classify_at_scale(op, eps, tau, L, eval_options(c));
    emit(c, to_result(cl, op.id()), out);
    if (!c.image_path.empty()) render_classification(cl, c.image_path);
    err << "classify: S " << cl.S.size() << ", U " << cl.U.size() << ", R " << cl.R.size() << "\n";
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certified spectra and pseudospectra of operators of finite local complexity", "flc"};
    app.require_subcommand(1);
    Config c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", c.model, "built-in model name or model file path")->required();
        sub->add_option("--out", c.out_path, "result file (default: stdout)");
        sub->add_option("--workers", c.workers, "worker threads (0: all cores)");
        sub->add_flag("--deterministic", c.deterministic, "sequential evaluation");
    };
    auto* spectrum = app.add_subcommand("spectrum", "spectrum of a normal operator to Hausdorff radius 2^-k");
    add_common(spectrum);
    spectrum->add_option("--k", c.k, "accuracy exponent");
    auto* pseudo = app.add_subcommand("pseudospectrum", "epsilon-pseudospectrum to Hausdorff radius delta");
    add_common(pseudo);
    pseudo->add_option("--epsilon", c.epsilon, "pseudospectral level");
    pseudo->add_option("--delta", c.delta, "Hausdorff radius");
    pseudo->add_option("--k", c.k, "radius 2^-k when --delta is absent");
    pseudo->add_option("--image", c.image_path, "PGM image of the final classification");
    pseudo->add_option("--max-iter", c.max_iter, "iteration cap");
    auto* rho = app.add_subcommand("rho", "rho-tilde(lambda, tau)");
    add_common(rho);
    rho->add_option("--lambda", c.lambda, "spectral parameter re[,im]");
    rho->add_option("--tau", c.tau, "accuracy");
    auto* gap = app.add_subcommand("gap", "two-sided bound on the lower norm at a fixed scale");
    add_common(gap);
    gap->add_option("--lambda", c.lambda, "spectral parameter re[,im]");
    gap->add_option("--L", c.L, "section scale");
    gap->add_option("--tau", c.tau, "interval width of the singular value search (default 1e-3)");
    auto* classify = app.add_subcommand("classify", "S/U/R classification at a fixed scale L");
    add_common(classify);
    classify->add_option("--epsilon", c.epsilon, "pseudospectral level");
    classify->add_option("--L", c.L, "section scale");
    classify->add_option("--tau", c.tau, "grid parameter: spacing tau*sqrt(2) (default 0.05)");
    classify->add_option("--image", c.image_path, "PGM image");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        const ModelDefinition def = load_model(c.model);
        const OperatorSpec op = make_operator(def);
        if (spectrum->parsed()) return run_spectrum(c, op, out, err);
        if (pseudo->parsed()) return run_pseudospectrum(c, op, out, err);
        if (rho->parsed()) return run_rho(c, op, out, err);
        if (gap->parsed()) return run_gap(c, op, out, err);
        return run_classify(c, op, out, err);
    } catch (const IterationCapError& e) {
        err << "certification aborted: " << e.what() << "\n";
        return kCertificationAbort;
    } catch (const CertificationError& e) {
        err << "certification aborted: " << e.what() << "\n";
        return kCertificationAbort;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

}  // namespace flc::cli
