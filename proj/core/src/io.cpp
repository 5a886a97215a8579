#include "flc/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "flc/errors.hpp"

namespace flc {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "flc-result";

Complex complex_from(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw InputError("model file: '" + key + "' must be a number or [re, im]");
}

json complex_to(Complex z) { return json::array({z.real(), z.imag()}); }

double number_from(const json& v, const std::string& key) {
    if (!v.is_number()) throw InputError("'" + key + "' must be a number");
    return v.get<double>();
}

long integer_from(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw InputError("'" + key + "' must be an integer");
    return v.get<long>();
}

std::string string_from(const json& v, const std::string& key) {
    if (!v.is_string()) throw InputError("'" + key + "' must be a string");
    return v.get<std::string>();
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(what + ": " + e.what());
    }
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> optional_from(const json& o, const char* key) {
    if (!o.contains(key) || o[key].is_null()) return std::nullopt;
    return number_from(o[key], key);
}

}  // namespace

ModelDefinition parse_model(const std::string& text) {
    const json j = parse_json(text, "model file");
    if (!j.is_object()) throw InputError("model file: top level must be an object");
    static const std::set<std::string> known = {"kind",   "id",       "dimension", "shift",     "hopping",
                                                "potential", "amplitude", "alpha",  "jump_at",  "flux",
                                                "exponent", "amp_right", "amp_left", "seed",    "norm_bound",
                                                "decay"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw InputError("model file: unknown key '" + key + "'");
    }
    if (!j.contains("kind")) throw InputError("model file: missing 'kind'");
    ModelDefinition d;
    d.kind = model_kind_from_string(string_from(j["kind"], "kind"));
    if (d.kind == ModelKind::Hofstadter) d.dimension = 2;
    if (j.contains("id")) d.id = string_from(j["id"], "id");
    if (j.contains("dimension")) d.dimension = static_cast<int>(integer_from(j["dimension"], "dimension"));
    if (j.contains("shift")) d.shift = number_from(j["shift"], "shift");
    if (j.contains("hopping")) d.hopping = number_from(j["hopping"], "hopping");
    if (j.contains("potential")) {
        if (!j["potential"].is_array()) throw InputError("model file: 'potential' must be an array");
        for (const auto& v : j["potential"]) d.potential.push_back(complex_from(v, "potential"));
    }
    if (j.contains("amplitude")) d.amplitude = complex_from(j["amplitude"], "amplitude");
    if (j.contains("alpha")) d.alpha = string_from(j["alpha"], "alpha");
    if (j.contains("jump_at")) d.jump_at = number_from(j["jump_at"], "jump_at");
    if (j.contains("flux")) {
        const auto& f = j["flux"];
        if (!f.is_array() || f.size() != 2) throw InputError("model file: 'flux' must be [p, q]");
        d.flux_p = integer_from(f[0], "flux");
        d.flux_q = integer_from(f[1], "flux");
    }
    if (j.contains("exponent")) d.exponent = number_from(j["exponent"], "exponent");
    if (j.contains("amp_right")) d.amp_right = complex_from(j["amp_right"], "amp_right");
    if (j.contains("amp_left")) d.amp_left = complex_from(j["amp_left"], "amp_left");
    if (j.contains("seed")) d.seed = static_cast<unsigned long long>(integer_from(j["seed"], "seed"));
    if (j.contains("norm_bound")) d.norm_bound = number_from(j["norm_bound"], "norm_bound");
    if (j.contains("decay")) {
        const auto& dc = j["decay"];
        if (!dc.is_object() || !dc.contains("C") || !dc.contains("epsilon")) {
            throw InputError("model file: 'decay' must be {\"C\": .., \"epsilon\": ..}");
        }
        d.decay = DecayBound{number_from(dc["C"], "decay.C"), number_from(dc["epsilon"], "decay.epsilon")};
    }
    make_operator(d);  // validates
    return d;
}

std::string model_to_json(const ModelDefinition& d) {
    json j;
    j["kind"] = to_string(d.kind);
    if (!d.id.empty()) j["id"] = d.id;
    j["dimension"] = d.dimension;
    if (d.shift) j["shift"] = *d.shift;
    j["hopping"] = d.hopping;
    if (!d.potential.empty()) {
        json p = json::array();
        for (auto v : d.potential) p.push_back(complex_to(v));
        j["potential"] = p;
    }
    j["amplitude"] = complex_to(d.amplitude);
    j["alpha"] = d.alpha;
    j["jump_at"] = d.jump_at;
    j["flux"] = json::array({d.flux_p, d.flux_q});
    j["exponent"] = d.exponent;
    j["amp_right"] = complex_to(d.amp_right);
    j["amp_left"] = complex_to(d.amp_left);
    j["seed"] = d.seed;
    if (d.norm_bound) j["norm_bound"] = *d.norm_bound;
    if (d.decay) j["decay"] = {{"C", d.decay->C}, {"epsilon", d.decay->epsilon}};
    return j.dump(2) + "\n";
}

ModelDefinition load_model(const std::string& name_or_path) {
    const auto names = builtin_model_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_model(name_or_path);
    if (!std::filesystem::exists(name_or_path)) {
        throw InputError("model '" + name_or_path + "' is neither a built-in name nor an existing file");
    }
    ModelDefinition d = parse_model(read_text_file(name_or_path));
    if (d.id.empty()) d.id = std::filesystem::path(name_or_path).stem().string();
    return d;
}

std::string result_to_json(const ResultFile& r) {
    json j;
    j["format"] = kFormat;
    j["version"] = ResultFile::kVersion;
    j["command"] = r.command;
    j["operator"] = r.operator_id;
    j["parameters"] = r.parameters;
    j["hausdorff_radius"] = optional_number(r.hausdorff_radius);
    json pts = json::array();
    for (auto z : r.points) pts.push_back(complex_to(z));
    j["points"] = pts;
    json entries = json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"lambda", complex_to(e.lambda)},
                           {"label", e.label},
                           {"L", optional_number(e.L)},
                           {"upper", optional_number(e.upper)},
                           {"gap_lower", optional_number(e.gap_lower)}});
    }
    j["entries"] = entries;
    j["provenance"] = r.provenance;
    j["diagnostics"] = r.diagnostics;
    return j.dump(1) + "\n";
}

ResultFile parse_result(const std::string& text) {
    const json j = parse_json(text, "result file");
    if (!j.is_object() || j.value("format", "") != kFormat) throw InputError("result file: not an flc-result file");
    if (j.value("version", 0) != ResultFile::kVersion) throw InputError("result file: unsupported version");
    ResultFile r;
    try {
        r.command = j.at("command").get<std::string>();
        r.operator_id = j.at("operator").get<std::string>();
        r.parameters = j.at("parameters").get<std::map<std::string, double>>();
        r.hausdorff_radius = optional_from(j, "hausdorff_radius");
        for (const auto& p : j.at("points")) r.points.push_back(complex_from(p, "points"));
        for (const auto& e : j.at("entries")) {
            r.entries.push_back(ResultEntry{complex_from(e.at("lambda"), "lambda"), e.at("label").get<std::string>(),
                                            optional_from(e, "L"), optional_from(e, "upper"),
                                            optional_from(e, "gap_lower")});
        }
        r.provenance = j.at("provenance").get<std::vector<std::string>>();
        r.diagnostics = j.at("diagnostics").get<std::map<std::string, double>>();
    } catch (const json::exception& e) {
        throw InputError(std::string("result file: ") + e.what());
    }
    return r;
}

namespace {

void add_diagnostics(ResultFile& r, const SpectrumDiagnostics& d) {
    r.diagnostics["grid_size"] = static_cast<double>(d.grid_size);
    r.diagnostics["probes"] = static_cast<double>(d.probes);
    r.diagnostics["wall_seconds"] = d.wall_seconds;
    if (!d.scales.empty()) {
        r.diagnostics["L_min"] = d.scales.front();
        r.diagnostics["L_max"] = d.scales.back();
    }
}

std::optional<double> finite(double x) { return std::isfinite(x) ? std::optional<double>(x) : std::nullopt; }

const char* label_of(Region r) { return r == Region::S ? "S" : (r == Region::U ? "U" : "R"); }

}  // namespace

ResultFile to_result(const SpectrumApprox& s) {
    ResultFile r;
    r.command = "spectrum";
    r.operator_id = s.operator_id;
    r.parameters = {{"tau", s.tau}, {"trim_m", s.trim_m}, {"trim_error", s.trim_error}};
    r.hausdorff_radius = s.hausdorff_radius;
    r.points = s.points;
    for (const auto& c : s.certificates) r.entries.push_back(ResultEntry{c.lambda, "", c.L, c.upper, std::nullopt});
    r.provenance = {
        "grid: covering grid of [-M, M]^2 with spacing tau*sqrt(2)/4, M = declared norm bound",
        "acceptance: catalog minimum of the smallest singular values of the uneven sections at L, "
        "certified upper end below tau/2 (Cholesky bisection of the Gram matrix)",
        "scale: L chosen so that eps(1 - sqrt(1 - delta)) + (M + |lambda|) sqrt(delta) < 0.9 * tau/4",
        "radius: tau + trim error allowance (finite range: tau)"};
    add_diagnostics(r, s.diagnostics);
    return r;
}

ResultFile to_result(const SRUClassification& c, const std::string& operator_id) {
    ResultFile r;
    r.command = "classify";
    r.operator_id = operator_id;
    r.parameters = {{"epsilon", c.epsilon}, {"tau", c.tau}, {"L", c.fixed_L}, {"spacing", c.grid.spacing},
                    {"half_extent", static_cast<double>(c.grid.half_extent)}};
    for (std::size_t i = 0; i < c.grid.points.size(); ++i) {
        const auto& k = c.certificates[i];
        r.entries.push_back(ResultEntry{c.grid.points[i], label_of(c.labels[i]), finite(k.L), finite(k.upper),
                                        finite(k.gap_lower)});
    }
    r.provenance = {
        "S: certified upper end of the catalog minimum below the S threshold, so rho < epsilon",
        "R: gap bound eps_lo * sqrt(1 - delta_L) - (M + |lambda|) sqrt(delta_L) > epsilon at L",
        "U: neither certificate"};
    r.diagnostics["S"] = static_cast<double>(c.S.size());
    r.diagnostics["U"] = static_cast<double>(c.U.size());
    r.diagnostics["R"] = static_cast<double>(c.R.size());
    r.diagnostics["demoted"] = static_cast<double>(c.demoted);
    add_diagnostics(r, c.diagnostics);
    return r;
}

ResultFile to_result(const PseudospectrumApprox& p) {
    ResultFile r = to_result(p.final_classification, p.operator_id);
    r.command = "pseudospectrum";
    r.parameters["trim_m"] = p.trim_m;
    r.parameters["trim_error"] = p.trim_error;
    r.hausdorff_radius = p.hausdorff_radius;
    r.points = p.points;
    r.provenance.push_back("termination: every U point within delta - tau of S");
    for (const auto& t : p.trace) {
        const std::string pre = "iteration_" + std::to_string(t.j) + "_";
        r.diagnostics[pre + "tau"] = t.tau;
        r.diagnostics[pre + "u_to_s"] = std::isfinite(t.u_to_s) ? t.u_to_s : -1.0;
    }
    r.diagnostics["iterations"] = static_cast<double>(p.trace.size());
    return r;
}

std::string catalog_to_json(const PatchCatalog& cat) {
    json j;
    j["scale"] = cat.scale;
    j["dimension"] = cat.dimension;
    j["max_hop"] = std::isfinite(cat.max_hop) ? json(cat.max_hop) : json(nullptr);
    j["complete"] = cat.complete;
    json patches = json::array();
    for (const auto& p : cat.patches) {
        json pts = json::array();
        for (std::size_t i = 0; i < p.points.size(); ++i) {
            auto x = p.points[i];
            pts.push_back(std::vector<double>(x.begin(), x.end()));
        }
        std::vector<std::tuple<long, long, double, double>> trip;
        for (int k = 0; k < p.matrix.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(p.matrix, k); it; ++it) {
                trip.emplace_back(it.row(), it.col(), it.value().real(), it.value().imag());
            }
        }
        std::sort(trip.begin(), trip.end());
        json entries = json::array();
        for (const auto& [r, c, re, im] : trip) entries.push_back(json::array({r, c, re, im}));
        patches.push_back({{"id", p.id},
                           {"center", p.center.coords},
                           {"dominated", p.dominated},
                           {"points", pts},
                           {"entries", entries}});
    }
    j["patches"] = patches;
    return j.dump(1) + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
    if (!f) throw InputError("cannot write '" + path + "'");
}

}  // namespace flc
