#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flc/models.hpp"
#include "flc/operator.hpp"
#include "flc/pseudospectrum.hpp"
#include "flc/spectrum.hpp"

namespace flc {

/// Model definition files are JSON objects. Complex numbers are written as [re, im] or as a
/// plain real. Keys: kind, id, dimension, shift, hopping, potential, amplitude, alpha (string),
/// jump_at, flux ([p, q]), exponent, amp_right, amp_left, seed, norm_bound, decay ({C, epsilon}).
/// Unknown keys and ill-typed values throw InputError naming the key.
ModelDefinition parse_model(const std::string& json_text);
std::string model_to_json(const ModelDefinition& def);
/// A built-in name (see builtin_model_names) or a path to a model file.
ModelDefinition load_model(const std::string& name_or_path);

/// One evaluated point of a result file.
struct ResultEntry {
    Complex lambda;
    std::string label;              // "S", "U", "R", or "" for plain spectrum points
    std::optional<double> L;
    std::optional<double> upper;      // upper bound on the catalog minimum at L
    std::optional<double> gap_lower;  // lower bound on rho from the gap estimate

    bool operator==(const ResultEntry&) const = default;
};

/// Versioned result file: {"format": "flc-result", "version": 1, ...}.
struct ResultFile {
    static constexpr int kVersion = 1;
    std::string command;
    std::string operator_id;
    std::map<std::string, double> parameters;
    std::optional<double> hausdorff_radius;
    std::vector<Complex> points;
    std::vector<ResultEntry> entries;
    std::vector<std::string> provenance;  // every bound used, in words
    std::map<std::string, double> diagnostics;

    bool operator==(const ResultFile&) const = default;
};

std::string result_to_json(const ResultFile& r);
/// Throws InputError on a wrong format tag, an unsupported version or malformed fields.
ResultFile parse_result(const std::string& json_text);

ResultFile to_result(const SpectrumApprox& s);
ResultFile to_result(const PseudospectrumApprox& p);
ResultFile to_result(const SRUClassification& c, const std::string& operator_id);

/// Catalog as JSON: per patch its points, centre, dominated flag and the nonzero matrix
/// entries as [row, col, re, im] sorted row-major.
std::string catalog_to_json(const PatchCatalog& cat);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace flc
