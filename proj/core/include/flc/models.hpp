#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flc/operator.hpp"

namespace flc {

enum class ModelKind { FreeLaplacian, Periodic, CutProject, Jump, Hofstadter, Bernoulli, PowerLaw };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);  // throws InputError

/// Parameters of a concrete model family. Fields not used by a kind are ignored.
///
/// One-dimensional models act on ℓ²(Z) as
///   (Hψ)(n) = (shift + V(n)) ψ(n) + Σ_k [ right(k) ψ(n+k) + left(k) ψ(n-k) ]
/// with right(1) = left(1) = -hopping for nearest-neighbour kinds and
/// right(k) = amp_right k^-exponent, left(k) = amp_left k^-exponent for power-law.
///   periodic     V(n) = potential[n mod P]
///   cut-project  V(n) = amplitude * [ frac(n alpha) < 1/alpha ]
///   jump         V(n) = amplitude * [ n < jump_at ]
///   bernoulli    V(n) in potential, every finite word occurring; `seed` fixes one realisation
/// Two-dimensional kinds: free-laplacian with dimension 2, and hofstadter in the Landau
/// gauge with flux p/q per plaquette (hopping in y carries exp(2 pi i flux x)).
struct ModelDefinition {
    ModelKind kind = ModelKind::FreeLaplacian;
    std::string id;
    int dimension = 1;
    std::optional<double> shift;  // default: 2*dimension (0 for hofstadter and power-law)
    double hopping = 1.0;
    std::vector<Complex> potential;  // periodic / bernoulli values / power-law diagonal
    Complex amplitude{1.0, 0.0};     // cut-project / jump
    std::string alpha = "golden";    // "p/q", an exact decimal, "golden", or "irrational:<x>"
    double jump_at = 0.5;
    long flux_p = 1;
    long flux_q = 2;
    double exponent = 2.0;
    Complex amp_right{1.0, 0.0};
    Complex amp_left{1.0, 0.0};
    unsigned long long seed = 1;
    std::optional<double> norm_bound;  // override of the analytic Schur bound
    std::optional<DecayBound> decay;   // override of the derived decay constants

    double effective_shift() const;
};

/// Validates the definition and builds its operator (patch oracle, norm bound, range or decay).
OperatorSpec make_operator(const ModelDefinition& def);

/// Named definitions used by the CLI and tests: free1d, free2d, period2, diagonal03,
/// complex-rotation, fibonacci, jump, hofstadter-half, bernoulli, power-law, power-law-weak, power-law-skew.
ModelDefinition builtin_model(const std::string& name);
std::vector<std::string> builtin_model_names();

/// On-site term shift + V(n) of a one-dimensional model.
Complex onsite(const ModelDefinition& def, long n);

/// Dense finite section on the cube of side `size` with lower corner `offset` (one entry per
/// dimension; empty means the origin), sites in lexicographic order.
Eigen::MatrixXcd sample_section(const ModelDefinition& def, long size, const std::vector<long>& offset = {});

/// Finite subset of the spectrum of a normal model within `resolution` (Hausdorff) of the
/// true spectrum. When `intervals` is non-empty the spectrum is exactly their union
/// (up to eigensolver rounding) and distance() is exact.
struct OracleSpectrum {
    std::vector<Complex> points;
    double resolution = 0.0;
    std::vector<std::pair<double, double>> intervals;

    double distance(Complex z) const;
};

/// Bloch-matrix oracle for free, periodic, diagonal, hofstadter and Laurent power-law models.
/// Throws InputError for models without a closed-form spectrum.
OracleSpectrum oracle_spectrum(const ModelDefinition& def, double resolution);

/// An exact rational p/q, or nothing for irrational rotation numbers.
struct Rotation {
    long double value = 0.0L;
    std::optional<std::pair<long long, long long>> rational;
};
Rotation parse_rotation(const std::string& alpha);

/// Distinct length-w windows of the cut-project sequence [frac(n alpha) < 1/alpha], each as
/// a 0/1 word, in lexicographic order.
std::vector<std::vector<int>> cut_project_words(const Rotation& alpha, long w);

}  // namespace flc
