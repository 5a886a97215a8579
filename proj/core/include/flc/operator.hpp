#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flc/geometry.hpp"

namespace flc {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// A local configuration B_scale(center) ∩ Γ with the operator entries between its points.
/// Points are in lexicographic order. A dominated patch has a column window that extends
/// to another catalog patch, so it never attains a catalog minimum of the smallest
/// singular value and may be skipped there.
struct Patch {
    std::size_t id = 0;
    PointCloud points;
    Point center;
    SparseMatrix matrix;  // points.size() x points.size()
    bool dominated = false;
};

/// Every equivalence class of patches at one scale, one representative each.
struct PatchCatalog {
    double scale = 0.0;
    int dimension = 0;
    /// Entries between points farther apart than this were dropped (infinity: none).
    double max_hop = std::numeric_limits<double>::infinity();
    /// Set by exhaustive enumerators. Minima over an incomplete catalog certify nothing.
    bool complete = false;
    std::vector<Patch> patches;

    std::size_t size() const { return patches.size(); }
    /// Index of a patch equivalent to (points, matrix) under translation and a diagonal
    /// unitary change of gauge, if any.
    std::optional<std::size_t> find_equivalent(const PointCloud& points, const SparseMatrix& matrix,
                                               double tol = 1e-10) const;
};

/// Gauge-fixed copy of a local matrix: walking the points in order, each point's phase is
/// chosen so that its entry with the earliest already-fixed neighbour is real positive.
/// Two matrices related by a diagonal unitary have equal canonical forms.
SparseMatrix canonical_gauge(const SparseMatrix& m);

/// Translation + diagonal-unitary equivalence of two patches.
bool equivalent_patches(const PointCloud& pa, const SparseMatrix& ma, const PointCloud& pb,
                        const SparseMatrix& mb, double tol = 1e-10);

/// Enumerates the patch classes of an operator at a given scale.
class PatchOracle {
public:
    virtual ~PatchOracle() = default;
    /// Catalog at scale L, keeping only entries between points at distance <= max_hop.
    virtual PatchCatalog catalog(double L, double max_hop) const = 0;
};

/// |H_xy| <= C (1 + d(x,y))^-(n+eps).
struct DecayBound {
    double C = 0.0;
    double epsilon = 0.0;
};

struct OperatorParams {
    std::string id;
    int dimension = 1;
    double separation = 1.0;           // Γ is uniformly discrete with this separation
    std::optional<double> range;       // finite range m
    std::optional<DecayBound> decay;   // short-range metadata
    double norm_bound = 0.0;           // M >= ||H||
    bool normal = false;
    /// Every trimming G^m is normal too (Hermitian or translation-invariant operators).
    bool trim_keeps_normal = false;
};

/// An operator on ℓ²(Γ) given through its patch oracle. Immutable; catalogs are memoised.
class OperatorSpec {
public:
    OperatorSpec(OperatorParams params, std::shared_ptr<const PatchOracle> oracle);

    const std::string& id() const { return p_.id; }
    int dimension() const { return p_.dimension; }
    double separation() const { return p_.separation; }
    const std::optional<double>& range() const { return p_.range; }
    const std::optional<DecayBound>& decay() const { return p_.decay; }
    double norm_bound() const { return p_.norm_bound; }
    bool normal() const { return p_.normal; }
    const OperatorParams& params() const { return p_; }

    /// Finite range m; throws PreconditionError for operators without one.
    double require_range() const;

    /// Catalog at scale L (all entries, or entries within the finite range).
    std::shared_ptr<const PatchCatalog> catalog(double L) const;
    std::shared_ptr<const PatchCatalog> catalog(double L, double max_hop) const;

    const std::shared_ptr<const PatchOracle>& oracle() const { return oracle_; }

private:
    struct Memo;
    OperatorParams p_;
    std::shared_ptr<const PatchOracle> oracle_;
    std::shared_ptr<Memo> memo_;
};

/// G^m: the operator with entries beyond distance m set to zero.
struct TrimmedOperator {
    OperatorSpec op;           // finite range m
    double m = 0.0;
    double trim_error = 0.0;   // certified upper bound on ||H - G^m||
};

/// Surface-integral constant C2 in ||H - G^m|| <= C * C2 * m^-eps.
double decay_tail_constant(int dimension, double epsilon, double separation);

/// Trims at m. Finite-range operators with range <= m are returned unchanged with error 0.
/// Throws CertificationError when the operator has neither a finite range <= m nor decay data.
TrimmedOperator trim(const OperatorSpec& op, double m);

/// Smallest power of two m >= 1 with C*C2*m^-eps <= delta; the declared range for
/// finite-range operators. Throws CertificationError without decay metadata.
double cutoff_length(const OperatorSpec& op, double delta);

/// sqrt(max row sum * max column sum) of |H_xy| over the rows fully visible in the catalog
/// at L_probe, plus the decay tail beyond the probe for short-range operators.
double schur_norm_bound(const OperatorSpec& op, double L_probe);

/// M + |lambda| >= ||H - lambda||.
double norm_shift_bound(const OperatorSpec& op, Complex lambda);

}  // namespace flc
