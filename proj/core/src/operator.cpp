#include "flc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "flc/errors.hpp"

namespace flc {

namespace {

double max_abs(const SparseMatrix& m) {
    double v = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
    }
    return v;
}

bool sparse_close(const SparseMatrix& a, const SparseMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    SparseMatrix d = a - b;
    return max_abs(d) <= tol * (1.0 + max_abs(a));
}

}  // namespace

SparseMatrix canonical_gauge(const SparseMatrix& m) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw InputError("canonical_gauge: matrix must be square");
    // Earliest neighbour (in either direction) for every point.
    std::vector<Eigen::Index> parent(n, -1);
    std::vector<Complex> via(n);
    std::vector<bool> forward(n, true);  // true: use H(parent, j); false: H(j, parent)
    for (int c = 0; c < m.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
            if (it.value() == Complex(0.0)) continue;
            Eigen::Index i = it.row(), j = it.col();
            if (i == j) continue;
            Eigen::Index lo = std::min(i, j), hi = std::max(i, j);
            bool fwd = (i == lo);
            if (parent[hi] == -1 || lo < parent[hi] || (lo == parent[hi] && fwd && !forward[hi])) {
                parent[hi] = lo;
                via[hi] = it.value();
                forward[hi] = fwd;
            }
        }
    }
    std::vector<Complex> u(n, Complex(1.0));
    for (Eigen::Index j = 0; j < n; ++j) {
        if (parent[j] < 0) continue;
        Complex w = forward[j] ? u[parent[j]] * via[j] : u[parent[j]] * std::conj(via[j]);
        u[j] = w / std::abs(w);
    }
    SparseMatrix out = m;
    for (int c = 0; c < out.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(out, c); it; ++it) {
            it.valueRef() = u[it.row()] * it.value() * std::conj(u[it.col()]);
        }
    }
    return out;
}

bool equivalent_patches(const PointCloud& pa, const SparseMatrix& ma, const PointCloud& pb,
                        const SparseMatrix& mb, double tol) {
    if (pa.dimension() != pb.dimension() || pa.size() != pb.size()) return false;
    if (pa.size() == 0) return true;
    auto a0 = pa[0];
    auto b0 = pb[0];
    for (std::size_t k = 0; k < pa.size(); ++k) {
        auto a = pa[k];
        auto b = pb[k];
        for (std::size_t d = 0; d < a.size(); ++d) {
            if (std::abs((a[d] - a0[d]) - (b[d] - b0[d])) > tol) return false;
        }
    }
    return sparse_close(canonical_gauge(ma), canonical_gauge(mb), tol);
}

std::optional<std::size_t> PatchCatalog::find_equivalent(const PointCloud& points,
                                                         const SparseMatrix& matrix,
                                                         double tol) const {
    for (std::size_t k = 0; k < patches.size(); ++k) {
        if (equivalent_patches(points, matrix, patches[k].points, patches[k].matrix, tol)) return k;
    }
    return std::nullopt;
}

struct OperatorSpec::Memo {
    std::mutex mu;
    std::map<std::pair<double, double>, std::shared_ptr<const PatchCatalog>> catalogs;
};

OperatorSpec::OperatorSpec(OperatorParams params, std::shared_ptr<const PatchOracle> oracle)
    : p_(std::move(params)), oracle_(std::move(oracle)), memo_(std::make_shared<Memo>()) {
    if (p_.dimension < 1) throw InputError("operator: dimension must be >= 1");
    if (!(p_.separation > 0.0)) throw InputError("operator: separation must be positive");
    if (!(p_.norm_bound >= 0.0) || !std::isfinite(p_.norm_bound)) {
        throw InputError("operator: norm bound must be finite and non-negative");
    }
    if (p_.range && !(*p_.range > 0.0)) throw InputError("operator: range must be positive");
    if (p_.decay && (!(p_.decay->C >= 0.0) || !(p_.decay->epsilon > 0.0))) {
        throw InputError("operator: decay needs C >= 0 and epsilon > 0");
    }
    if (!oracle_) throw InputError("operator: missing patch oracle");
}

double OperatorSpec::require_range() const {
    if (!p_.range) throw PreconditionError("operator '" + p_.id + "' has no finite range; trim it first");
    return *p_.range;
}

std::shared_ptr<const PatchCatalog> OperatorSpec::catalog(double L) const {
    return catalog(L, p_.range.value_or(std::numeric_limits<double>::infinity()));
}

std::shared_ptr<const PatchCatalog> OperatorSpec::catalog(double L, double max_hop) const {
    if (!(L > 0.0) || !std::isfinite(L)) throw InputError("catalog: scale must be positive and finite");
    if (p_.range) max_hop = std::min(max_hop, *p_.range);
    auto key = std::make_pair(L, max_hop);
    {
        std::lock_guard lock(memo_->mu);
        auto it = memo_->catalogs.find(key);
        if (it != memo_->catalogs.end()) return it->second;
    }
    auto built = std::make_shared<const PatchCatalog>(oracle_->catalog(L, max_hop));
    std::lock_guard lock(memo_->mu);
    auto [it, inserted] = memo_->catalogs.emplace(key, built);
    return it->second;
}

double decay_tail_constant(int n, double eps, double l) {
    if (n < 1 || !(eps > 0.0) || !(l > 0.0)) throw InputError("decay_tail_constant: bad parameters");
    const double dn = n;
    return std::pow(dn, (dn + eps) / 2.0) * std::pow(l / 2.0, -dn) *
           std::pow(2.0 * std::numbers::pi, dn - 1.0) * std::pow(4.0, eps) / eps;
}

namespace {

class TrimmedOracle : public PatchOracle {
public:
    TrimmedOracle(std::shared_ptr<const PatchOracle> base, double m) : base_(std::move(base)), m_(m) {}
    PatchCatalog catalog(double L, double max_hop) const override {
        return base_->catalog(L, std::min(max_hop, m_));
    }

private:
    std::shared_ptr<const PatchOracle> base_;
    double m_;
};

double tail_bound(const DecayBound& d, int n, double l, double m) {
    return d.C * decay_tail_constant(n, d.epsilon, l) * std::pow(m, -d.epsilon);
}

}  // namespace

TrimmedOperator trim(const OperatorSpec& op, double m) {
    if (!(m > 0.0)) throw InputError("trim: m must be positive");
    if (op.range() && *op.range() <= m) return TrimmedOperator{op, *op.range(), 0.0};
    if (!op.decay()) {
        throw CertificationError("trim: operator '" + op.id() +
                                 "' has no decay metadata, so ||H - G^m|| cannot be bounded");
    }
    double err = tail_bound(*op.decay(), op.dimension(), op.separation(), m);
    OperatorParams p = op.params();
    p.id = op.id() + "|trim=" + std::to_string(m);
    p.range = m;
    p.norm_bound = op.norm_bound() + err;
    p.normal = op.normal() && op.params().trim_keeps_normal;
    auto oracle = std::make_shared<TrimmedOracle>(op.oracle(), m);
    return TrimmedOperator{OperatorSpec(std::move(p), std::move(oracle)), m, err};
}

double cutoff_length(const OperatorSpec& op, double delta) {
    if (!(delta > 0.0)) throw InputError("cutoff_length: delta must be positive");
    if (op.range()) return *op.range();
    if (!op.decay()) {
        throw CertificationError("cutoff_length: operator '" + op.id() + "' has no decay metadata");
    }
    const auto& d = *op.decay();
    double x = std::pow(d.C * decay_tail_constant(op.dimension(), d.epsilon, op.separation()) / delta,
                        1.0 / d.epsilon);
    if (!(x > 1.0)) return 1.0;
    return std::exp2(std::ceil(std::log2(x) - 1e-12));
}

double schur_norm_bound(const OperatorSpec& op, double L_probe) {
    double hop = 0.0;
    double tail = 0.0;
    if (op.range()) {
        hop = *op.range();
        if (!(L_probe > hop)) {
            throw PreconditionError("schur_norm_bound: probe scale must exceed the range");
        }
    } else if (op.decay()) {
        hop = std::floor(L_probe / 2.0);
        if (!(hop >= 1.0)) throw PreconditionError("schur_norm_bound: probe scale too small");
        tail = tail_bound(*op.decay(), op.dimension(), op.separation(), hop);
    } else {
        throw CertificationError("schur_norm_bound: operator has neither range nor decay data");
    }
    auto cat = op.catalog(L_probe, hop);
    double row_max = 0.0, col_max = 0.0;
    bool any = false;
    for (const auto& patch : cat->patches) {
        const auto n = static_cast<Eigen::Index>(patch.points.size());
        std::vector<bool> visible(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            visible[i] = max_dist(patch.points[i], patch.center.coords) < L_probe - hop - kBoundaryTolerance;
            any = any || visible[i];
        }
        std::vector<double> rows(n, 0.0), cols(n, 0.0);
        for (int c = 0; c < patch.matrix.outerSize(); ++c) {
            for (SparseMatrix::InnerIterator it(patch.matrix, c); it; ++it) {
                if (max_dist(patch.points[it.row()], patch.points[it.col()]) > hop) continue;
                rows[it.row()] += std::abs(it.value());
                cols[it.col()] += std::abs(it.value());
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!visible[i]) continue;
            row_max = std::max(row_max, rows[i]);
            col_max = std::max(col_max, cols[i]);
        }
    }
    if (!any) throw PreconditionError("schur_norm_bound: no row is fully visible at this probe scale");
    return std::sqrt(row_max * col_max) + tail;
}

double norm_shift_bound(const OperatorSpec& op, Complex lambda) {
    return op.norm_bound() + std::abs(lambda);
}

}  // namespace flc
