#include "flc/lower_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flc/errors.hpp"

namespace flc {

namespace {
// Each probe halves a bracket or decides a threshold; this only guards against stalls.
constexpr int kMaxDecisionProbes = 2000;
}  // namespace

double delta_L(int dimension, double L, double m) {
    if (!(m > 0.0)) throw InputError("delta_L: m must be positive");
    const double q = std::floor(L / m);
    if (!(q >= 1.0)) throw PreconditionError("delta_L: needs L >= m");
    return static_cast<double>(dimension) / q;
}

double gap_bound(double eps, double M_shift, double delta) {
    delta = std::clamp(delta, 0.0, 1.0);
    return eps * std::sqrt(1.0 - delta) - M_shift * std::sqrt(delta);
}

double gap_lower_bound(const EpsilonL& e, double M_shift, int dimension, double m) {
    return gap_bound(e.value.lo, M_shift, delta_L(dimension, e.L, m));
}

double scale_error(double eps, double M, double delta) {
    return eps * (1.0 - std::sqrt(1.0 - delta)) + M * std::sqrt(delta);
}

double scale_for_delta(int dimension, double m, double L0, double delta) {
    if (!(delta > 0.0)) throw InputError("scale_for_delta: delta must be positive");
    return std::max(L0, m * std::ceil(static_cast<double>(dimension) / delta)) + m;
}

double choose_delta(double eps0, double M, double tau) {
    if (!(tau > 0.0)) throw InputError("choose_delta: tau must be positive");
    double delta = 0.5;
    while (!(scale_error(eps0, M, delta) < tau)) {
        delta *= 0.5;
        if (delta < 1e-40) throw InputError("choose_delta: no admissible delta");
    }
    return delta;
}

LowerNormEngine::LowerNormEngine(OperatorSpec op) : op_(std::move(op)), m_(op_.require_range()) {}

std::shared_ptr<const SectionSet> LowerNormEngine::sections(double L) const {
    if (!(L > m_)) throw PreconditionError("uneven sections need L > m");
    std::lock_guard lock(mu_);
    auto it = cache_.find(L);
    if (it != cache_.end()) return it->second;
    auto cat = op_.catalog(L + m_);
    if (!cat->complete) {
        throw CertificationError("catalog for '" + op_.id() + "' is not marked complete");
    }
    auto set = std::make_shared<SectionSet>();
    set->L = L;
    set->m = m_;
    for (const auto& patch : cat->patches) {
        if (!patch.dominated) set->sections.emplace_back(patch, L, m_);
    }
    if (set->sections.empty()) throw CertificationError("catalog has no patches");
    cache_.emplace(L, set);
    return set;
}

LazyEpsilon LowerNormEngine::lazy(double L, Complex lambda, double width) const {
    if (!(width > 0.0)) throw InputError("epsilon_L: width must be positive");
    return LazyEpsilon(sections(L), lambda, width);
}

EpsilonL LowerNormEngine::epsilon(double L, Complex lambda, double width) const {
    return lazy(L, lambda, width).resolve();
}

ScaleChoice LowerNormEngine::choose_scale(Complex lambda, double tau) const {
    if (!(tau > 0.0)) throw InputError("choose_L: tau must be positive");
    ScaleChoice c;
    const double L0 = m_ + 1.0;
    c.eps0 = epsilon(L0, lambda, tau / 10.0).value.hi;
    c.M_shift = norm_shift_bound(op_, lambda);
    c.delta = choose_delta(c.eps0, c.M_shift, tau);
    c.L = scale_for_delta(op_.dimension(), m_, L0, c.delta);
    return c;
}

// The interval width tau/10 is paid out of the budget, the scale gets the rest.
double LowerNormEngine::rho_scale(Complex lambda, double tau) const {
    return choose_scale(lambda, 0.9 * tau).L;
}

RhoTilde LowerNormEngine::rho_tilde(Complex lambda, double tau) const {
    const double L = rho_scale(lambda, tau);
    EpsilonL e = epsilon(L, lambda, tau / 10.0);
    return RhoTilde{lambda, tau, L, e.value.hi, e.value};
}

LazyEpsilon LowerNormEngine::lazy_rho(Complex lambda, double tau) const {
    return lazy(rho_scale(lambda, tau), lambda, tau / 10.0);
}

std::vector<double> LowerNormEngine::screening_scales(double L_final) const {
    std::vector<double> out;
    for (double delta = 0.5;; delta *= 0.25) {
        const double L = scale_for_delta(op_.dimension(), m_, m_ + 1.0, delta);
        if (!(L < L_final)) break;
        if (out.empty() || L > out.back()) out.push_back(L);
    }
    return out;
}

LazyEpsilon::LazyEpsilon(std::shared_ptr<const SectionSet> set, Complex lambda, double width)
    : set_(std::move(set)), lambda_(lambda), width_(width) {
    searches_.resize(set_->sections.size());
    for (std::size_t p = 0; p < searches_.size(); ++p) search(p);
}

SingularValueSearch& LazyEpsilon::search(std::size_t p) {
    if (!searches_[p]) {
        searches_[p] = std::make_unique<SingularValueSearch>(set_->sections[p].search(lambda_));
    }
    return *searches_[p];
}

// Threshold-adjusted probes: a failure at t_below proves hi < theta, a success at t_above
// proves lo > theta. The preferred side is tried first, then the other, then bisection.
void LazyEpsilon::probe_toward(std::size_t p, double theta, bool below_first) {
    auto& s = search(p);
    const double t_below = std::sqrt(std::max(0.0, theta * theta - 2.0 * s.floor_at(theta))) * (1.0 - 1e-12);
    const double t_above = std::sqrt(theta * theta + s.floor_at(theta)) * (1.0 + 1e-12) +
                           std::numeric_limits<double>::min();
    const double first = below_first ? t_below : t_above;
    const double second = below_first ? t_above : t_below;
    for (double t : {first, second}) {
        // Only where either outcome tightens the bracket; a repeated probe would not.
        const double f = s.floor_at(t);
        if (std::sqrt(std::max(0.0, t * t - f)) > s.lo() && std::sqrt(t * t + 2.0 * f) < s.hi()) {
            s.probe(t);
            return;
        }
    }
    s.probe(0.5 * (s.lo() + s.hi()));
}

bool LazyEpsilon::min_hi_below(double theta) {
    for (int guard = 0;; ++guard) {
        if (guard > kMaxDecisionProbes) return min_hi() < theta;
        std::size_t best = searches_.size();
        bool all_at_or_above = true;
        for (std::size_t p = 0; p < searches_.size(); ++p) {
            const auto& s = *searches_[p];
            if (s.hi() < theta) return true;
            if (s.lo() < theta) {
                all_at_or_above = false;
                if (s.gap() > width_ && (best == searches_.size() || s.hi() < searches_[best]->hi())) best = p;
            }
        }
        if (all_at_or_above || best == searches_.size()) return false;
        probe_toward(best, theta, true);
    }
}

bool LazyEpsilon::min_hi_above(double theta) {
    for (int guard = 0;; ++guard) {
        if (guard > kMaxDecisionProbes) return min_hi() > theta;
        std::size_t best = searches_.size();
        bool all_above = true;
        for (std::size_t p = 0; p < searches_.size(); ++p) {
            const auto& s = *searches_[p];
            if (s.hi() <= theta) return false;
            if (s.lo() <= theta) {
                all_above = false;
                if (s.gap() > width_ && (best == searches_.size() || s.lo() < searches_[best]->lo())) best = p;
            }
        }
        // Remaining undecided patches are refined: their final hi is the current hi > theta.
        if (all_above || best == searches_.size()) return true;
        probe_toward(best, theta, false);
    }
}

bool LazyEpsilon::min_lo_above(double theta) {
    for (int guard = 0;; ++guard) {
        if (guard > kMaxDecisionProbes) return min_lo() > theta;
        std::size_t best = searches_.size();
        bool all_above = true;
        for (std::size_t p = 0; p < searches_.size(); ++p) {
            const auto& s = *searches_[p];
            if (s.hi() <= theta) return false;
            if (s.lo() <= theta) {
                all_above = false;
                if (s.gap() > width_ && (best == searches_.size() || s.lo() < searches_[best]->lo())) best = p;
            }
        }
        if (all_above) return true;
        if (best == searches_.size()) return false;
        probe_toward(best, theta, false);
    }
}

double LazyEpsilon::min_lo() const {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& s : searches_) v = std::min(v, s->lo());
    return v;
}

double LazyEpsilon::min_hi() const {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& s : searches_) v = std::min(v, s->hi());
    return v;
}

std::size_t LazyEpsilon::argmin_hi() const {
    std::size_t best = 0;
    for (std::size_t p = 1; p < searches_.size(); ++p) {
        if (searches_[p]->hi() < searches_[best]->hi()) best = p;
    }
    return set_->sections[best].patch_id();
}

int LazyEpsilon::probes() const {
    int n = 0;
    for (const auto& s : searches_) n += s->probes();
    return n;
}

EpsilonL LazyEpsilon::resolve() {
    for (auto& s : searches_) s->refine(width_);
    EpsilonL e;
    e.L = set_->L;
    e.lambda = lambda_;
    e.value = CertifiedValue{min_lo(), min_hi(), width_, "catalog-min"};
    e.argmin_patch = argmin_hi();
    return e;
}

bool gap_exceeds(LazyEpsilon& lazy, const OperatorSpec& op, double m, Complex lambda, double theta,
                 double* gap_lower) {
    const double delta = delta_L(op.dimension(), lazy.L(), m);
    if (!(delta < 1.0)) return false;
    const double M_shift = norm_shift_bound(op, lambda);
    // gap_bound(lo) > theta  <=>  lo > (theta + M_shift sqrt(delta)) / sqrt(1 - delta).
    if (!lazy.min_lo_above((theta + M_shift * std::sqrt(delta)) / std::sqrt(1.0 - delta))) return false;
    const double g = gap_bound(lazy.min_lo(), M_shift, delta);
    if (!(g > theta)) return false;
    if (gap_lower) *gap_lower = g;
    return true;
}

EpsilonL epsilon_L(const OperatorSpec& op, double L, Complex lambda, double width) {
    return LowerNormEngine(op).epsilon(L, lambda, width);
}

double choose_L(const OperatorSpec& op, Complex lambda, double tau) {
    return LowerNormEngine(op).choose_scale(lambda, tau).L;
}

RhoTilde rho_tilde(const OperatorSpec& op, Complex lambda, double tau) {
    return LowerNormEngine(op).rho_tilde(lambda, tau);
}

}  // namespace flc
