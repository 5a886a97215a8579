#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

namespace flc {

namespace detail {
template <class S>
inline S conj_of(const S& x) {
    if constexpr (std::is_floating_point_v<S>) {
        return x;
    } else {
        return std::conj(x);
    }
}
template <class S>
inline double real_of(const S& x) {
    if constexpr (std::is_floating_point_v<S>) {
        return x;
    } else {
        return x.real();
    }
}
}  // namespace detail

/// Hermitian matrix with half-bandwidth b, lower band stored row by row:
/// at(i, k) = A(i, i - k) for 0 <= k <= b (entries with i - k < 0 are unused).
template <class S>
class HermitianBand {
public:
    HermitianBand() = default;
    HermitianBand(std::size_t n, std::size_t b) : n_(n), b_(b), data_(n * (b + 1), S(0)) {}

    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return b_; }
    S& at(std::size_t i, std::size_t k) { return data_[i * (b_ + 1) + k]; }
    const S& at(std::size_t i, std::size_t k) const { return data_[i * (b_ + 1) + k]; }

    double max_diagonal() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i) m = std::max(m, std::abs(detail::real_of(at(i, 0))));
        return m;
    }
    double min_diagonal() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_; ++i) m = std::min(m, detail::real_of(at(i, 0)));
        return m;
    }

    /// Cholesky of A - shift*I with every pivot required to exceed `floor`.
    /// On success the lower factor is left in `factor` (same band layout).
    bool cholesky(double shift, double floor, std::vector<S>& factor) const {
        const std::size_t w = b_ + 1;
        factor.assign(n_ * w, S(0));
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j0 = i > b_ ? i - b_ : 0;
            S* Li = &factor[i * w];
            for (std::size_t j = j0; j <= i; ++j) {
                S s = at(i, i - j);
                const S* Lj = &factor[j * w];
                for (std::size_t k = j0; k < j; ++k) s -= Li[i - k] * detail::conj_of(Lj[j - k]);
                if (j < i) {
                    Li[i - j] = s / detail::real_of(Lj[0]);
                } else {
                    double d = detail::real_of(s) - shift;
                    if (!(d > floor)) return false;
                    Li[0] = S(std::sqrt(d));
                }
            }
        }
        return true;
    }

    /// Solves (L L^*) x = rhs in place for a factor produced by cholesky().
    void solve(const std::vector<S>& factor, std::vector<S>& x) const {
        const std::size_t w = b_ + 1;
        for (std::size_t i = 0; i < n_; ++i) {
            S s = x[i];
            const std::size_t j0 = i > b_ ? i - b_ : 0;
            for (std::size_t k = j0; k < i; ++k) s -= factor[i * w + (i - k)] * x[k];
            x[i] = s / detail::real_of(factor[i * w]);
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            S s = x[ii];
            const std::size_t k1 = std::min(n_ - 1, ii + b_);
            for (std::size_t k = ii + 1; k <= k1; ++k) s -= detail::conj_of(factor[k * w + (k - ii)]) * x[k];
            x[ii] = s / detail::real_of(factor[ii * w]);
        }
    }

private:
    std::size_t n_ = 0;
    std::size_t b_ = 0;
    std::vector<S> data_;
};

/// The floor below which a Cholesky pivot counts as a failure: dim * eps * max|diag|.
inline double pivot_floor(std::size_t dim, double max_diagonal) {
    return static_cast<double>(dim) * std::numeric_limits<double>::epsilon() * max_diagonal;
}

}  // namespace flc
