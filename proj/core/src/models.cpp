#include "flc/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "flc/errors.hpp"

namespace flc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
__extension__ using Int128 = __int128;

const std::vector<std::pair<ModelKind, std::string>>& kind_names() {
    static const std::vector<std::pair<ModelKind, std::string>> names = {
        {ModelKind::FreeLaplacian, "free-laplacian"}, {ModelKind::Periodic, "periodic"},
        {ModelKind::CutProject, "cut-project"},       {ModelKind::Jump, "jump"},
        {ModelKind::Hofstadter, "hofstadter"},        {ModelKind::Bernoulli, "bernoulli"},
        {ModelKind::PowerLaw, "power-law-decay"},
    };
    return names;
}

long floor_mod(long a, long b) {
    long r = a % b;
    return r < 0 ? r + b : r;
}

// Σ_{j>=1} j^-p from above: exact head plus integral tail.
double zeta_upper(double p) {
    if (!(p > 1.0)) throw InputError("power-law: exponent must exceed the dimension (1)");
    const int J = 1000;
    double s = 0.0;
    for (int j = 1; j <= J; ++j) s += std::pow(static_cast<double>(j), -p);
    return s + std::pow(static_cast<double>(J), 1.0 - p) / (p - 1.0);
}

// Hopping right(k) = H_{n, n+k}, left(k) = H_{n+k, n} of a 1D model.
Complex hop_right(const ModelDefinition& d, long k) {
    if (k <= 0) return 0.0;
    if (d.kind == ModelKind::PowerLaw) return d.amp_right * std::pow(static_cast<double>(k), -d.exponent);
    return k == 1 ? Complex(-d.hopping) : Complex(0.0);
}
Complex hop_left(const ModelDefinition& d, long k) {
    if (k <= 0) return 0.0;
    if (d.kind == ModelKind::PowerLaw) return d.amp_left * std::pow(static_cast<double>(k), -d.exponent);
    return k == 1 ? Complex(-d.hopping) : Complex(0.0);
}

// 64-bit mix for the Bernoulli realisation.
unsigned long long mix(unsigned long long x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int cut_project_letter(const Rotation& a, long n) {
    if (a.rational) {
        const auto [p, q] = *a.rational;
        // frac(n p/q) < q/p  <=>  (n p mod q) * p < q^2
        Int128 r = (static_cast<Int128>(n) * p) % q;
        if (r < 0) r += q;
        return r * p < static_cast<Int128>(q) * q ? 1 : 0;
    }
    long double x = static_cast<long double>(n) * a.value;
    long double f = x - std::floor(x);
    return f < 1.0L / a.value ? 1 : 0;
}

using Word = std::vector<Complex>;

struct WordLess {
    bool operator()(const Word& a, const Word& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](Complex x, Complex y) {
            return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
        });
    }
};

std::vector<Word> chain_words(const ModelDefinition& d, long W) {
    std::set<Word, WordLess> words;
    const Complex s = d.effective_shift();
    switch (d.kind) {
        case ModelKind::FreeLaplacian:
            words.insert(Word(W, s));
            break;
        case ModelKind::Periodic:
        case ModelKind::PowerLaw: {
            const long P = std::max<long>(1, static_cast<long>(d.potential.size()));
            for (long k = 0; k < P; ++k) {
                Word w(W);
                for (long j = 0; j < W; ++j) w[j] = onsite(d, k + j);
                words.insert(std::move(w));
            }
            break;
        }
        case ModelKind::CutProject: {
            for (const auto& letters : cut_project_words(parse_rotation(d.alpha), W)) {
                Word w(W);
                for (long j = 0; j < W; ++j) w[j] = s + d.amplitude * static_cast<double>(letters[j]);
                words.insert(std::move(w));
            }
            break;
        }
        case ModelKind::Jump:
            for (long a = 0; a <= W; ++a) {
                Word w(W, s);
                for (long j = 0; j < a; ++j) w[j] = s + d.amplitude;
                words.insert(std::move(w));
            }
            break;
        case ModelKind::Bernoulli: {
            if (W > 20) throw CertificationError("bernoulli: catalog of 2^" + std::to_string(W) + " words is too large");
            for (unsigned long bits = 0; bits < (1UL << W); ++bits) {
                Word w(W);
                for (long j = 0; j < W; ++j) w[j] = s + d.potential[(bits >> j) & 1UL];
                words.insert(std::move(w));
            }
            break;
        }
        case ModelKind::Hofstadter:
            throw InputError("chain_words: not a one-dimensional model");
    }
    return {words.begin(), words.end()};
}

// Ball cardinalities of Z ∩ (x - L, x + L) over real x: ceil(2L) - 1 and ceil(2L).
std::pair<long, long> window_sizes(double L) {
    const long c2 = static_cast<long>(std::ceil(2.0 * L));
    return {c2 - 1, c2};
}

class ChainOracle : public PatchOracle {
public:
    explicit ChainOracle(ModelDefinition d) : d_(std::move(d)) {}

    PatchCatalog catalog(double L, double max_hop) const override {
        PatchCatalog cat;
        cat.scale = L;
        cat.dimension = 1;
        cat.max_hop = max_hop;
        cat.complete = true;
        const auto [c1, c2] = window_sizes(L);
        for (long W : {c1, c2}) {
            if (W < 1) continue;
            long K = W - 1;
            if (std::isfinite(max_hop)) K = std::min<long>(K, static_cast<long>(std::floor(max_hop)));
            if (d_.kind != ModelKind::PowerLaw) K = std::min<long>(K, 1);
            for (auto& word : chain_words(d_, W)) {
                Patch p;
                p.id = cat.patches.size();
                p.points = PointCloud(1);
                p.points.reserve(W);
                for (long i = 0; i < W; ++i) {
                    double x = static_cast<double>(i);
                    p.points.push_back(std::span<const double>(&x, 1));
                }
                p.center = Point{{0.5 * static_cast<double>(W - 1)}};
                std::vector<Eigen::Triplet<Complex>> trip;
                trip.reserve(static_cast<std::size_t>(W) * (2 * K + 1));
                for (long i = 0; i < W; ++i) {
                    if (word[i] != Complex(0.0)) trip.emplace_back(i, i, word[i]);
                }
                for (long k = 1; k <= K; ++k) {
                    const Complex r = hop_right(d_, k), l = hop_left(d_, k);
                    for (long i = 0; i + k < W; ++i) {
                        if (r != Complex(0.0)) trip.emplace_back(i, i + k, r);
                        if (l != Complex(0.0)) trip.emplace_back(i + k, i, l);
                    }
                }
                p.matrix = SparseMatrix(W, W);
                p.matrix.setFromTriplets(trip.begin(), trip.end());
                p.dominated = (W == c1);
                cat.patches.push_back(std::move(p));
            }
        }
        return cat;
    }

private:
    ModelDefinition d_;
};

double flux_of(const ModelDefinition& d) {
    return d.kind == ModelKind::Hofstadter ? static_cast<double>(d.flux_p) / static_cast<double>(d.flux_q) : 0.0;
}

// Local matrix of a 2D model on the box [x0, x0+Wx) x [y0, y0+Wy), lexicographic order.
SparseMatrix box_matrix(const ModelDefinition& d, long x0, long y0, long Wx, long Wy, bool hops) {
    const double t = d.hopping;
    const Complex s = d.effective_shift();
    auto idx = [Wy](long ix, long iy) { return ix * Wy + iy; };
    std::vector<Eigen::Triplet<Complex>> trip;
    for (long ix = 0; ix < Wx; ++ix) {
        // Reduce x p mod q first so the phases are exactly q-periodic in x.
        long r = 0;
        if (d.kind == ModelKind::Hofstadter) {
            r = ((x0 + ix) * d.flux_p) % d.flux_q;
            if (r < 0) r += d.flux_q;
        }
        const Complex ph = std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(d.flux_q));
        for (long iy = 0; iy < Wy; ++iy) {
            if (s != Complex(0.0)) trip.emplace_back(idx(ix, iy), idx(ix, iy), s);
            if (!hops || t == 0.0) continue;
            if (ix + 1 < Wx) {
                trip.emplace_back(idx(ix, iy), idx(ix + 1, iy), -t);
                trip.emplace_back(idx(ix + 1, iy), idx(ix, iy), -t);
            }
            if (iy + 1 < Wy) {
                trip.emplace_back(idx(ix, iy), idx(ix, iy + 1), -t * ph);
                trip.emplace_back(idx(ix, iy + 1), idx(ix, iy), -t * std::conj(ph));
            }
        }
    }
    (void)y0;  // the Landau gauge is invariant under y translations
    SparseMatrix m(Wx * Wy, Wx * Wy);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

class SquareLatticeOracle : public PatchOracle {
public:
    explicit SquareLatticeOracle(ModelDefinition d) : d_(std::move(d)) {}

    PatchCatalog catalog(double L, double max_hop) const override {
        PatchCatalog cat;
        cat.scale = L;
        cat.dimension = 2;
        cat.max_hop = max_hop;
        cat.complete = true;
        const auto [c1, c2] = window_sizes(L);
        const long q = d_.kind == ModelKind::Hofstadter ? d_.flux_q : 1;
        for (long Wx : {c1, c2}) {
            for (long Wy : {c1, c2}) {
                if (Wx < 1 || Wy < 1) continue;
                for (long x0 = 0; x0 < q; ++x0) {
                    Patch p;
                    p.points = PointCloud(2);
                    for (long ix = 0; ix < Wx; ++ix) {
                        for (long iy = 0; iy < Wy; ++iy) {
                            double xy[2] = {static_cast<double>(ix), static_cast<double>(iy)};
                            p.points.push_back(xy);
                        }
                    }
                    p.center = Point{{0.5 * (Wx - 1), 0.5 * (Wy - 1)}};
                    p.matrix = box_matrix(d_, x0, 0, Wx, Wy, max_hop >= 1.0);
                    p.dominated = !(Wx == c2 && Wy == c2);
                    if (cat.find_equivalent(p.points, p.matrix)) continue;
                    p.id = cat.patches.size();
                    cat.patches.push_back(std::move(p));
                }
            }
        }
        return cat;
    }

private:
    ModelDefinition d_;
};

double max_onsite(const ModelDefinition& d) {
    const Complex s = d.effective_shift();
    switch (d.kind) {
        case ModelKind::FreeLaplacian:
        case ModelKind::Hofstadter:
            return std::abs(s);
        case ModelKind::CutProject:
        case ModelKind::Jump:
            return std::max(std::abs(s), std::abs(s + d.amplitude));
        case ModelKind::Periodic:
        case ModelKind::Bernoulli:
        case ModelKind::PowerLaw: {
            double m = d.potential.empty() ? std::abs(s) : 0.0;
            for (auto v : d.potential) m = std::max(m, std::abs(s + v));
            return m;
        }
    }
    return 0.0;
}

void validate(const ModelDefinition& d) {
    if (d.kind == ModelKind::FreeLaplacian) {
        if (d.dimension != 1 && d.dimension != 2) throw InputError("free-laplacian: dimension must be 1 or 2");
    } else if (d.kind == ModelKind::Hofstadter) {
        if (d.dimension != 2) throw InputError("hofstadter: dimension must be 2");
        if (d.flux_q < 1) throw InputError("hofstadter: flux denominator must be >= 1");
        if (std::gcd(d.flux_p, d.flux_q) != 1) throw InputError("hofstadter: flux must be in lowest terms");
    } else if (d.dimension != 1) {
        throw InputError(to_string(d.kind) + ": dimension must be 1");
    }
    if (!std::isfinite(d.hopping)) throw InputError("hopping must be finite");
    if ((d.kind == ModelKind::Periodic || d.kind == ModelKind::Bernoulli) && d.potential.empty()) {
        throw InputError(to_string(d.kind) + ": potential values required");
    }
    if (d.kind == ModelKind::Bernoulli && d.potential.size() != 2) {
        throw InputError("bernoulli: exactly two potential values required");
    }
    if (d.kind == ModelKind::CutProject) parse_rotation(d.alpha);
    if (d.kind == ModelKind::PowerLaw && !(d.exponent > 1.0)) {
        throw InputError("power-law: exponent must exceed the dimension (1)");
    }
    if (d.norm_bound && !(*d.norm_bound >= 0.0)) throw InputError("norm_bound override must be >= 0");
}

std::vector<double> sample_interval(double a, double b, double spacing) {
    std::vector<double> v;
    const long n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / spacing)));
    for (long i = 0; i <= n; ++i) v.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
    return v;
}

std::vector<std::pair<double, double>> merge(std::vector<std::pair<double, double>> iv) {
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> out;
    for (auto& x : iv) {
        if (!out.empty() && x.first <= out.back().second) {
            out.back().second = std::max(out.back().second, x.second);
        } else {
            out.push_back(x);
        }
    }
    return out;
}

Eigen::MatrixXcd periodic_bloch(const ModelDefinition& d, double k) {
    const long P = static_cast<long>(d.potential.size());
    const double t = d.hopping;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(P, P);
    for (long j = 0; j < P; ++j) h(j, j) = onsite(d, j);
    for (long j = 0; j + 1 < P; ++j) {
        h(j, j + 1) += -t;
        h(j + 1, j) += -t;
    }
    h(P - 1, 0) += -t * std::polar(1.0, k);
    h(0, P - 1) += -t * std::polar(1.0, -k);
    return h;
}

Eigen::MatrixXcd hofstadter_bloch(const ModelDefinition& d, double kx, double ky) {
    const long q = d.flux_q;
    const double t = d.hopping;
    const double phi = flux_of(d);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(q, q);
    for (long x = 0; x < q; ++x) {
        h(x, x) = d.effective_shift() - 2.0 * t * std::cos(ky + kTwoPi * phi * static_cast<double>(x));
    }
    for (long x = 0; x + 1 < q; ++x) {
        h(x, x + 1) += -t;
        h(x + 1, x) += -t;
    }
    h(q - 1, 0) += -t * std::polar(1.0, kx);
    h(0, q - 1) += -t * std::polar(1.0, -kx);
    return h;
}

}  // namespace

std::string to_string(ModelKind kind) {
    for (const auto& [k, n] : kind_names()) {
        if (k == kind) return n;
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
    for (const auto& [k, n] : kind_names()) {
        if (n == name) return k;
    }
    if (name == "power-law") return ModelKind::PowerLaw;
    throw InputError("unknown model kind '" + name + "'");
}

double ModelDefinition::effective_shift() const {
    if (shift) return *shift;
    if (kind == ModelKind::Hofstadter || kind == ModelKind::PowerLaw) return 0.0;
    return 2.0 * dimension;
}

Rotation parse_rotation(const std::string& alpha) {
    Rotation r;
    auto fail = [&]() { return InputError("cut-project: cannot parse alpha '" + alpha + "'"); };
    if (alpha == "golden") {
        r.value = (1.0L + std::sqrt(5.0L)) / 2.0L;
    } else if (alpha.rfind("irrational:", 0) == 0) {
        try {
            r.value = std::stold(alpha.substr(11));
        } catch (...) {
            throw fail();
        }
    } else if (auto slash = alpha.find('/'); slash != std::string::npos) {
        long long p = 0, q = 0;
        auto a = std::from_chars(alpha.data(), alpha.data() + slash, p);
        auto b = std::from_chars(alpha.data() + slash + 1, alpha.data() + alpha.size(), q);
        if (a.ec != std::errc() || b.ec != std::errc() || a.ptr != alpha.data() + slash ||
            b.ptr != alpha.data() + alpha.size() || q <= 0) {
            throw fail();
        }
        r.rational = {p, q};
    } else {
        // Exact decimal: digits[.digits]
        auto dot = alpha.find('.');
        std::string ip = alpha.substr(0, dot);
        std::string fp = dot == std::string::npos ? "" : alpha.substr(dot + 1);
        if (ip.empty() || fp.size() > 12 || !std::all_of(ip.begin(), ip.end(), ::isdigit) ||
            !std::all_of(fp.begin(), fp.end(), ::isdigit)) {
            throw fail();
        }
        long long q = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) q *= 10;
        long long p = std::stoll(ip + fp);
        r.rational = {p, q};
    }
    if (r.rational) {
        auto [p, q] = *r.rational;
        long long g = std::gcd(p, q);
        r.rational = std::make_pair(p / g, q / g);
        r.value = static_cast<long double>(p / g) / static_cast<long double>(q / g);
    }
    if (!(r.value > 1.0L)) throw InputError("cut-project: alpha must exceed 1");
    return r;
}

std::vector<std::vector<int>> cut_project_words(const Rotation& a, long w) {
    std::set<std::vector<int>> words;
    if (w <= 0) return {};
    if (a.rational) {
        // The sequence has period q; every window starts at some k in [0, q).
        const long q = static_cast<long>(a.rational->second);
        for (long k = 0; k < q; ++k) {
            std::vector<int> word(w);
            for (long j = 0; j < w; ++j) word[j] = cut_project_letter(a, k + j);
            words.insert(std::move(word));
        }
        return {words.begin(), words.end()};
    }
    // Letter j of the window at phase θ = frac(kα) is [frac(θ + jα) < 1/α]. All letters are
    // right-continuous in θ and constant between the breakpoints frac(-jα), frac(1/α - jα);
    // the orbit is dense, so the windows are exactly the words on the arcs between them.
    const long double beta = 1.0L / a.value;
    auto frac = [](long double x) { return x - std::floor(x); };
    std::vector<long double> bp;
    bp.reserve(2 * w);
    for (long j = 0; j < w; ++j) {
        bp.push_back(frac(-static_cast<long double>(j) * a.value));
        bp.push_back(frac(beta - static_cast<long double>(j) * a.value));
    }
    // Breakpoints that coincide exactly (e.g. 1/α = α - 1) differ here by rounding; merge them so
    // no sliver arc is sampled.
    constexpr long double kMerge = 1e-12L;
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(), [](long double x, long double y) { return y - x < kMerge; }),
             bp.end());
    while (bp.size() > 1 && bp.back() + kMerge > bp.front() + 1.0L) bp.pop_back();
    for (std::size_t i = 0; i < bp.size(); ++i) {
        long double lo = bp[i];
        long double hi = i + 1 < bp.size() ? bp[i + 1] : bp[0] + 1.0L;
        long double theta = frac(0.5L * (lo + hi));
        std::vector<int> word(w);
        for (long j = 0; j < w; ++j) {
            word[j] = frac(theta + static_cast<long double>(j) * a.value) < beta ? 1 : 0;
        }
        words.insert(std::move(word));
    }
    return {words.begin(), words.end()};
}

Complex onsite(const ModelDefinition& d, long n) {
    const Complex s = d.effective_shift();
    switch (d.kind) {
        case ModelKind::FreeLaplacian:
        case ModelKind::Hofstadter:
            return s;
        case ModelKind::Periodic:
        case ModelKind::PowerLaw:
            if (d.potential.empty()) return s;
            return s + d.potential[floor_mod(n, static_cast<long>(d.potential.size()))];
        case ModelKind::CutProject:
            return s + d.amplitude * static_cast<double>(cut_project_letter(parse_rotation(d.alpha), n));
        case ModelKind::Jump:
            return static_cast<double>(n) < d.jump_at ? s + d.amplitude : s;
        case ModelKind::Bernoulli:
            return s + d.potential[mix(d.seed ^ mix(static_cast<unsigned long long>(n))) & 1ULL];
    }
    return s;
}

OperatorSpec make_operator(const ModelDefinition& d) {
    validate(d);
    OperatorParams p;
    p.id = d.id.empty() ? to_string(d.kind) : d.id;
    p.dimension = d.dimension;
    p.separation = 1.0;
    bool real_onsite = true;
    if (d.kind == ModelKind::CutProject || d.kind == ModelKind::Jump) real_onsite = d.amplitude.imag() == 0.0;
    for (auto v : d.potential) real_onsite = real_onsite && v.imag() == 0.0;

    std::shared_ptr<const PatchOracle> oracle;
    if (d.kind == ModelKind::Hofstadter || (d.kind == ModelKind::FreeLaplacian && d.dimension == 2)) {
        oracle = std::make_shared<SquareLatticeOracle>(d);
        p.range = 1.0;
        p.norm_bound = max_onsite(d) + 4.0 * std::abs(d.hopping);
        p.normal = true;
    } else if (d.kind == ModelKind::PowerLaw) {
        oracle = std::make_shared<ChainOracle>(d);
        const double amp = std::max(std::abs(d.amp_right), std::abs(d.amp_left));
        p.decay = DecayBound{amp * std::pow(2.0, d.exponent), d.exponent - 1.0};
        p.norm_bound = max_onsite(d) + (std::abs(d.amp_right) + std::abs(d.amp_left)) * zeta_upper(d.exponent);
        const bool hermitian = real_onsite && d.amp_left == std::conj(d.amp_right);
        p.normal = hermitian || d.potential.size() <= 1;  // Laurent operators are normal
        p.trim_keeps_normal = p.normal;
    } else {
        oracle = std::make_shared<ChainOracle>(d);
        p.range = 1.0;
        p.norm_bound = max_onsite(d) + 2.0 * std::abs(d.hopping);
        p.normal = real_onsite;
    }
    if (d.norm_bound) p.norm_bound = *d.norm_bound;
    if (d.decay) p.decay = *d.decay;
    return OperatorSpec(std::move(p), std::move(oracle));
}

Eigen::MatrixXcd sample_section(const ModelDefinition& d, long size, const std::vector<long>& corner) {
    validate(d);
    if (size < 1) throw InputError("sample_section: size must be >= 1");
    if (!corner.empty() && corner.size() != static_cast<std::size_t>(d.dimension)) {
        throw InputError("sample_section: offset needs one entry per dimension");
    }
    const long offset = corner.empty() ? 0 : corner[0];
    if (d.dimension == 1) {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
        for (long i = 0; i < size; ++i) {
            h(i, i) = onsite(d, offset + i);
            for (long j = i + 1; j < size; ++j) {
                h(i, j) = hop_right(d, j - i);
                h(j, i) = hop_left(d, j - i);
            }
        }
        return h;
    }
    return Eigen::MatrixXcd(box_matrix(d, offset, corner.empty() ? 0 : corner[1], size, size, true));
}

double OracleSpectrum::distance(Complex z) const {
    if (!intervals.empty()) {
        double best = std::numeric_limits<double>::infinity();
        for (auto [a, b] : intervals) {
            double dx = std::max({a - z.real(), 0.0, z.real() - b});
            best = std::min(best, std::hypot(dx, z.imag()));
        }
        return best;
    }
    return distance_to_set(z, points);
}

OracleSpectrum oracle_spectrum(const ModelDefinition& d, double resolution) {
    validate(d);
    if (!(resolution > 0.0)) throw InputError("oracle_spectrum: resolution must be positive");
    OracleSpectrum o;
    o.resolution = resolution;
    const double t = std::abs(d.hopping);
    const double s = d.effective_shift();
    auto fill_from_intervals = [&]() {
        for (auto [a, b] : o.intervals) {
            for (double x : sample_interval(a, b, resolution)) o.points.emplace_back(x, 0.0);
        }
    };
    switch (d.kind) {
        case ModelKind::FreeLaplacian: {
            const double w = 2.0 * d.dimension * t;
            o.intervals = {{s - w, s + w}};
            fill_from_intervals();
            return o;
        }
        case ModelKind::Periodic: {
            for (auto v : d.potential) {
                if (v.imag() != 0.0) throw InputError("oracle_spectrum: complex potential is not self-adjoint");
            }
            const long P = static_cast<long>(d.potential.size());
            // Band edges of a periodic Jacobi matrix sit at k = 0 and k = pi.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e0(periodic_bloch(d, 0.0), Eigen::EigenvaluesOnly);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(periodic_bloch(d, std::numbers::pi),
                                                               Eigen::EigenvaluesOnly);
            std::vector<std::pair<double, double>> bands;
            for (long j = 0; j < P; ++j) {
                double a = e0.eigenvalues()(j), b = e1.eigenvalues()(j);
                bands.emplace_back(std::min(a, b), std::max(a, b));
            }
            o.intervals = merge(bands);
            // Points from a k-grid; eigenvalues are 2t-Lipschitz in k.
            const double h = t > 0.0 ? resolution / t : kTwoPi;
            const long nk = std::max<long>(1, static_cast<long>(std::ceil(kTwoPi / h)));
            for (long i = 0; i < nk; ++i) {
                double k = kTwoPi * static_cast<double>(i) / static_cast<double>(nk);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e(periodic_bloch(d, k), Eigen::EigenvaluesOnly);
                for (long j = 0; j < P; ++j) o.points.emplace_back(e.eigenvalues()(j), 0.0);
            }
            return o;
        }
        case ModelKind::Hofstadter: {
            const long q = d.flux_q;
            if (q == 1 || d.flux_p % q == 0) {
                o.intervals = {{s - 4.0 * t, s + 4.0 * t}};
                fill_from_intervals();
                return o;
            }
            if (q == 2) {
                // E = s ± 2t sqrt(cos^2 kx + cos^2 ky) covers [s - 2√2 t, s + 2√2 t].
                o.intervals = {{s - 2.0 * std::sqrt(2.0) * t, s + 2.0 * std::sqrt(2.0) * t}};
                fill_from_intervals();
                return o;
            }
            // Eigenvalues are 2t-Lipschitz in each of kx, ky.
            const double h = resolution / (2.0 * std::max(t, 1e-300));
            const long nk = std::max<long>(1, static_cast<long>(std::ceil(kTwoPi / h)));
            for (long i = 0; i < nk; ++i) {
                for (long j = 0; j < nk; ++j) {
                    double kx = kTwoPi * i / nk, ky = kTwoPi * j / nk;
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e(hofstadter_bloch(d, kx, ky),
                                                                      Eigen::EigenvaluesOnly);
                    for (long b = 0; b < q; ++b) o.points.emplace_back(e.eigenvalues()(b), 0.0);
                }
            }
            return o;
        }
        case ModelKind::PowerLaw: {
            if (d.potential.size() > 1) throw InputError("oracle_spectrum: power-law with a potential has no closed form");
            if (!(d.exponent > 2.0)) throw InputError("oracle_spectrum: power-law symbol needs exponent > 2");
            // Symbol f(k) = onsite + Σ_j (a_r e^{ijk} + a_l e^{-ijk}) j^-p, truncated at J.
            const double A = std::abs(d.amp_right) + std::abs(d.amp_left);
            long J = 1;
            while (A * std::pow(static_cast<double>(J), 1.0 - d.exponent) / (d.exponent - 1.0) > resolution / 2.0) J *= 2;
            const double lip = A * zeta_upper(d.exponent - 1.0);
            const double h = lip > 0.0 ? resolution / lip : kTwoPi;
            const long nk = std::max<long>(1, static_cast<long>(std::ceil(kTwoPi / h)));
            const Complex c = onsite(d, 0);
            for (long i = 0; i < nk; ++i) {
                double k = kTwoPi * static_cast<double>(i) / static_cast<double>(nk);
                Complex f = c;
                for (long j = 1; j <= J; ++j) {
                    double w = std::pow(static_cast<double>(j), -d.exponent);
                    f += (d.amp_right * std::polar(1.0, j * k) + d.amp_left * std::polar(1.0, -j * k)) * w;
                }
                o.points.push_back(f);
            }
            return o;
        }
        default:
            throw InputError("oracle_spectrum: no closed-form spectrum for " + to_string(d.kind));
    }
}

ModelDefinition builtin_model(const std::string& name) {
    ModelDefinition d;
    d.id = name;
    if (name == "free1d") {
        d.kind = ModelKind::FreeLaplacian;
    } else if (name == "free2d") {
        d.kind = ModelKind::FreeLaplacian;
        d.dimension = 2;
    } else if (name == "period2") {
        d.kind = ModelKind::Periodic;
        d.potential = {0.0, 2.0};
    } else if (name == "diagonal03") {
        d.kind = ModelKind::Periodic;
        d.potential = {0.0, 3.0};
        d.hopping = 0.0;
        d.shift = 0.0;
    } else if (name == "complex-rotation") {
        d.kind = ModelKind::CutProject;
        d.alpha = "1.66";
        d.amplitude = Complex(1.0, 1.0);
        d.shift = 0.0;
    } else if (name == "fibonacci") {
        d.kind = ModelKind::CutProject;
        d.alpha = "golden";
    } else if (name == "jump") {
        d.kind = ModelKind::Jump;
    } else if (name == "hofstadter-half") {
        d.kind = ModelKind::Hofstadter;
        d.dimension = 2;
        d.flux_p = 1;
        d.flux_q = 2;
    } else if (name == "bernoulli") {
        d.kind = ModelKind::Bernoulli;
        d.potential = {0.0, 1.0};
    } else if (name == "power-law") {
        d.kind = ModelKind::PowerLaw;
        d.exponent = 3.0;
    } else if (name == "power-law-weak") {
        d.kind = ModelKind::PowerLaw;
        d.exponent = 3.0;
        d.amp_right = d.amp_left = 0.25;
    } else if (name == "power-law-skew") {
        d.kind = ModelKind::PowerLaw;
        d.exponent = 2.5;
        d.amp_right = 0.3;
        d.amp_left = 0.1;
        d.potential = {0.0, 0.5};
    } else {
        throw InputError("unknown built-in model '" + name + "'");
    }
    return d;
}

std::vector<std::string> builtin_model_names() {
    return {"free1d", "free2d", "period2", "diagonal03", "complex-rotation", "fibonacci", "jump",
            "hofstadter-half", "bernoulli", "power-law", "power-law-weak", "power-law-skew"};
}

}  // namespace flc
