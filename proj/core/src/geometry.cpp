#include "flc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "flc/errors.hpp"

namespace flc {

double max_dist(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InputError("max_dist: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

double max_dist(const Point& a, const Point& b) { return max_dist(a.coords, b.coords); }

bool Box::contains(std::span<const double> x) const {
    return max_dist(x, center.coords) < radius - kBoundaryTolerance;
}

Point PointCloud::point(std::size_t i) const {
    auto s = (*this)[i];
    return Point{std::vector<double>(s.begin(), s.end())};
}

void PointCloud::push_back(std::span<const double> x) {
    if (static_cast<int>(x.size()) != dim_) throw InputError("PointCloud: dimension mismatch");
    coords_.insert(coords_.end(), x.begin(), x.end());
}

namespace {

// Bucket grid over a point set for nearest-neighbour queries.
class NearestIndex {
public:
    explicit NearestIndex(std::span<const Complex> pts) : pts_(pts) {
        double xmin = pts[0].real(), xmax = xmin, ymin = pts[0].imag(), ymax = ymin;
        for (auto z : pts) {
            xmin = std::min(xmin, z.real());
            xmax = std::max(xmax, z.real());
            ymin = std::min(ymin, z.imag());
            ymax = std::max(ymax, z.imag());
        }
        double extent = std::max({xmax - xmin, ymax - ymin, 1e-9});
        cell_ = extent / std::max(1.0, std::sqrt(static_cast<double>(pts.size())));
        for (std::size_t k = 0; k < pts.size(); ++k) buckets_[key(cell_of(pts[k]))].push_back(k);
    }

    double distance(Complex z) const {
        auto [cx, cy] = cell_of(z);
        double best = std::numeric_limits<double>::infinity();
        for (long ring = 0;; ++ring) {
            // Any point in ring r or beyond is at least (r-1)*cell away.
            if (ring >= 1 && (ring - 1) * cell_ > best) break;
            for (long dx = -ring; dx <= ring; ++dx) {
                for (long dy = -ring; dy <= ring; ++dy) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    auto it = buckets_.find(key({cx + dx, cy + dy}));
                    if (it == buckets_.end()) continue;
                    for (auto k : it->second) best = std::min(best, std::abs(z - pts_[k]));
                }
            }
            if (ring > max_ring_) break;
        }
        return best;
    }

private:
    std::pair<long, long> cell_of(Complex z) const {
        return {static_cast<long>(std::floor(z.real() / cell_)),
                static_cast<long>(std::floor(z.imag() / cell_))};
    }
    static long long key(std::pair<long, long> c) {
        return (static_cast<long long>(c.first) << 32) ^ (static_cast<long long>(c.second) & 0xffffffffLL);
    }

    std::span<const Complex> pts_;
    double cell_ = 1.0;
    std::unordered_map<long long, std::vector<std::size_t>> buckets_;
    long max_ring_ = 1L << 22;
};

}  // namespace

double distance_to_set(Complex z, std::span<const Complex> set) {
    double best = std::numeric_limits<double>::infinity();
    for (auto w : set) best = std::min(best, std::abs(z - w));
    return best;
}

double directed_euclidean_hausdorff(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.empty() || b.empty()) throw InputError("hausdorff: empty set");
    double d = 0.0;
    if (a.size() * b.size() <= 1'000'000) {
        for (auto z : a) d = std::max(d, distance_to_set(z, b));
        return d;
    }
    NearestIndex index(b);
    for (auto z : a) d = std::max(d, index.distance(z));
    return d;
}

double euclidean_hausdorff(std::span<const Complex> a, std::span<const Complex> b) {
    return std::max(directed_euclidean_hausdorff(a, b), directed_euclidean_hausdorff(b, a));
}

double max_metric_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.empty() || b.empty()) throw InputError("hausdorff: empty set");
    auto directed = [](const std::vector<Point>& x, const std::vector<Point>& y) {
        double d = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, max_dist(p, q));
            d = std::max(d, best);
        }
        return d;
    };
    return std::max(directed(a, b), directed(b, a));
}

double ComplexGrid::covering_radius() const { return spacing / std::sqrt(2.0); }

ComplexGrid covering_grid(double bound, double spacing) {
    if (!(spacing > 0.0) || !(bound >= 0.0) || !std::isfinite(bound)) {
        throw InputError("covering_grid: need spacing > 0 and finite bound >= 0");
    }
    ComplexGrid g;
    g.spacing = spacing;
    // Nearest lattice index of any |x| <= bound has |index| <= ceil(bound/spacing).
    g.half_extent = static_cast<long>(std::ceil(bound / spacing - 1e-12));
    const long K = g.half_extent;
    g.points.reserve(g.side() * g.side());
    for (long j = -K; j <= K; ++j) {
        for (long i = -K; i <= K; ++i) g.points.emplace_back(i * spacing, j * spacing);
    }
    return g;
}

GridFamily::GridFamily(int dimension, int r, double L, double m)
    : n_(dimension), r_(r), L_(L), m_(m) {}

namespace {
// Distance from u to the lattice period*Z shifted by offset.
double lattice_gap(double u, double period, double offset) {
    double t = (u - offset) / period;
    return std::abs(t - std::round(t)) * period;
}
}  // namespace

bool GridFamily::in_strip(int i, double u) const {
    const double P = period();
    // Closed strips; the tolerance matches the open boxes of the complement.
    return lattice_gap(u, P, P * (static_cast<double>(i) / r_ + 0.5)) <= m_ + kBoundaryTolerance;
}

bool GridFamily::in_A(int i, std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw InputError("GridFamily: dimension mismatch");
    for (double u : x) {
        if (in_strip(i, u)) return true;
    }
    return false;
}

int GridFamily::membership_count(std::span<const double> x) const {
    int c = 0;
    for (int i = 0; i < r_; ++i) c += in_A(i, x) ? 1 : 0;
    return c;
}

Point GridFamily::nearest_center(int i, std::span<const double> x) const {
    const double P = period();
    const double offset = P * static_cast<double>(i) / r_;
    Point z;
    for (double u : x) z.coords.push_back(offset + P * std::round((u - offset) / P));
    return z;
}

GridFamily disjoint_grid_family(int dimension, int r, double L, double m) {
    if (dimension < 1) throw InputError("grid family: dimension must be >= 1");
    if (r < 1) throw InputError("grid family: r must be >= 1");
    if (!(L > 0.0) || !(m > 0.0)) throw InputError("grid family: L and m must be positive");
    if (!(L > (r - 1) * m)) {
        throw PreconditionError("grid family: strips overlap unless L > (r-1)m");
    }
    return GridFamily(dimension, r, L, m);
}

}  // namespace flc
