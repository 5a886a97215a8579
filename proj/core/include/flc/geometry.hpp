#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace flc {

using Complex = std::complex<double>;

/// Points closer than this to a ball boundary count as on the boundary (excluded).
inline constexpr double kBoundaryTolerance = 1e-12;

/// A point of R^n.
struct Point {
    std::vector<double> coords;

    std::size_t dim() const { return coords.size(); }
    bool operator==(const Point&) const = default;
};

/// Max-metric distance. Throws InputError on a dimension mismatch.
double max_dist(std::span<const double> a, std::span<const double> b);
double max_dist(const Point& a, const Point& b);

/// Open max-metric ball (an axis-aligned open cube).
struct Box {
    Point center;
    double radius = 0.0;

    /// Strict membership; points within kBoundaryTolerance of the boundary are outside.
    bool contains(std::span<const double> x) const;
    bool contains(const Point& x) const { return contains(std::span<const double>(x.coords)); }
};

/// Flat storage for N points of dimension n, in insertion order.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(int dimension) : dim_(dimension) {}

    int dimension() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    Point point(std::size_t i) const;
    void push_back(std::span<const double> x);
    void reserve(std::size_t n) { coords_.reserve(n * dim_); }
    const std::vector<double>& raw() const { return coords_; }

    bool operator==(const PointCloud&) const = default;

private:
    int dim_ = 0;
    std::vector<double> coords_;
};

/// Hausdorff distance between finite subsets of C in the Euclidean metric.
/// Throws InputError if either set is empty.
double euclidean_hausdorff(std::span<const Complex> a, std::span<const Complex> b);

/// sup over a in `a` of the Euclidean distance to `b`.
double directed_euclidean_hausdorff(std::span<const Complex> a, std::span<const Complex> b);

/// Euclidean distance from z to the nearest point of `set` (infinity if empty).
double distance_to_set(Complex z, std::span<const Complex> set);

/// Hausdorff distance between finite subsets of R^n in the max metric.
double max_metric_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);

/// A square lattice spacing * Z^2 restricted to a box, with integer indices.
/// Points are stored row-major: imaginary index outer, real index inner, both ascending.
struct ComplexGrid {
    double spacing = 0.0;
    long half_extent = 0;  // indices run over [-half_extent, half_extent]
    std::vector<Complex> points;

    std::size_t side() const { return static_cast<std::size_t>(2 * half_extent + 1); }
    long real_index(std::size_t k) const { return static_cast<long>(k % side()) - half_extent; }
    long imag_index(std::size_t k) const { return static_cast<long>(k / side()) - half_extent; }
    /// Covering radius of the full lattice: every point of C lies this close to a lattice point.
    double covering_radius() const;
};

/// spacing * Z^2 points whose closed covering-radius neighbourhood meets the closed box
/// [-bound, bound]^2. Every point of the box is within spacing/sqrt(2) of some returned point.
ComplexGrid covering_grid(double bound, double spacing);

/// The family (A_i, Z_i), i = 0..r-1, of grid sets used by the gap estimate.
/// J_i = [-m, m] + 2(L+m)(Z + i/r + 1/2),  A_i = {x : some x_k in J_i},
/// Z_i = 2(L+m)(Z^n + (i/r)(1,...,1)),  and the complement of A_i is the union of
/// the open boxes B_L(z), z in Z_i. The J_i are pairwise disjoint when L > (r-1)m.
class GridFamily {
public:
    GridFamily(int dimension, int r, double L, double m);

    int dimension() const { return n_; }
    int count() const { return r_; }
    double period() const { return 2.0 * (L_ + m_); }

    bool in_strip(int i, double u) const;                     // u in J_i
    bool in_A(int i, std::span<const double> x) const;        // x in A_i
    int membership_count(std::span<const double> x) const;    // #{i : x in A_i}
    /// The z in Z_i nearest to x (coordinatewise); x lies in B_L(z) iff x is outside A_i.
    Point nearest_center(int i, std::span<const double> x) const;
    double L() const { return L_; }
    double m() const { return m_; }

private:
    int n_;
    int r_;
    double L_;
    double m_;
};

/// Validates r >= 1, L > 0, m > 0 and L > (r-1)m, then builds the family.
/// Throws PreconditionError when the strips would overlap.
GridFamily disjoint_grid_family(int dimension, int r, double L, double m);

}  // namespace flc
