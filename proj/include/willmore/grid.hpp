#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "willmore/error.hpp"

namespace willmore {

/// Slope vector (p1, p2) of a graph; the third component of the normal is fixed at -1.
struct GradientVec {
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Uniform rectangular node lattice on [x0, x0 + l1] x [y0, y0 + l2].
///
/// Nodes are (i, j) with 0 <= i <= n1, 0 <= j <= n2; the interior is
/// {1..n1-1} x {1..n2-1}. Each interior node owns the dual finite volume
/// [x_i - h1/2, x_i + h1/2] x [y_j - h2/2, y_j + h2/2].
class Grid {
public:
    Grid(double x_origin, double y_origin, double l1, double l2, int n1, int n2);

    /// [-r, r]^2 split into n x n cells.
    static Grid centered_square(double r, int n);

    int n1() const noexcept { return n1_; }
    int n2() const noexcept { return n2_; }
    double l1() const noexcept { return l1_; }
    double l2() const noexcept { return l2_; }
    double h1() const noexcept { return h1_; }
    double h2() const noexcept { return h2_; }
    double x_origin() const noexcept { return x0_; }
    double y_origin() const noexcept { return y0_; }

    double x(int i) const noexcept { return x0_ + i * h1_; }
    double y(int j) const noexcept { return y0_ + j * h2_; }

    bool in_closure(int i, int j) const noexcept {
        return i >= 0 && i <= n1_ && j >= 0 && j <= n2_;
    }
    bool is_interior(int i, int j) const noexcept {
        return i >= 1 && i < n1_ && j >= 1 && j < n2_;
    }
    bool is_boundary(int i, int j) const noexcept {
        return in_closure(i, j) && !is_interior(i, j);
    }

    // j outer, i inner
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n1_ + 1) +
               static_cast<std::size_t>(i);
    }
    std::size_t node_count() const noexcept {
        return static_cast<std::size_t>(n1_ + 1) * static_cast<std::size_t>(n2_ + 1);
    }
    std::size_t boundary_node_count() const noexcept {
        return node_count() - static_cast<std::size_t>(n1_ - 1) * static_cast<std::size_t>(n2_ - 1);
    }

    bool operator==(const Grid&) const = default;

private:
    double x0_;
    double y0_;
    double l1_;
    double l2_;
    int n1_;
    int n2_;
    double h1_;
    double h2_;
};

/// Scalar nodal field on the closure of a grid.
class GridFunction {
public:
    explicit GridFunction(const Grid& grid, double fill = 0.0);
    GridFunction(const Grid& grid, std::vector<double> values);

    static GridFunction sample(const Grid& grid, const std::function<double(double, double)>& f);

    const Grid& grid() const noexcept { return grid_; }

    double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
    double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }

    /// Bounds-checked access; throws StencilError outside the closure.
    double at(int i, int j) const;

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool all_finite() const noexcept;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator*=(double s);

private:
    Grid grid_;
    std::vector<double> values_;
};

enum class Direction { East, North, West, South };

/// One of the four segments bounding the dual volume of node (i, j).
struct EdgeId {
    int i;
    int j;
    Direction dir;

    int neighbor_i() const noexcept;
    int neighbor_j() const noexcept;
};

/// Four-point average over the dual-volume corner between (i, j) and (i+sx, j+sy).
double corner_average(const GridFunction& u, int i, int j, int sx, int sy);

/// Gradient of u at the midpoint of edge e: two-point difference across the
/// edge, corner-average difference along it.
GradientVec edge_gradient(const GridFunction& u, const EdgeId& e);

namespace detail {

// Unchecked kernels shared by the assembled operators. Callers guarantee the
// stencil lies in the closure.

/// Gradient on the edge between node k and its east neighbor k+1.
inline GradientVec x_edge_gradient(std::span<const double> v, std::size_t stride, std::size_t k,
                                   double h1, double h2) {
    const double dx = (v[k + 1] - v[k]) / h1;
    // (corner(+,+) - corner(+,-)) / h2 simplifies to a six-point difference
    const double up = 0.25 * (v[k] + v[k + 1] + v[k + stride] + v[k + 1 + stride]);
    const double dn = 0.25 * (v[k] + v[k + 1] + v[k - stride] + v[k + 1 - stride]);
    return {dx, (up - dn) / h2};
}

/// Gradient on the edge between node k and its north neighbor k+stride.
inline GradientVec y_edge_gradient(std::span<const double> v, std::size_t stride, std::size_t k,
                                   double h1, double h2) {
    const double dy = (v[k + stride] - v[k]) / h2;
    const double rt = 0.25 * (v[k] + v[k + stride] + v[k + 1] + v[k + 1 + stride]);
    const double lt = 0.25 * (v[k] + v[k + stride] + v[k - 1] + v[k - 1 + stride]);
    return {(rt - lt) / h1, dy};
}

}  // namespace detail

}  // namespace willmore
