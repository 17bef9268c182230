#include "willmore/grid.hpp"

#include <cmath>
#include <string>

namespace willmore {

namespace {

std::string node_name(int i, int j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

Grid::Grid(double x_origin, double y_origin, double l1, double l2, int n1, int n2)
    : x0_(x_origin), y0_(y_origin), l1_(l1), l2_(l2), n1_(n1), n2_(n2), h1_(0.0), h2_(0.0) {
    if (n1 < 2 || n2 < 2) {
        throw ContractError("Grid: need at least 2 cells per axis, got " + std::to_string(n1) + " x " +
                            std::to_string(n2));
    }
    if (!(l1 > 0.0) || !(l2 > 0.0) || !std::isfinite(l1) || !std::isfinite(l2)) {
        throw ContractError("Grid: domain lengths must be positive and finite");
    }
    if (!std::isfinite(x_origin) || !std::isfinite(y_origin)) {
        throw ContractError("Grid: origin must be finite");
    }
    h1_ = l1 / n1;
    h2_ = l2 / n2;
}

Grid Grid::centered_square(double r, int n) {
    return Grid(-r, -r, 2.0 * r, 2.0 * r, n, n);
}

GridFunction::GridFunction(const Grid& grid, double fill) : grid_(grid), values_(grid.node_count(), fill) {}

GridFunction::GridFunction(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
        throw ContractError("GridFunction: expected " + std::to_string(grid_.node_count()) + " values, got " +
                            std::to_string(values_.size()));
    }
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(double, double)>& f) {
    GridFunction u(grid);
    for (int j = 0; j <= grid.n2(); ++j) {
        for (int i = 0; i <= grid.n1(); ++i) {
            u(i, j) = f(grid.x(i), grid.y(j));
        }
    }
    return u;
}

double GridFunction::at(int i, int j) const {
    if (!grid_.in_closure(i, j)) {
        throw StencilError("node " + node_name(i, j) + " is outside the grid closure", i, j);
    }
    return (*this)(i, j);
}

bool GridFunction::all_finite() const noexcept {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (!(grid_ == other.grid_)) throw ContractError("GridFunction: grid mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

GridFunction& GridFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

int EdgeId::neighbor_i() const noexcept {
    switch (dir) {
        case Direction::East: return i + 1;
        case Direction::West: return i - 1;
        default: return i;
    }
}

int EdgeId::neighbor_j() const noexcept {
    switch (dir) {
        case Direction::North: return j + 1;
        case Direction::South: return j - 1;
        default: return j;
    }
}

double corner_average(const GridFunction& u, int i, int j, int sx, int sy) {
    if ((sx != 1 && sx != -1) || (sy != 1 && sy != -1)) {
        throw ContractError("corner_average: signs must be +1 or -1");
    }
    return 0.25 * (u.at(i, j) + u.at(i + sx, j) + u.at(i, j + sy) + u.at(i + sx, j + sy));
}

GradientVec edge_gradient(const GridFunction& u, const EdgeId& e) {
    const Grid& g = u.grid();
    // Shift W/S edges to the E/N edge of the neighbor; the stencils coincide.
    int i = e.i;
    int j = e.j;
    const bool horizontal = e.dir == Direction::East || e.dir == Direction::West;
    if (e.dir == Direction::West) i -= 1;
    if (e.dir == Direction::South) j -= 1;

    const int i_lo = horizontal ? i : i - 1;
    const int j_lo = horizontal ? j - 1 : j;
    const int i_hi = i + 1;
    const int j_hi = j + 1;
    for (int jj : {j_lo, j_hi}) {
        for (int ii : {i_lo, i_hi}) {
            if (!g.in_closure(ii, jj)) {
                throw StencilError("edge stencil of node " + node_name(e.i, e.j) + " touches " +
                                       node_name(ii, jj) + " outside the closure; apply boundary values first",
                                   ii, jj);
            }
        }
    }
    const std::size_t stride = static_cast<std::size_t>(g.n1() + 1);
    const std::size_t k = g.index(i, j);
    return horizontal ? detail::x_edge_gradient(u.values(), stride, k, g.h1(), g.h2())
                      : detail::y_edge_gradient(u.values(), stride, k, g.h1(), g.h2());
}

}  // namespace willmore
