#include "monofv/grid.hpp"

#include <cmath>

namespace monofv {

std::string to_string(BoundarySide side) {
    switch (side) {
    case BoundarySide::West: return "west";
    case BoundarySide::East: return "east";
    case BoundarySide::South: return "south";
    case BoundarySide::North: return "north";
    }
    return "?";
}

namespace {

void check_lines(const std::vector<double>& lines, const char* name) {
    for (double v : lines) {
        if (!std::isfinite(v)) {
            throw GridError(std::string(name) + " contains a non-finite coordinate");
        }
    }
    for (std::size_t k = 1; k < lines.size(); ++k) {
        if (!(lines[k] > lines[k - 1])) {
            throw GridError(std::string(name) + " must be strictly increasing");
        }
    }
    if (lines.size() < 4) {
        throw GridError(std::string(name) +
                        ": a 9-point stencil needs at least 3 cells per axis");
    }
}

}  // namespace

Grid::Grid(std::vector<double> x_lines, std::vector<double> y_lines)
    : x_lines_(std::move(x_lines)), y_lines_(std::move(y_lines)) {
    check_lines(x_lines_, "x_lines");
    check_lines(y_lines_, "y_lines");
    nx_ = static_cast<int>(x_lines_.size()) - 1;
    ny_ = static_cast<int>(y_lines_.size()) - 1;

    xc_.resize(static_cast<std::size_t>(nx_));
    yc_.resize(static_cast<std::size_t>(ny_));
    for (int i = 0; i < nx_; ++i) xc_[i] = 0.5 * (x_lines_[i] + x_lines_[i + 1]);
    for (int j = 0; j < ny_; ++j) yc_[j] = 0.5 * (y_lines_[j] + y_lines_[j + 1]);

    interior_.reserve(static_cast<std::size_t>((nx_ - 1) * ny_ + nx_ * (ny_ - 1)));
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i + 1 < nx_; ++i) {
            interior_.push_back(Edge{Axis::X, id(i, j), id(i + 1, j), BoundarySide::West,
                                     dy(j), {x_lines_[i + 1], yc(j)}});
        }
    }
    for (int j = 0; j + 1 < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            interior_.push_back(Edge{Axis::Y, id(i, j), id(i, j + 1), BoundarySide::West,
                                     dx(i), {xc(i), y_lines_[j + 1]}});
        }
    }

    boundary_index_.assign(static_cast<std::size_t>(num_cells()), {-1, -1, -1, -1});
    auto add_boundary = [&](int cell, BoundarySide side, Axis normal, double len, Point p) {
        boundary_index_[cell][static_cast<int>(side)] = static_cast<int>(boundary_.size());
        boundary_.push_back(Edge{normal, cell, -1, side, len, p});
    };
    for (int j = 0; j < ny_; ++j) {
        add_boundary(id(0, j), BoundarySide::West, Axis::X, dy(j), {x_lines_.front(), yc(j)});
        add_boundary(id(nx_ - 1, j), BoundarySide::East, Axis::X, dy(j), {x_lines_.back(), yc(j)});
    }
    for (int i = 0; i < nx_; ++i) {
        add_boundary(id(i, 0), BoundarySide::South, Axis::Y, dx(i), {xc(i), y_lines_.front()});
        add_boundary(id(i, ny_ - 1), BoundarySide::North, Axis::Y, dx(i), {xc(i), y_lines_.back()});
    }
}

double Grid::domain_area() const {
    return (x_lines_.back() - x_lines_.front()) * (y_lines_.back() - y_lines_.front());
}

int Grid::neighbor(int cell, int di, int dj) const {
    const int i = i_of(cell) + di;
    const int j = j_of(cell) + dj;
    if (i < 0 || i >= nx_ || j < 0 || j >= ny_) return -1;
    return id(i, j);
}

bool Grid::has_full_stencil(int cell) const {
    const int i = i_of(cell);
    const int j = j_of(cell);
    return i > 0 && i + 1 < nx_ && j > 0 && j + 1 < ny_;
}

const Edge& Grid::boundary_edge(int cell, BoundarySide side) const {
    const int k = boundary_index_.at(static_cast<std::size_t>(cell))[static_cast<int>(side)];
    if (k < 0) {
        throw GridError("cell " + std::to_string(cell) + " does not touch the " +
                        to_string(side) + " boundary");
    }
    return boundary_[static_cast<std::size_t>(k)];
}

Neighbor Grid::transverse_neighbor(int cell, Axis normal, bool outward_positive,
                                   double dxy) const {
    const bool nonneg = dxy >= 0.0;
    const int step = (outward_positive == nonneg) ? +1 : -1;
    const int di = normal == Axis::X ? 0 : step;
    const int dj = normal == Axis::X ? step : 0;
    Neighbor n;
    n.cell = neighbor(cell, di, dj);
    if (n.cell < 0) {
        n.host = cell;
        if (normal == Axis::X) {
            n.side = step > 0 ? BoundarySide::North : BoundarySide::South;
        } else {
            n.side = step > 0 ? BoundarySide::East : BoundarySide::West;
        }
    }
    return n;
}

Neighbor Grid::transverse_neighbor(const Edge& edge, EdgeSide side, double dxy) const {
    if (edge.is_boundary()) throw GridError("transverse_neighbor expects an interior edge");
    return side == EdgeSide::Lower ? transverse_neighbor(edge.lower, edge.normal, true, dxy)
                                   : transverse_neighbor(edge.upper, edge.normal, false, dxy);
}

Point Grid::location(const Neighbor& n) const {
    if (n.is_cell()) return center(n.cell);
    return boundary_edge(n.host, n.side).mid;
}

Grid build_grid(std::vector<double> x_lines, std::vector<double> y_lines) {
    return Grid(std::move(x_lines), std::move(y_lines));
}

std::vector<double> linspace_lines(double a, double b, int n) {
    if (n < 1) throw GridError("linspace_lines: need at least one interval");
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) out[k] = a + (b - a) * static_cast<double>(k) / n;
    out.back() = b;
    return out;
}

Grid uniform_grid(double x0, double x1, double y0, double y1, int nx, int ny) {
    return Grid(linspace_lines(x0, x1, nx), linspace_lines(y0, y1, ny));
}

}  // namespace monofv
