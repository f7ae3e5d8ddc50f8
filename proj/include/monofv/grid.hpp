#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monofv {

/// Raised for malformed meshes (non-monotone lines, too few cells).
class GridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Axis { X, Y };

inline Axis other(Axis a) { return a == Axis::X ? Axis::Y : Axis::X; }

/// Sides of the rectangular domain.
enum class BoundarySide { West = 0, East = 1, South = 2, North = 3 };

std::string to_string(BoundarySide side);

/// Which cell of an interior edge: Lower is the left (vertical edge) or bottom
/// (horizontal edge) cell, Upper the right or top one.
enum class EdgeSide { Lower, Upper };

/// A stencil reference that is either a mesh cell or a point on a boundary
/// edge (used when an upwind transverse difference leaves the mesh).
struct Neighbor {
    int cell = -1;
    BoundarySide side = BoundarySide::West;
    /// Cell whose boundary edge hosts the ghost point.
    int host = -1;

    bool is_cell() const { return cell >= 0; }
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Edge of the mesh. Interior edges carry both cells; boundary edges only the
/// owner (lower == owner, upper == -1).
struct Edge {
    Axis normal = Axis::X;  ///< X: vertical edge, Y: horizontal edge
    int lower = -1;
    int upper = -1;
    BoundarySide side = BoundarySide::West;  ///< meaningful for boundary edges
    double length = 0.0;
    Point mid;  ///< intersection with the line joining adjacent centers

    bool is_boundary() const { return upper < 0; }
};

/// Nonuniform tensor-product Cartesian mesh.
///
/// Cells are numbered row-major from the lower-left corner:
/// id = j * nx + i, with i running along x. Cell centers are the geometric
/// centers, so centers in a row share y and centers in a column share x.
/// Immutable after construction.
class Grid {
public:
    Grid(std::vector<double> x_lines, std::vector<double> y_lines);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int num_cells() const { return nx_ * ny_; }

    int id(int i, int j) const { return j * nx_ + i; }
    int i_of(int cell) const { return cell % nx_; }
    int j_of(int cell) const { return cell / nx_; }

    std::span<const double> x_lines() const { return x_lines_; }
    std::span<const double> y_lines() const { return y_lines_; }

    double xc(int i) const { return xc_[static_cast<std::size_t>(i)]; }
    double yc(int j) const { return yc_[static_cast<std::size_t>(j)]; }
    Point center(int cell) const { return {xc(i_of(cell)), yc(j_of(cell))}; }

    double dx(int i) const { return x_lines_[i + 1] - x_lines_[i]; }
    double dy(int j) const { return y_lines_[j + 1] - y_lines_[j]; }
    double area(int cell) const { return dx(i_of(cell)) * dy(j_of(cell)); }
    double domain_area() const;

    std::span<const Edge> interior_edges() const { return interior_; }
    std::span<const Edge> boundary_edges() const { return boundary_; }

    /// Neighbor of `cell` in direction (di, dj) with |di|,|dj| <= 1, or -1.
    int neighbor(int cell, int di, int dj) const;

    /// Whether (i, j) has all eight surrounding cells inside the mesh.
    bool has_full_stencil(int cell) const;

    /// Boundary edge of `cell` on the given domain side.
    /// Precondition: the cell touches that side.
    const Edge& boundary_edge(int cell, BoundarySide side) const;

    /// Upwind transverse neighbor for the one-sided flux built in `cell` across
    /// an edge of normal axis `normal`. `outward_positive` tells whether the
    /// cell's outward normal on that edge points along +normal. Zero cross
    /// diffusion is folded into the nonnegative branch.
    Neighbor transverse_neighbor(int cell, Axis normal, bool outward_positive,
                                 double dxy) const;

    /// Transverse neighbor of one side of an interior edge.
    Neighbor transverse_neighbor(const Edge& edge, EdgeSide side, double dxy) const;

    /// Point where a Neighbor lives (cell center or boundary edge midpoint).
    Point location(const Neighbor& n) const;

private:
    std::vector<double> x_lines_;
    std::vector<double> y_lines_;
    std::vector<double> xc_;
    std::vector<double> yc_;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<Edge> interior_;
    std::vector<Edge> boundary_;
    // [cell][side] -> index into boundary_, or -1
    std::vector<std::array<int, 4>> boundary_index_;
};

Grid build_grid(std::vector<double> x_lines, std::vector<double> y_lines);

/// Uniform nx x ny partition of [x0,x1] x [y0,y1].
Grid uniform_grid(double x0, double x1, double y0, double y1, int nx, int ny);

/// Evenly spaced coordinates a = t_0 < ... < t_n = b.
std::vector<double> linspace_lines(double a, double b, int n);

}  // namespace monofv
