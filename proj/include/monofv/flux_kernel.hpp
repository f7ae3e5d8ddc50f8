#pragma once

#include "monofv/grid.hpp"
#include "monofv/problems.hpp"

#include <span>
#include <vector>

namespace monofv {

/// Where the transverse difference of a one-sided flux points, and how to
/// read its value from a frozen state.
struct TransverseRef {
    Neighbor where;
    bool dropped = false;  ///< ghost on a no-flux side: branch removed
    double ghost = 0.0;    ///< Dirichlet value when `where` is a boundary point

    bool is_cell() const { return where.is_cell(); }
    double value(std::span<const double> state) const {
        return where.is_cell() ? state[where.cell] : ghost;
    }
};

/// One-sided linear flux data of a cell across one of its edges.
///
/// Cell-centered form (outward from `cell`):
///   lambda * (f_cell - f_other) + nu * (f_cell - f_T)
/// Edge-unknown form, used by NLTPFA:
///   tau * (f_cell - f_edge) + eta * (f_cell - f_Tedge)
struct SideKernel {
    int cell = -1;
    double dxy = 0.0;
    double lambda = 0.0;  ///< D_nn |sigma| / center-to-center gap
    double nu = 0.0;      ///< |D_xy| |sigma| / transverse center gap
    TransverseRef transverse;
    double tau = 0.0;  ///< D_nn |sigma| / center-to-edge gap
    double eta = 0.0;  ///< |D_xy| |sigma| / center-to-transverse-edge gap
    /// Value on the transverse edge: w_self * f_cell + w_other * f_T, or the
    /// ghost value when the transverse edge is on the boundary.
    double tedge_w_self = 0.5;
    double tedge_w_other = 0.5;

    double tedge_value(std::span<const double> state) const {
        if (!transverse.is_cell()) return transverse.ghost;
        return tedge_w_self * state[cell] + tedge_w_other * state[transverse.where.cell];
    }
};

/// Linear flux ingredients of an interior edge. Side 1 (F1) is the lower
/// (left/bottom) cell, side 2 (F2) the upper (right/top) one.
struct EdgeKernel {
    int edge = -1;  ///< index into Grid::interior_edges()
    Axis normal = Axis::X;
    SideKernel lower;
    SideKernel upper;
    double w_lower = 0.5;  ///< edge value interpolation, tau-weighted
    double w_upper = 0.5;

    const SideKernel& side(EdgeSide s) const { return s == EdgeSide::Lower ? lower : upper; }
    double edge_value(std::span<const double> state) const {
        return w_lower * state[lower.cell] + w_upper * state[upper.cell];
    }
    /// The same edge seen from the upper cell (roles 1 and 2 swapped).
    EdgeKernel mirrored() const;
};

/// Closure of a boundary edge of `side.cell`.
struct BoundaryKernel {
    int edge = -1;  ///< index into Grid::boundary_edges()
    BoundarySide where = BoundarySide::West;
    BcKind kind = BcKind::Dirichlet;
    double value = 0.0;  ///< Dirichlet value at the edge midpoint
    SideKernel side;     ///< lambda == tau here: the "other" point is the edge midpoint
};

struct KernelSet {
    std::vector<EdgeKernel> interior;
    std::vector<BoundaryKernel> boundary;
    std::vector<Tensor2> tensors;  ///< D at each cell center

    /// kernel index of the four edges of a cell: east, north, west, south,
    /// encoded as >= 0 interior index, or -(1 + boundary index).
    std::vector<std::array<int, 4>> cell_edges;
};

/// Evaluates D at every center (TensorError on SPD violations) and builds one
/// kernel per interior edge plus one closure per boundary edge.
KernelSet build_kernels(const Grid& grid, const TensorField& d, const BoundaryConditions& bc);

}  // namespace monofv
