#include "monofv/flux_kernel.hpp"

#include <cmath>

namespace monofv {

namespace {

double along(Point p, Axis a) { return a == Axis::X ? p.x : p.y; }

double half_size(const Grid& g, int cell, Axis a) {
    return 0.5 * (a == Axis::X ? g.dx(g.i_of(cell)) : g.dy(g.j_of(cell)));
}

double normal_coeff(const Tensor2& d, Axis normal) { return normal == Axis::X ? d.xx : d.yy; }

SideKernel make_side(const Grid& g, const std::vector<Tensor2>& tensors,
                     const BoundaryConditions& bc, int cell, Axis normal,
                     bool outward_positive, double center_gap, double edge_gap,
                     double length) {
    const Tensor2& d = tensors[cell];
    const Axis t = other(normal);
    SideKernel s;
    s.cell = cell;
    s.dxy = d.xy;
    s.lambda = normal_coeff(d, normal) * length / center_gap;
    s.tau = normal_coeff(d, normal) * length / edge_gap;

    s.transverse.where = g.transverse_neighbor(cell, normal, outward_positive, d.xy);
    const Point pc = g.center(cell);
    const double h_self = half_size(g, cell, t);
    if (s.transverse.is_cell()) {
        const int tc = s.transverse.where.cell;
        const double gap = std::abs(along(g.center(tc), t) - along(pc, t));
        s.nu = std::abs(d.xy) * length / gap;
        s.eta = std::abs(d.xy) * length / h_self;
        const double k_self = normal_coeff(d, t) / h_self;
        const double k_other = normal_coeff(tensors[tc], t) / half_size(g, tc, t);
        s.tedge_w_self = k_self / (k_self + k_other);
        s.tedge_w_other = 1.0 - s.tedge_w_self;
    } else {
        const SideCondition& cond = bc[s.transverse.where.side];
        if (cond.kind == BcKind::NoFlux) {
            s.transverse.dropped = true;
        } else {
            const Point q = g.location(s.transverse.where);
            s.transverse.ghost = cond.value(q.x, q.y);
            s.nu = std::abs(d.xy) * length / std::abs(along(q, t) - along(pc, t));
            s.eta = std::abs(d.xy) * length / h_self;
        }
        s.tedge_w_self = 0.0;
        s.tedge_w_other = 0.0;
    }
    return s;
}

int side_slot(BoundarySide s) {
    switch (s) {
    case BoundarySide::East: return 0;
    case BoundarySide::North: return 1;
    case BoundarySide::West: return 2;
    case BoundarySide::South: return 3;
    }
    return 0;
}

}  // namespace

EdgeKernel EdgeKernel::mirrored() const {
    EdgeKernel m = *this;
    std::swap(m.lower, m.upper);
    std::swap(m.w_lower, m.w_upper);
    return m;
}

KernelSet build_kernels(const Grid& grid, const TensorField& d, const BoundaryConditions& bc) {
    KernelSet ks;
    const int n = grid.num_cells();
    ks.tensors.resize(n);
    for (int c = 0; c < n; ++c) ks.tensors[c] = d.checked(grid.center(c));
    ks.cell_edges.assign(n, {0, 0, 0, 0});

    const auto interior = grid.interior_edges();
    ks.interior.reserve(interior.size());
    for (std::size_t e = 0; e < interior.size(); ++e) {
        const Edge& edge = interior[e];
        const Axis a = edge.normal;
        const double xl = along(grid.center(edge.lower), a);
        const double xu = along(grid.center(edge.upper), a);
        const double xm = along(edge.mid, a);

        EdgeKernel k;
        k.edge = static_cast<int>(e);
        k.normal = a;
        k.lower = make_side(grid, ks.tensors, bc, edge.lower, a, true, xu - xl, xm - xl, edge.length);
        k.upper = make_side(grid, ks.tensors, bc, edge.upper, a, false, xu - xl, xu - xm, edge.length);
        k.w_lower = k.lower.tau / (k.lower.tau + k.upper.tau);
        k.w_upper = 1.0 - k.w_lower;
        ks.interior.push_back(k);

        const int idx = static_cast<int>(e);
        if (a == Axis::X) {
            ks.cell_edges[edge.lower][0] = idx;
            ks.cell_edges[edge.upper][2] = idx;
        } else {
            ks.cell_edges[edge.lower][1] = idx;
            ks.cell_edges[edge.upper][3] = idx;
        }
    }

    const auto boundary = grid.boundary_edges();
    ks.boundary.reserve(boundary.size());
    for (std::size_t e = 0; e < boundary.size(); ++e) {
        const Edge& edge = boundary[e];
        const Axis a = edge.normal;
        const bool positive = edge.side == BoundarySide::East || edge.side == BoundarySide::North;
        const double gap = std::abs(along(edge.mid, a) - along(grid.center(edge.lower), a));

        BoundaryKernel b;
        b.edge = static_cast<int>(e);
        b.where = edge.side;
        b.kind = bc[edge.side].kind;
        b.value = b.kind == BcKind::Dirichlet ? bc[edge.side].value(edge.mid.x, edge.mid.y) : 0.0;
        b.side = make_side(grid, ks.tensors, bc, edge.lower, a, positive, gap, gap, edge.length);
        ks.boundary.push_back(b);
        ks.cell_edges[edge.lower][side_slot(edge.side)] = -(1 + static_cast<int>(e));
    }
    return ks;
}

}  // namespace monofv
