#include "monofv/flux_kernel.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace monofv;

TEST(Kernels, IdentityOnUniformGrid) {
    const Grid g = uniform_grid(0.0, 1.0, 0.0, 2.0, 4, 5);  // dx = 0.25, dy = 0.4
    const KernelSet ks = build_kernels(g, identity_tensor(), BoundaryConditions{});
    ASSERT_EQ(ks.interior.size(), g.interior_edges().size());
    ASSERT_EQ(ks.boundary.size(), g.boundary_edges().size());
    for (const EdgeKernel& k : ks.interior) {
        const double len = k.normal == Axis::X ? 0.4 : 0.25;
        const double gap = k.normal == Axis::X ? 0.25 : 0.4;
        EXPECT_DOUBLE_EQ(k.lower.lambda, len / gap);
        EXPECT_DOUBLE_EQ(k.upper.lambda, len / gap);
        EXPECT_NEAR(k.lower.tau, 2.0 * len / gap, 1e-14);
        EXPECT_EQ(k.lower.nu, 0.0);
        EXPECT_EQ(k.upper.eta, 0.0);
        EXPECT_NEAR(k.w_lower, 0.5, 1e-14);
    }
    for (const BoundaryKernel& b : ks.boundary) {
        EXPECT_DOUBLE_EQ(b.side.lambda, b.side.tau);
        EXPECT_EQ(b.kind, BcKind::Dirichlet);
    }
}

TEST(Kernels, CellEdgeIndex) {
    const Grid g = uniform_grid(0.0, 1.0, 0.0, 1.0, 3, 4);
    const KernelSet ks = build_kernels(g, identity_tensor(), BoundaryConditions{});
    for (int c = 0; c < g.num_cells(); ++c) {
        for (int s = 0; s < 4; ++s) {
            const int e = ks.cell_edges[c][s];
            if (e >= 0) {
                const EdgeKernel& k = ks.interior[e];
                EXPECT_TRUE(k.lower.cell == c || k.upper.cell == c);
                // east/north are the lower side of their edge
                EXPECT_EQ(k.lower.cell == c, s == 0 || s == 1);
                EXPECT_EQ(k.normal == Axis::X, s == 0 || s == 2);
            } else {
                const BoundaryKernel& b = ks.boundary[-1 - e];
                EXPECT_EQ(b.side.cell, c);
                const BoundarySide want[4] = {BoundarySide::East, BoundarySide::North,
                                              BoundarySide::West, BoundarySide::South};
                EXPECT_EQ(b.where, want[s]);
            }
        }
    }
}

TEST(Kernels, TransverseAtBoundaries) {
    const Grid g = uniform_grid(0.0, 1.0, 0.0, 1.0, 3, 3);
    BoundaryConditions bc = BoundaryConditions::all_dirichlet([](double, double) { return 7.0; });
    bc[BoundarySide::North].kind = BcKind::NoFlux;
    const KernelSet ks = build_kernels(g, constant_tensor({2.0, 0.5, 1.0}), bc);
    int ghosts = 0;
    int dropped = 0;
    for (const EdgeKernel& k : ks.interior) {
        for (const SideKernel* s : {&k.lower, &k.upper}) {
            if (s->transverse.is_cell()) continue;
            if (s->transverse.dropped) {
                ++dropped;
                EXPECT_EQ(s->transverse.where.side, BoundarySide::North);
                EXPECT_EQ(s->nu, 0.0);
                EXPECT_EQ(s->eta, 0.0);
            } else {
                ++ghosts;
                EXPECT_EQ(s->transverse.ghost, 7.0);
                // gap to the boundary point is half a cell
                EXPECT_DOUBLE_EQ(s->nu, 0.5 * (1.0 / 3.0) / (1.0 / 6.0));
                EXPECT_EQ(s->tedge_value(std::vector<double>(9, 1.0)), 7.0);
            }
        }
    }
    EXPECT_GT(ghosts, 0);
    EXPECT_GT(dropped, 0);
}

TEST(Kernels, MirroredSwapsRoles) {
    std::mt19937_64 rng(11);
    auto rc = oracle::random_case(rng, 4, 4);
    const Grid g = oracle::grid_of(rc);
    const KernelSet ks = build_kernels(g, rc.bench.tensor, rc.bench.bc);
    std::vector<double> f(16);
    for (int k = 0; k < 16; ++k) f[k] = 1.0 + 0.1 * k;
    for (const EdgeKernel& k : ks.interior) {
        const EdgeKernel m = k.mirrored();
        EXPECT_EQ(m.lower.cell, k.upper.cell);
        EXPECT_EQ(m.upper.cell, k.lower.cell);
        EXPECT_EQ(m.w_lower, k.w_upper);
        EXPECT_NEAR(m.edge_value(f), k.edge_value(f), 1e-15);
        EXPECT_EQ(m.mirrored().lower.cell, k.lower.cell);
        EXPECT_NEAR(k.w_lower + k.w_upper, 1.0, 1e-15);
        EXPECT_GE(k.lower.tedge_w_self, 0.0);
        EXPECT_LE(k.lower.tedge_w_self, 1.0);
        // lambda uses the same center gap on both sides
        const Tensor2& dl = ks.tensors[k.lower.cell];
        const Tensor2& du = ks.tensors[k.upper.cell];
        const double nl = k.normal == Axis::X ? dl.xx : dl.yy;
        const double nu = k.normal == Axis::X ? du.xx : du.yy;
        EXPECT_NEAR(k.lower.lambda / nl, k.upper.lambda / nu, 1e-12 * k.lower.lambda / nl);
    }
}

TEST(Kernels, RejectsNonSpdTensor) {
    const Grid g = uniform_grid(0.0, 1.0, 0.0, 1.0, 3, 3);
    TensorField bad([](double x, double) { return x > 0.5 ? Tensor2{1.0, 2.0, 1.0} : Tensor2{}; },
                    1.0, "bad");
    EXPECT_THROW(build_kernels(g, bad, BoundaryConditions{}), TensorError);
}
