#include "monofv/schemes.hpp"

#include "monofv/config.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace monofv;

namespace {

std::vector<double> random_state(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> f(n);
    for (double& v : f) v = std::pow(10.0, 4.0 * u(rng) - 2.0);
    return f;
}

Discretization random_discretization(const oracle::RandomCase& rc) {
    return discretize(rc.bench, oracle::grid_of(rc));
}

}  // namespace

TEST(Weights, Nltpfa) {
    const EdgeWeights w = nltpfa_weights(3.0, 1.0);
    EXPECT_DOUBLE_EQ(w.mu1, 0.25);
    EXPECT_DOUBLE_EQ(w.mu2, 0.75);
    const EdgeWeights z = nltpfa_weights(0.0, 0.0);
    EXPECT_EQ(z.mu1, 0.5);
    EXPECT_EQ(z.mu2, 0.5);
    const EdgeWeights one = nltpfa_weights(0.0, 2.0);
    EXPECT_EQ(one.mu1, 1.0);
    EXPECT_EQ(one.mu2, 0.0);
}

TEST(Weights, Mpfa) {
    const EdgeWeights w = mpfa_weights(2.0, -6.0);
    EXPECT_DOUBLE_EQ(w.mu1, 0.75);
    EXPECT_DOUBLE_EQ(w.mu2, 0.25);
    EXPECT_EQ(mpfa_weights(0.0, 0.0).mu1, 0.5);
    // bracket mu1 G1 - mu2 G2 vanishes for equal signs
    const EdgeWeights s = mpfa_weights(2.0, 6.0);
    EXPECT_DOUBLE_EQ(s.mu1 * 2.0 - s.mu2 * 6.0, 0.0);
}

TEST(Schemes, Names) {
    EXPECT_EQ(parse_scheme("nltpfa"), SchemeKind::NLTPFA);
    EXPECT_EQ(parse_scheme("NLMPFA"), SchemeKind::NLMPFA);
    EXPECT_EQ(parse_scheme("R-NLMPFA"), SchemeKind::RNLMPFA);
    EXPECT_EQ(parse_scheme("rnlmpfa"), SchemeKind::RNLMPFA);
    EXPECT_THROW(parse_scheme("tpfa"), ConfigError);
    EXPECT_EQ(to_string(SchemeKind::RNLMPFA), "R-NLMPFA");
}

TEST(Schemes, StencilSlots) {
    for (int k = 0; k < 9; ++k) EXPECT_EQ(stencil_slot(kStencil[k][0], kStencil[k][1]), k);
    EXPECT_EQ(stencil_slot(2, 0), -1);
    EXPECT_EQ(stencil_slot(1, 0), 1);   // E
    EXPECT_EQ(stencil_slot(-1, 1), 4);  // NW
    EXPECT_EQ(stencil_slot(1, -1), 8);  // SE
}

TEST(Assembly, IdentityGivesFivePointLaplacian) {
    BenchmarkCase c;
    c.tensor = identity_tensor();
    c.bc = BoundaryConditions::all_dirichlet([](double, double) { return 0.0; });
    const Discretization d = discretize(c, uniform_grid(0.0, 1.0, 0.0, 1.0, 5, 5));
    const std::vector<double> ones(25, 1.0);
    const CWeights cw = CWeights::shared(0.3, 0.2);
    for (SchemeKind s : kAllSchemes) {
        SCOPED_TRACE(to_string(s));
        const LinearizedSystem sys = assemble(s, d, ones, &cw);
        const int r = 12;  // center cell
        EXPECT_DOUBLE_EQ(sys.m[r][0], 4.0);
        for (int k : {1, 3, 5, 7}) EXPECT_DOUBLE_EQ(sys.m[r][k], -1.0);
        for (int k : {2, 4, 6, 8}) EXPECT_EQ(sys.m[r][k], 0.0);
        // corner cell: two Dirichlet half-cells
        EXPECT_DOUBLE_EQ(sys.m[0][0], 2.0 + 2.0 * 2.0);
        EXPECT_DOUBLE_EQ(sys.boundary_coeff[0], -4.0);
    }
}

TEST(Assembly, MatchesOracle) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int t = 0; t < 40; ++t) {
        const int n = 3 + t % 2;
        const auto rc = oracle::random_case(rng, n, n);
        const Discretization d = random_discretization(rc);
        const auto f = random_state(rng, n * n);
        CWeights cw{{u(rng), u(rng)}, {u(rng), u(rng)}};
        for (SchemeKind s : kAllSchemes) {
            SCOPED_TRACE(to_string(s) + " case " + std::to_string(t));
            const LinearizedSystem sys = assemble(s, d, f, &cw);
            const auto o = oracle::oracle_assemble(rc, s, f, cw.x, cw.y);
            EXPECT_LT(oracle::worst_row_mismatch(sys, o), 1e-12);
        }
    }
}

TEST(Assembly, NlmpfaRowsAreFivePoint) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        const auto rc = oracle::random_case(rng, 5, 4);
        const Discretization d = random_discretization(rc);
        const auto f = random_state(rng, 20);
        const LinearizedSystem sys = assemble(SchemeKind::NLMPFA, d, f);
        const LinearizedSystem tp = assemble(SchemeKind::NLTPFA, d, f);
        for (int r = 0; r < sys.size(); ++r) {
            for (int k : {2, 4, 6, 8}) {
                EXPECT_EQ(sys.m[r][k], 0.0);
                EXPECT_EQ(tp.m[r][k], 0.0);
            }
            EXPECT_LE(sys.nonzeros(r), 5);
            // off-diagonals of the two M-matrix schemes are nonpositive
            for (int k = 1; k < 9; ++k) {
                EXPECT_LE(sys.m[r][k], 0.0);
                EXPECT_LE(tp.m[r][k], 0.0);
            }
        }
    }
}

TEST(Assembly, RelaxedSchemeReachesCorners) {
    const Discretization d = discretize(make_case(catalog_case("minmax")), uniform_grid(0.0, 0.5, 0.0, 0.5, 6, 6));
    std::mt19937_64 rng(5);
    const auto f = random_state(rng, 36);
    const CWeights cw = CWeights::shared(0.2, 0.1);
    const LinearizedSystem sys = assemble(SchemeKind::RNLMPFA, d, f, &cw);
    int corners = 0;
    for (int r = 0; r < sys.size(); ++r) {
        for (int k : {2, 4, 6, 8}) corners += sys.m[r][k] != 0.0;
    }
    EXPECT_GT(corners, 0);
}

TEST(Flux, ConservativeAndMatchesLinearization) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int t = 0; t < 20; ++t) {
        const auto rc = oracle::random_case(rng, 4, 4);
        const Discretization d = random_discretization(rc);
        const auto f = random_state(rng, 16);
        const CWeights cw{{u(rng), u(rng)}, {u(rng), u(rng)}};
        for (SchemeKind s : kAllSchemes) {
            for (const EdgeKernel& k : d.kernels.interior) {
                const EdgeFlux fl = edge_flux(s, k, cw, f);
                EXPECT_EQ(fl.lower, -fl.upper);

                if (s == SchemeKind::NLTPFA) continue;
                const Couple c = s == SchemeKind::NLMPFA ? Couple{0.0, 0.0} : cw.along(k.normal);
                const EdgeLinearization lin = mpfa_linearize(k, c, f);
                auto tv = [&](const SideKernel& sk) {
                    return sk.transverse.dropped ? 0.0 : sk.transverse.value(f);
                };
                const double lower = lin.lower.self * f[k.lower.cell] + lin.lower.other * f[k.upper.cell] +
                                     lin.lower.t_self * tv(k.lower) + lin.lower.t_other * tv(k.upper);
                const double scale = std::abs(lin.lower.self * f[k.lower.cell]) +
                                     std::abs(lin.lower.other * f[k.upper.cell]) +
                                     std::abs(lin.lower.t_self * tv(k.lower)) +
                                     std::abs(lin.lower.t_other * tv(k.upper));
                EXPECT_NEAR(fl.lower, lower, 1e-12 * scale);
                // unsplit convex combination of the two linear fluxes
                const double f1 = k.lower.lambda * (f[k.lower.cell] - f[k.upper.cell]) +
                                  k.lower.nu * (f[k.lower.cell] - tv(k.lower));
                const double f2 = -k.upper.lambda * (f[k.upper.cell] - f[k.lower.cell]) -
                                  k.upper.nu * (f[k.upper.cell] - tv(k.upper));
                if (lin.g1 * lin.g2 >= 0.0) {
                    EXPECT_NEAR(fl.lower, lin.mu.mu1 * f1 + lin.mu.mu2 * f2,
                                1e-12 * (std::abs(f1) + std::abs(f2) + scale));
                }
            }
        }
    }
}

TEST(Flux, ConstantStateHasNoFlux) {
    std::mt19937_64 rng(4);
    auto rc = oracle::random_case(rng, 4, 3);
    for (auto& side : rc.bench.bc.sides) side.value = [](double, double) { return 3.5; };
    const Discretization d = random_discretization(rc);
    const std::vector<double> f(12, 3.5);
    const CWeights cw = CWeights::shared(0.4, 0.2);
    for (SchemeKind s : kAllSchemes) {
        for (const EdgeKernel& k : d.kernels.interior) {
            const EdgeFlux fl = edge_flux(s, k, cw, f);
            EXPECT_NEAR(fl.lower, 0.0, 1e-12 * 3.5 * (k.lower.lambda + k.upper.lambda + k.lower.tau));
        }
    }
}

TEST(Assembly, Errors) {
    const Discretization d = discretize(make_case(catalog_case("minmax")), uniform_grid(0.0, 0.5, 0.0, 0.5, 4, 4));
    const std::vector<double> f(16, 1.0);
    EXPECT_THROW(assemble(SchemeKind::RNLMPFA, d, f), SchemeError);
    const CWeights bad = CWeights::shared(1.2, 0.1);
    EXPECT_THROW(assemble(SchemeKind::RNLMPFA, d, f, &bad), SchemeError);
    EXPECT_THROW(assemble(SchemeKind::NLMPFA, d, std::vector<double>(3, 1.0)), SchemeError);
    EXPECT_THROW(discretize(make_case(catalog_case("minmax")), uniform_grid(0.0, 0.5, 0.0, 0.5, 4, 4), -1.0),
                 ConfigError);
}

TEST(Assembly, MassTerm) {
    const BenchmarkCase c = make_case(catalog_case("transient"));
    const Grid g = c.config.grid.make(6);
    const Discretization stat = discretize(c, g);
    const Discretization tr = discretize(c, g, 50.0);
    ASSERT_EQ(tr.mass.size(), 36u);
    const std::vector<double> prev(36, 2.0);
    AssembleOptions opt;
    opt.previous = prev;
    const LinearizedSystem sys = assemble(SchemeKind::NLMPFA, tr, prev, nullptr, opt);
    for (int k = 0; k < 36; ++k) {
        const Point p = g.center(k);
        const double w = c.tensor.weight(p.x, p.y);
        EXPECT_DOUBLE_EQ(tr.mass[k], w * g.area(k) / 50.0);
        EXPECT_DOUBLE_EQ(sys.mass[k], tr.mass[k]);
    }
    // the stationary tensor is D, the transient one G D
    const Tensor2 d0 = stat.kernels.tensors[7];
    const Tensor2 d1 = tr.kernels.tensors[7];
    const Point p = g.center(7);
    EXPECT_NEAR(d1.xx, c.tensor.weight(p.x, p.y) * d0.xx, 1e-15 * d1.xx);
    EXPECT_THROW(assemble(SchemeKind::NLMPFA, tr, prev), SchemeError);
}

TEST(Assembly, TwoPointLinearSchemeIsSymmetric) {
    std::mt19937_64 rng(8);
    const auto rc = oracle::random_case(rng, 4, 4);
    const Discretization d = random_discretization(rc);
    AssembleOptions opt;
    opt.linear_two_point = true;
    const LinearizedSystem sys = assemble(SchemeKind::RNLMPFA, d, std::vector<double>(16, 1.0), nullptr, opt);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) EXPECT_DOUBLE_EQ(sys.entry(r, c), sys.entry(c, r));
    }
}

TEST(Couple, NoCrossDiffusionGivesHalf) {
    BenchmarkCase c;
    c.tensor = constant_tensor({3.0, 0.0, 1.0});
    c.bc = BoundaryConditions::all_dirichlet([](double, double) { return 0.0; });
    const CWeights cw = compute_c_weights(discretize(c, uniform_grid(0.0, 1.0, 0.0, 1.0, 6, 6)));
    EXPECT_EQ(cw.x.c1, 0.5);
    EXPECT_EQ(cw.x.c2, 0.5);
    EXPECT_EQ(cw.y.c1, 0.5);
}

TEST(Couple, ComputedCouplePassesCheck) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
        const auto rc = oracle::random_case(rng, 5, 5, 6.0);
        const Discretization d = random_discretization(rc);
        const CWeights cw = compute_c_weights(d);
        EXPECT_DOUBLE_EQ(cw.x.c1, 2.0 * cw.x.c2);
        EXPECT_GT(cw.x.c2, 0.0);
        EXPECT_LE(cw.x.c2, kCCap);
        EXPECT_TRUE(check_couple(d, cw).pass);
        // a couple well above the bound breaks at least one inequality
        if (std::isfinite(cw.bound) && cw.bound < 0.3) {
            EXPECT_FALSE(check_couple(d, CWeights::shared(2.0 * 3.0 * cw.bound, 3.0 * cw.bound)).pass);
        }
    }
}

TEST(Couple, PublishedCouplesAreAdmissible) {
    for (const char* name : {"uniform", "positivity", "minmax", "convergence"}) {
        const CaseConfig cfg = catalog_case(name);
        const BenchmarkCase c = make_case(cfg);
        for (int n : cfg.grid.sizes) {
            SCOPED_TRACE(std::string(name) + " n=" + std::to_string(n));
            const Discretization d = discretize(c, cfg.grid.make(n));
            const CoupleCheck chk = check_couple(d, CWeights::shared((*cfg.couple)[0], (*cfg.couple)[1]));
            EXPECT_TRUE(chk.pass);
            EXPECT_GT(chk.cells, 0);
        }
    }
}

TEST(System, ResidualAndTriplets) {
    const Discretization d = discretize(make_case(catalog_case("minmax")), uniform_grid(0.0, 0.5, 0.0, 0.5, 4, 4));
    const std::vector<double> f(16, 0.3);
    const LinearizedSystem sys = assemble(SchemeKind::NLMPFA, d, f);
    const auto ax = sys.apply(f);
    const auto r = sys.residual(f);
    for (int k = 0; k < 16; ++k) EXPECT_DOUBLE_EQ(r[k], sys.rhs[k] - ax[k]);
    std::ostringstream os;
    sys.write_triplets(os);
    int lines = 0;
    for (char ch : os.str()) lines += ch == '\n';
    int nnz = 0;
    for (int k = 0; k < 16; ++k) nnz += sys.nonzeros(k);
    EXPECT_EQ(lines, nnz);
    EXPECT_EQ(sys.column(0, 5), -1);
    EXPECT_EQ(sys.column(5, 2), 10);
}
