#include "monofv/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>

namespace monofv {

std::string to_string(SchemeKind s) {
    switch (s) {
    case SchemeKind::NLTPFA: return "NLTPFA";
    case SchemeKind::NLMPFA: return "NLMPFA";
    case SchemeKind::RNLMPFA: return "R-NLMPFA";
    }
    return "?";
}

SchemeKind parse_scheme(const std::string& s) {
    std::string k;
    for (char ch : s) {
        if (ch != '-' && ch != '_') k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (k == "nltpfa") return SchemeKind::NLTPFA;
    if (k == "nlmpfa") return SchemeKind::NLMPFA;
    if (k == "rnlmpfa") return SchemeKind::RNLMPFA;
    throw ConfigError("unknown scheme '" + s + "' (expected nltpfa|nlmpfa|rnlmpfa)");
}

int stencil_slot(int di, int dj) {
    for (int k = 0; k < 9; ++k) {
        if (kStencil[k][0] == di && kStencil[k][1] == dj) return k;
    }
    return -1;
}

// ---------------------------------------------------------------------------

int LinearizedSystem::column(int row, int slot) const {
    const int i = row % nx + kStencil[slot][0];
    const int j = row / nx + kStencil[slot][1];
    if (i < 0 || i >= nx || j < 0 || j >= ny) return -1;
    return j * nx + i;
}

int LinearizedSystem::nonzeros(int row) const {
    int n = 0;
    for (double v : m[row]) n += v != 0.0;
    return n;
}

double LinearizedSystem::entry(int row, int col) const {
    const int slot = stencil_slot(col % nx - row % nx, col / nx - row / nx);
    return slot < 0 ? 0.0 : m[row][slot];
}

std::vector<double> LinearizedSystem::apply(std::span<const double> x) const {
    std::vector<double> y(size(), 0.0);
    for (int r = 0; r < size(); ++r) {
        double s = 0.0;
        for (int k = 0; k < 9; ++k) {
            const int c = column(r, k);
            if (c >= 0) s += m[r][k] * x[c];
        }
        y[r] = s;
    }
    return y;
}

std::vector<double> LinearizedSystem::residual(std::span<const double> x) const {
    std::vector<double> y = apply(x);
    for (int r = 0; r < size(); ++r) y[r] = rhs[r] - y[r];
    return y;
}

double LinearizedSystem::extended_row_sum(int row) const {
    double s = boundary_coeff[row];
    for (double v : m[row]) s += v;
    if (!mass.empty()) s -= mass[row];
    return s;
}

void LinearizedSystem::write_triplets(std::ostream& os) const {
    os.precision(17);
    for (int r = 0; r < size(); ++r) {
        for (int k = 0; k < 9; ++k) {
            const int c = column(r, k);
            if (c >= 0 && m[r][k] != 0.0) os << r << ' ' << c << ' ' << m[r][k] << '\n';
        }
    }
}

// ---------------------------------------------------------------------------

Discretization discretize(const BenchmarkCase& c, Grid grid, double dt) {
    if (dt < 0.0 || !std::isfinite(dt)) throw ConfigError("time step must be positive");
    const TensorField tensor = dt > 0.0 ? c.tensor.effective() : c.tensor;
    KernelSet ks = build_kernels(grid, tensor, c.bc);
    const int n = grid.num_cells();
    std::vector<double> src(n, 0.0);
    if (!c.source.is_zero()) {
        for (int k = 0; k < n; ++k) src[k] = c.source.cell_integral(grid, k);
    }
    std::vector<double> mass;
    if (dt > 0.0) {
        mass.resize(n);
        for (int k = 0; k < n; ++k) {
            const Point p = grid.center(k);
            const double g = c.tensor.weight(p.x, p.y);
            if (!(g > 0.0)) throw ProblemError("weight G must be positive at cell centers");
            mass[k] = g * grid.area(k) / dt;
        }
    }
    DirichletRange range = dirichlet_range(grid, c.bc);
    return Discretization{std::move(grid), std::move(ks), std::move(src), std::move(mass), range,
                          !c.source.is_zero()};
}

// ---------------------------------------------------------------------------

EdgeWeights nltpfa_weights(double a1, double a2) {
    const double s = std::abs(a1) + std::abs(a2);
    if (s == 0.0) return {};
    return {std::abs(a2) / s, std::abs(a1) / s};
}

namespace {

double tedge(const SideKernel& s, std::span<const double> state) {
    return s.transverse.dropped ? 0.0 : s.tedge_value(state);
}

double tdiff(const SideKernel& s, std::span<const double> state) {
    return s.transverse.dropped ? 0.0 : state[s.cell] - s.transverse.value(state);
}

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

}  // namespace

EdgeWeights nltpfa_weights(const EdgeKernel& k, std::span<const double> state) {
    const double fs = k.edge_value(state);
    const double a1 = k.lower.tau * fs + k.lower.eta * tedge(k.lower, state);
    const double a2 = k.upper.tau * fs + k.upper.eta * tedge(k.upper, state);
    return nltpfa_weights(a1, a2);
}

EdgeWeights mpfa_weights(double g1, double g2) {
    const double s = std::abs(g1) + std::abs(g2);
    if (s == 0.0) return {};
    return {std::abs(g2) / s, std::abs(g1) / s};
}

EdgeLinearization mpfa_linearize(const EdgeKernel& k, Couple c, std::span<const double> state) {
    const SideKernel& a = k.lower;
    const SideKernel& b = k.upper;
    EdgeLinearization out;
    out.g1 = (1.0 - c.c1) * a.nu * tdiff(a, state);
    out.g2 = (1.0 - c.c2) * b.nu * tdiff(b, state);
    out.mu = mpfa_weights(out.g1, out.g2);
    const double mu1 = out.mu.mu1;
    const double mu2 = out.mu.mu2;
    const bool neg = opposite(out.g1, out.g2);
    const double theta1 = neg ? 2.0 - c.c1 : c.c1;
    const double theta2 = neg ? 2.0 - c.c2 : c.c2;
    const double l = mu1 * a.lambda + mu2 * b.lambda;

    out.lower.self = l + theta1 * mu1 * a.nu;
    out.lower.other = -l - c.c2 * mu2 * b.nu;
    out.lower.t_self = -theta1 * mu1 * a.nu;
    out.lower.t_other = c.c2 * mu2 * b.nu;

    out.upper.self = l + theta2 * mu2 * b.nu;
    out.upper.other = -l - c.c1 * mu1 * a.nu;
    out.upper.t_self = -theta2 * mu2 * b.nu;
    out.upper.t_other = c.c1 * mu1 * a.nu;
    return out;
}

EdgeLinearization nltpfa_linearize(const EdgeKernel& k, std::span<const double> state) {
    EdgeLinearization out;
    out.mu = nltpfa_weights(k, state);
    const double alpha = out.mu.mu1 * (k.lower.tau + k.lower.eta);
    const double beta = out.mu.mu2 * (k.upper.tau + k.upper.eta);
    out.lower.self = alpha;
    out.lower.other = -beta;
    out.upper.self = beta;
    out.upper.other = -alpha;
    return out;
}

EdgeFlux edge_flux(SchemeKind s, const EdgeKernel& k, const CWeights& cw,
                   std::span<const double> state) {
    const double fl = state[k.lower.cell];
    const double fu = state[k.upper.cell];
    if (s == SchemeKind::NLTPFA) {
        const EdgeLinearization lin = nltpfa_linearize(k, state);
        const double f = lin.lower.self * fl + lin.lower.other * fu;
        return {f, -f};
    }
    const Couple c = s == SchemeKind::NLMPFA ? Couple{0.0, 0.0} : cw.along(k.normal);
    const double dl = tdiff(k.lower, state);
    const double du = tdiff(k.upper, state);
    const double g1 = (1.0 - c.c1) * k.lower.nu * dl;
    const double g2 = (1.0 - c.c2) * k.upper.nu * du;
    const EdgeWeights mu = mpfa_weights(g1, g2);
    const double l = mu.mu1 * k.lower.lambda + mu.mu2 * k.upper.lambda;

    // Evaluated as T + C + bracket on both sides so that the two outward
    // fluxes are exact negatives of each other.
    const double t = l * (fl - fu);
    const double xl = c.c1 * mu.mu1 * k.lower.nu * dl;
    const double xu = c.c2 * mu.mu2 * k.upper.nu * du;
    double bl = 0.0;
    double bu = 0.0;
    if (opposite(g1, g2)) {
        const double sum = std::abs(g1) + std::abs(g2);
        bl = 2.0 * (std::abs(g2) * g1) / sum;
        bu = 2.0 * (std::abs(g1) * g2) / sum;
    }
    return {(t + (xl - xu)) + bl, (l * (fu - fl) + (xu - xl)) + bu};
}

// ---------------------------------------------------------------------------

namespace {

struct Assembler {
    LinearizedSystem& sys;
    const Grid& g;

    void add(int row, int col, double v) {
        const int slot = stencil_slot(g.i_of(col) - g.i_of(row), g.j_of(col) - g.j_of(row));
        sys.m[row][slot] += v;
    }
    void add(int row, const TransverseRef& t, double v) {
        if (t.dropped || v == 0.0) return;
        if (t.is_cell()) {
            add(row, t.where.cell, v);
        } else {
            sys.rhs[row] -= v * t.ghost;
            sys.boundary_coeff[row] += v;
        }
    }
    void edge(const EdgeKernel& k, const EdgeLinearization& lin) {
        const int l = k.lower.cell;
        const int u = k.upper.cell;
        add(l, l, lin.lower.self);
        add(l, u, lin.lower.other);
        add(l, k.lower.transverse, lin.lower.t_self);
        add(l, k.upper.transverse, lin.lower.t_other);
        add(u, u, lin.upper.self);
        add(u, l, lin.upper.other);
        add(u, k.upper.transverse, lin.upper.t_self);
        add(u, k.lower.transverse, lin.upper.t_other);
    }
};

bool valid_couple(const Couple& c) { return c.c1 > 0.0 && c.c1 < 1.0 && c.c2 > 0.0 && c.c2 < 1.0; }

}  // namespace

LinearizedSystem assemble(SchemeKind scheme, const Discretization& d, std::span<const double> frozen,
                          const CWeights* cw, const AssembleOptions& opt) {
    const int n = d.size();
    if (static_cast<int>(frozen.size()) != n) throw SchemeError("frozen state has the wrong size");
    if (scheme == SchemeKind::RNLMPFA && !opt.linear_two_point) {
        if (cw == nullptr || !valid_couple(cw->x) || !valid_couple(cw->y)) {
            throw SchemeError("R-NLMPFA needs feasible (c1, c2) weights in (0, 1)");
        }
    }
    if (!d.mass.empty() && static_cast<int>(opt.previous.size()) != n) {
        throw SchemeError("transient assembly needs the previous time level");
    }

    LinearizedSystem sys;
    sys.nx = d.grid.nx();
    sys.ny = d.grid.ny();
    sys.scheme = scheme;
    sys.m.assign(n, std::array<double, 9>{});
    sys.rhs = d.source;
    sys.boundary_coeff.assign(n, 0.0);
    sys.mass = d.mass;
    Assembler as{sys, d.grid};

    for (const EdgeKernel& k : d.kernels.interior) {
        if (opt.linear_two_point) {
            const double l = 0.5 * (k.lower.lambda + k.upper.lambda);
            EdgeLinearization lin;
            lin.lower.self = l;
            lin.lower.other = -l;
            lin.upper.self = l;
            lin.upper.other = -l;
            as.edge(k, lin);
            continue;
        }
        switch (scheme) {
        case SchemeKind::NLTPFA: as.edge(k, nltpfa_linearize(k, frozen)); break;
        case SchemeKind::NLMPFA: as.edge(k, mpfa_linearize(k, {0.0, 0.0}, frozen)); break;
        case SchemeKind::RNLMPFA: as.edge(k, mpfa_linearize(k, cw->along(k.normal), frozen)); break;
        }
    }

    for (const BoundaryKernel& b : d.kernels.boundary) {
        if (b.kind == BcKind::NoFlux) continue;
        const SideKernel& s = b.side;
        const int r = s.cell;
        if (opt.linear_two_point) {
            sys.m[r][0] += s.lambda;
            sys.rhs[r] += s.lambda * b.value;
            sys.boundary_coeff[r] -= s.lambda;
        } else if (scheme == SchemeKind::NLTPFA) {
            sys.m[r][0] += s.tau + s.eta;
            sys.rhs[r] += s.tau * b.value + s.eta * tedge(s, frozen);
            sys.boundary_coeff[r] -= s.tau + s.eta;
        } else {
            sys.m[r][0] += s.lambda + s.nu;
            sys.rhs[r] += s.lambda * b.value;
            sys.boundary_coeff[r] -= s.lambda;
            as.add(r, s.transverse, -s.nu);
        }
    }

    if (!d.mass.empty()) {
        for (int r = 0; r < n; ++r) {
            sys.m[r][0] += d.mass[r];
            sys.rhs[r] += d.mass[r] * opt.previous[r];
        }
    }
    return sys;
}

// ---------------------------------------------------------------------------

namespace {

double min_lambda(const EdgeKernel& k) { return std::min(k.lower.lambda, k.upper.lambda); }
double max_lambda(const EdgeKernel& k) { return std::max(k.lower.lambda, k.upper.lambda); }

/// Local data of the five inequalities at one cell: each reads
///   p[0] * nu[0] + p[1] * nu[1] < num / scale
/// with (p[0], p[1]) the couple entries named in `which`.
struct LocalBounds {
    std::array<double, 5> num{};
    std::array<double, 5> scale{};
    std::array<std::array<double, 2>, 5> nu{};
};

// Couple entries per inequality: 0 = c1x, 1 = c2x, 2 = c1y, 3 = c2y.
constexpr std::array<std::array<int, 2>, 5> kWhich{{{1, 0}, {1, 3}, {0, 3}, {0, 2}, {1, 2}}};

LocalBounds local_bounds(const Discretization& d, int cell) {
    const Grid& g = d.grid;
    const auto& ks = d.kernels;
    auto kernel = [&](int c, int slot) -> const EdgeKernel& { return ks.interior[ks.cell_edges[c][slot]]; };
    const EdgeKernel& e = kernel(cell, 0);
    const EdgeKernel& n = kernel(cell, 1);
    const EdgeKernel& w = kernel(cell, 2);
    const EdgeKernel& s = kernel(cell, 3);
    const int south = g.neighbor(cell, 0, -1);
    const int north = g.neighbor(cell, 0, 1);

    double a = max_lambda(e) + max_lambda(n) + max_lambda(w) + max_lambda(s) +
               2.0 * (e.lower.nu + n.lower.nu + w.upper.nu + s.upper.nu);
    if (!d.mass.empty()) a += d.mass[cell];

    LocalBounds lb;
    lb.num = {min_lambda(n) + min_lambda(s), min_lambda(e) * min_lambda(s),
              min_lambda(w) * min_lambda(s), min_lambda(w) * min_lambda(n),
              min_lambda(e) * min_lambda(n)};
    lb.scale = {1.0, a, a, a, a};
    lb.nu[0] = {e.upper.nu, w.lower.nu};
    lb.nu[1] = {kernel(south, 0).upper.nu, s.upper.nu};
    lb.nu[2] = {kernel(south, 2).lower.nu, s.upper.nu};
    lb.nu[3] = {kernel(north, 2).lower.nu, n.lower.nu};
    lb.nu[4] = {kernel(north, 0).upper.nu, n.lower.nu};
    return lb;
}

}  // namespace

CWeights compute_c_weights(const Discretization& d) {
    // Under c1 = 2 c2 the entries c1x, c2x, c1y, c2y scale as 2, 1, 2, 1.
    constexpr std::array<double, 4> factor{2.0, 1.0, 2.0, 1.0};
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < d.size(); ++c) {
        if (!d.grid.has_full_stencil(c)) continue;
        const LocalBounds lb = local_bounds(d, c);
        for (int k = 0; k < 5; ++k) {
            if (!(lb.num[k] > 0.0)) {
                throw SchemeError("monotonicity bound is not positive at cell " + std::to_string(c));
            }
            const double w = factor[kWhich[k][0]] * lb.nu[k][0] + factor[kWhich[k][1]] * lb.nu[k][1];
            if (w > 0.0) best = std::min(best, lb.num[k] / (lb.scale[k] * w));
        }
    }
    if (!std::isfinite(best)) return CWeights::shared(0.5, 0.5);
    const double c2 = std::min(kCSafety * best, kCCap);
    if (!(c2 > 0.0)) throw SchemeError("no admissible (c1, c2) couple for this mesh and tensor");
    CWeights cw = CWeights::shared(2.0 * c2, c2);
    cw.bound = best;
    return cw;
}

CoupleCheck check_couple(const Discretization& d, const CWeights& cw) {
    const std::array<double, 4> entry{cw.x.c1, cw.x.c2, cw.y.c1, cw.y.c2};
    CoupleCheck out;
    out.worst_margin.fill(1.0);
    for (int c = 0; c < d.size(); ++c) {
        if (!d.grid.has_full_stencil(c)) continue;
        ++out.cells;
        const LocalBounds lb = local_bounds(d, c);
        for (int k = 0; k < 5; ++k) {
            const double lhs = entry[kWhich[k][0]] * lb.nu[k][0] + entry[kWhich[k][1]] * lb.nu[k][1];
            const double margin = 1.0 - lb.scale[k] * lhs / lb.num[k];
            if (margin < out.worst_margin[k]) out.worst_margin[k] = margin;
            if (!(margin > 0.0) && out.pass) {
                out.pass = false;
                out.failing_cell = c;
            }
        }
    }
    return out;
}

}  // namespace monofv
