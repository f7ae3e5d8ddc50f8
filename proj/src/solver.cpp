#include "monofv/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace monofv {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

std::string singular_diagnostics(const LinearizedSystem& sys) {
    std::ostringstream os;
    int shown = 0;
    for (int r = 0; r < sys.size() && shown < 5; ++r) {
        double scale = 0.0;
        for (double v : sys.m[r]) scale += std::abs(v);
        if (scale == 0.0 || sys.m[r][0] == 0.0) {
            os << " row " << r << (scale == 0.0 ? " is empty;" : " has a zero diagonal;");
            ++shown;
        }
    }
    return shown ? os.str() : " no empty rows or zero diagonals found";
}

}  // namespace

struct LinearSolver::Impl {
    Eigen::SparseMatrix<double> a;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    int nx = -1;
    int ny = -1;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

std::vector<double> LinearSolver::solve(const LinearizedSystem& sys) {
    const int n = sys.size();
    // Every in-mesh stencil slot is stored, zero or not, so the sparsity
    // pattern never changes between Picard iterations.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 9);
    for (int r = 0; r < n; ++r) {
        for (int k = 0; k < 9; ++k) {
            const int c = sys.column(r, k);
            if (c >= 0) trip.emplace_back(r, c, sys.m[r][k]);
        }
    }
    Impl& s = *impl_;
    const bool same = s.nx == sys.nx && s.ny == sys.ny;
    s.a.resize(n, n);
    s.a.setFromTriplets(trip.begin(), trip.end());
    s.a.makeCompressed();
    if (!same) {
        s.lu.analyzePattern(s.a);
        s.nx = sys.nx;
        s.ny = sys.ny;
    }
    s.lu.factorize(s.a);
    if (s.lu.info() != Eigen::Success) {
        throw SolverError("sparse LU failed (" + s.lu.lastErrorMessage() + "):" +
                          singular_diagnostics(sys));
    }

    Eigen::Map<const Eigen::VectorXd> b(sys.rhs.data(), n);
    Eigen::VectorXd x = s.lu.solve(b);
    const double bn = b.norm();
    for (int pass = 0; pass < 3; ++pass) {
        const Eigen::VectorXd r = b - s.a * x;
        if (!(r.norm() > kLinearTolerance * bn)) break;
        x += s.lu.solve(r);
    }
    if (!x.allFinite()) throw SolverError("linear solve produced non-finite values:" + singular_diagnostics(sys));
    return {x.data(), x.data() + n};
}

std::vector<double> linear_solve(const LinearizedSystem& sys) {
    LinearSolver s;
    return s.solve(sys);
}

// ---------------------------------------------------------------------------

bool PicardReport::audit_pass() const {
    return std::all_of(audits.begin(), audits.end(), [](const MonotonicityReport& r) { return r.pass; });
}

int PicardReport::audit_failures() const {
    int n = 0;
    for (const auto& a : audits) n += a.total_failures();
    return n;
}

void fill_extrema(PicardReport& rep, std::span<const double> f, const Discretization& d) {
    if (f.empty()) return;
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    rep.f_min = *lo;
    rep.f_max = *hi;
    const double bmin = d.range.any ? d.range.min : 0.0;
    const double bmax = d.range.any ? d.range.max : 0.0;
    const double scale = std::max({std::abs(bmin), std::abs(bmax), norm_inf(f)});
    const double tol = 1e-12 * scale;
    rep.n_under = 0;
    rep.n_over = 0;
    for (double v : f) {
        rep.n_under += v < bmin - tol;
        if (!d.has_source) rep.n_over += v > bmax + tol;
    }
    rep.r_under = static_cast<double>(rep.n_under) / static_cast<double>(f.size());
    rep.r_over = static_cast<double>(rep.n_over) / static_cast<double>(f.size());
}

namespace {

double row_sum_defect(const LinearizedSystem& sys) {
    double worst = 0.0;
    for (int r = 0; r < sys.size(); ++r) {
        double scale = std::abs(sys.boundary_coeff[r]);
        for (double v : sys.m[r]) scale += std::abs(v);
        if (scale > 0.0) worst = std::max(worst, std::abs(sys.extended_row_sum(r)) / scale);
    }
    return worst;
}

std::vector<double> initial_state(const Discretization& d, SchemeKind scheme, const PicardConfig& cfg,
                                  std::span<const double> previous, LinearSolver& solver) {
    const int n = d.size();
    switch (cfg.init) {
    case InitPolicy::Ones: return std::vector<double>(n, 1.0);
    case InitPolicy::GivenField:
        if (static_cast<int>(cfg.initial.size()) != n) {
            throw ConfigError("initial field has " + std::to_string(cfg.initial.size()) +
                              " values, expected " + std::to_string(n));
        }
        return cfg.initial;
    case InitPolicy::LinearSchemeOutput: {
        AssembleOptions opt;
        opt.linear_two_point = true;
        opt.previous = previous;
        const std::vector<double> ones(n, 1.0);
        std::vector<double> x = solver.solve(assemble(scheme, d, ones, nullptr, opt));
        if (d.range.any) {
            for (double& v : x) v = std::clamp(v, d.range.min, d.range.max);
        }
        return x;
    }
    }
    return std::vector<double>(n, 1.0);
}

}  // namespace

PicardResult picard_solve(const Discretization& d, SchemeKind scheme, const PicardConfig& cfg,
                          const CWeights* cw, std::span<const double> previous) {
    cfg.validate();
    CWeights local;
    if (scheme == SchemeKind::RNLMPFA && cw == nullptr) {
        local = compute_c_weights(d);
        cw = &local;
    }
    LinearSolver solver;
    PicardResult res;
    PicardReport& rep = res.report;
    rep.scheme = scheme;
    if (cw != nullptr) rep.cweights = *cw;

    AssembleOptions opt;
    opt.previous = previous;
    std::vector<double> x = initial_state(d, scheme, cfg, previous, solver);
    if (cfg.keep_iterates) rep.iterates.push_back(x);

    LinearizedSystem sys = assemble(scheme, d, x, cw, opt);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        if (cfg.audit) rep.audits.push_back(check_monotonicity(sys));
        rep.max_row_sum = std::max(rep.max_row_sum, row_sum_defect(sys));
        if (cfg.observer) cfg.observer(it, sys, x);

        std::vector<double> next = solver.solve(sys);
        LinearizedSystem next_sys = assemble(scheme, d, next, cw, opt);
        double r = 0.0;
        if (cfg.residual == ResidualKind::SuccessiveIterates) {
            double diff = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) diff = std::max(diff, std::abs(next[k] - x[k]));
            r = diff / std::max(norm_inf(x), 1e-300);
        } else {
            r = norm2(next_sys.residual(next)) / std::max(norm2(sys.rhs), 1e-300);
        }
        rep.residuals.push_back(r);
        rep.iterations = it;
        x = std::move(next);
        sys = std::move(next_sys);
        if (cfg.keep_iterates) rep.iterates.push_back(x);
        if (r < cfg.epsilon) {
            rep.converged = true;
            break;
        }
    }
    fill_extrema(rep, x, d);
    res.field = std::move(x);
    return res;
}

CWeights couple_for(const BenchmarkCase& c, const Discretization& d) {
    if (c.config.couple) return CWeights::shared((*c.config.couple)[0], (*c.config.couple)[1]);
    return compute_c_weights(d);
}

// ---------------------------------------------------------------------------

TransientResult transient_solve(const BenchmarkCase& c, const Grid& grid, SchemeKind scheme,
                                double dt, double t_end, PicardConfig cfg,
                                std::optional<CWeights> cw) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("final time must be positive");
    cfg.validate();

    const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
    const double last_dt = t_end - (steps - 1) * dt;
    const Discretization main = discretize(c, grid, dt);
    std::optional<Discretization> tail;
    if (std::abs(last_dt - dt) > 1e-12 * dt) tail = discretize(c, grid, last_dt);

    const CWeights w_main = cw ? *cw : couple_for(c, main);
    const CWeights w_tail = cw ? *cw : (tail ? couple_for(c, *tail) : w_main);

    TransientResult res;
    TransientReport& rep = res.report;
    rep.scheme = scheme;
    rep.dt = dt;
    rep.steps = steps;
    rep.cweights = w_main;

    std::vector<double> f(grid.num_cells(), c.config.transient.f_init);
    rep.f_min = rep.f_max = c.config.transient.f_init;
    long total_iter = 0;
    for (int s = 0; s < steps; ++s) {
        const bool is_tail = tail && s == steps - 1;
        const Discretization& d = is_tail ? *tail : main;
        PicardConfig step_cfg = cfg;
        if (step_cfg.init != InitPolicy::LinearSchemeOutput) {
            step_cfg.init = InitPolicy::GivenField;
            step_cfg.initial = f;
        }
        const CWeights* w = scheme == SchemeKind::RNLMPFA ? (is_tail ? &w_tail : &w_main) : nullptr;
        PicardResult step = picard_solve(d, scheme, step_cfg, w, f);
        f = std::move(step.field);
        total_iter += step.report.iterations;
        rep.nonconverged += !step.report.converged;
        rep.f_min = s == 0 ? step.report.f_min : std::min(rep.f_min, step.report.f_min);
        rep.f_max = s == 0 ? step.report.f_max : std::max(rep.f_max, step.report.f_max);
        rep.per_step.push_back(std::move(step.report));
    }
    rep.n_iter_avg = static_cast<double>(total_iter) / steps;
    rep.nonconverged_fraction = static_cast<double>(rep.nonconverged) / steps;
    res.field = std::move(f);
    return res;
}

}  // namespace monofv
