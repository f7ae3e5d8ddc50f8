#include "monofv/runner.hpp"

#include "monofv/config.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <thread>

namespace monofv {

void PicardOverrides::apply(PicardConfig& cfg) const {
    if (epsilon) cfg.epsilon = *epsilon;
    if (residual) cfg.residual = *residual;
    if (max_iter) cfg.max_iter = *max_iter;
    if (init) cfg.init = *init;
    if (audit) cfg.audit = true;
    cfg.validate();
}

void RunSpec::validate() const {
    if (case_ref.empty()) throw ConfigError("no case given");
    if (schemes.empty()) throw ConfigError("no scheme given");
    for (int n : grids) {
        if (n < 3) throw ConfigError("grid size must be at least 3, got " + std::to_string(n));
    }
}

std::string run_tag(const std::string& case_name, SchemeKind s, int n, double dt) {
    std::string scheme = to_string(s);
    std::string tag = case_name + "_" + scheme + "_" + std::to_string(n);
    if (dt > 0.0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "_dt%g", dt);
        tag += buf;
    }
    for (char& ch : tag) {
        if (ch == '/' || ch == ' ' || ch == '\\') ch = '-';
    }
    return tag;
}

namespace {

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, count);
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&] {
        for (int k = next++; k < count; k = next++) {
            try {
                body(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RunOutcome run_stationary(const BenchmarkCase& c, int n, SchemeKind scheme, const PicardConfig& cfg,
                          const std::optional<std::filesystem::path>& out, bool dump_matrix) {
    const auto t0 = std::chrono::steady_clock::now();
    Grid grid = c.config.grid.make(n);
    const Discretization d = discretize(c, std::move(grid));
    std::optional<CWeights> cw;
    if (scheme == SchemeKind::RNLMPFA) cw = couple_for(c, d);

    PicardConfig run_cfg = cfg;
    std::optional<LinearizedSystem> last;
    if (dump_matrix) {
        auto user = cfg.observer;
        run_cfg.observer = [&last, user](int it, const LinearizedSystem& s, std::span<const double> x) {
            last = s;
            if (user) user(it, s, x);
        };
    }
    PicardResult res = picard_solve(d, scheme, run_cfg, cw ? &*cw : nullptr);

    RunOutcome o;
    ResultRow& r = o.row;
    r.case_name = c.name();
    r.scheme = to_string(scheme);
    r.nx = d.grid.nx();
    r.ny = d.grid.ny();
    r.n_iter = res.report.iterations;
    r.nonconverged = res.report.converged ? 0.0 : 1.0;
    r.f_min = res.report.f_min;
    r.f_max = res.report.f_max;
    r.r_under = res.report.r_under;
    r.r_over = res.report.r_over;
    if (c.reference) r.err2 = err2(res.field, c.reference->value, d.grid);
    r.wall_seconds = seconds_since(t0);

    if (out) {
        const std::string tag = run_tag(c.name(), scheme, n);
        emit_residual_history(res.report, *out / ("residuals_" + tag + ".dat"));
        emit_field(d.grid, res.field, *out / ("field_" + tag + ".dat"));
        if (last) {
            std::ofstream m(*out / ("system_" + tag + ".mtx"));
            if (!m) throw ReportError("cannot write matrix dump for " + tag);
            m << "% row col value (0-based), last linearized system\n";
            last->write_triplets(m);
        }
    }
    o.report = std::move(res.report);
    return o;
}

std::vector<RunOutcome> run(const RunSpec& spec) {
    spec.validate();
    const BenchmarkCase c = make_case(resolve_case(spec.case_ref));
    PicardConfig cfg = c.config.picard;
    spec.picard.apply(cfg);
    const std::vector<int> grids = spec.grids.empty() ? c.config.grid.sizes : spec.grids;
    if (grids.empty()) throw ConfigError("case has no grid sizes");
    if (spec.out) std::filesystem::create_directories(*spec.out);

    struct Job {
        SchemeKind scheme;
        int n;
    };
    std::vector<Job> jobs;
    for (SchemeKind s : spec.schemes) {
        for (int n : grids) jobs.push_back({s, n});
    }
    std::vector<RunOutcome> results(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), spec.threads, [&](int k) {
        results[k] = run_stationary(c, jobs[k].n, jobs[k].scheme, cfg, spec.out, spec.dump_matrix);
    });
    if (spec.out) {
        std::vector<ResultRow> rows;
        for (const auto& r : results) rows.push_back(r.row);
        write_results(*spec.out / "results.csv", rows);
    }
    return results;
}

std::vector<TransientOutcome> run_transient(const TransientRunSpec& spec) {
    if (spec.schemes.empty()) throw ConfigError("no scheme given");
    const BenchmarkCase c = make_case(resolve_case(spec.case_ref));
    PicardConfig cfg = c.config.picard;
    spec.picard.apply(cfg);
    const int n = spec.n ? *spec.n : (c.config.grid.sizes.empty() ? 0 : c.config.grid.sizes.front());
    if (n < 3) throw ConfigError("transient run needs a grid size of at least 3");
    const std::vector<double> dts = spec.dts.empty() ? std::vector<double>{c.config.transient.dt} : spec.dts;
    const double t_end = spec.t_end ? *spec.t_end : c.config.transient.t_end;
    if (spec.out) std::filesystem::create_directories(*spec.out);

    struct Job {
        SchemeKind scheme;
        double dt;
    };
    std::vector<Job> jobs;
    for (SchemeKind s : spec.schemes) {
        for (double dt : dts) jobs.push_back({s, dt});
    }
    const Grid grid = c.config.grid.make(n);
    std::vector<TransientOutcome> results(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), spec.threads, [&](int k) {
        const auto t0 = std::chrono::steady_clock::now();
        TransientResult tr = transient_solve(c, grid, jobs[k].scheme, jobs[k].dt, t_end, cfg);
        TransientOutcome& o = results[k];
        ResultRow& r = o.row;
        r.case_name = c.name();
        r.scheme = to_string(jobs[k].scheme);
        r.nx = grid.nx();
        r.ny = grid.ny();
        r.dt = jobs[k].dt;
        r.n_iter = tr.report.n_iter_avg;
        r.nonconverged = tr.report.nonconverged_fraction;
        r.f_min = tr.report.f_min;
        r.f_max = tr.report.f_max;
        if (!tr.report.per_step.empty()) {
            r.r_under = tr.report.per_step.back().r_under;
            r.r_over = tr.report.per_step.back().r_over;
        }
        r.wall_seconds = seconds_since(t0);
        if (spec.out) {
            const std::string tag = run_tag(c.name(), jobs[k].scheme, n, jobs[k].dt);
            emit_field(grid, tr.field, *spec.out / ("field_" + tag + ".dat"));
            std::ofstream it(*spec.out / ("iterations_" + tag + ".dat"));
            if (!it) throw ReportError("cannot write iteration log for " + tag);
            it << "# step n_iter converged last_residual\n";
            for (std::size_t s = 0; s < tr.report.per_step.size(); ++s) {
                const PicardReport& p = tr.report.per_step[s];
                it << s + 1 << ' ' << p.iterations << ' ' << p.converged << ' '
                   << (p.residuals.empty() ? 0.0 : p.residuals.back()) << '\n';
            }
        }
        o.report = std::move(tr.report);
    });
    if (spec.out) {
        std::vector<ResultRow> rows;
        for (const auto& r : results) rows.push_back(r.row);
        write_results(*spec.out / "results.csv", rows);
    }
    return results;
}

}  // namespace monofv
