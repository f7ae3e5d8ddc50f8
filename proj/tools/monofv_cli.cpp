#include "monofv/config.hpp"
#include "monofv/report.hpp"
#include "monofv/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

using namespace monofv;

namespace {

struct CommonPicard {
    double epsilon = 0.0;
    std::string residual;
    int max_iter = 0;
    std::string init;
    bool audit = false;

    void add_to(CLI::App* app) {
        app->add_option("--epsilon", epsilon, "Picard stopping tolerance");
        app->add_option("--residual", residual, "delta | algebraic");
        app->add_option("--max-iter", max_iter, "maximum number of Picard iterations");
        app->add_option("--init", init, "ones | linear");
        app->add_flag("--audit", audit, "check (A0)-(A3) on every linearized system");
    }

    PicardOverrides overrides() const {
        PicardOverrides o;
        if (epsilon != 0.0) o.epsilon = epsilon;
        if (!residual.empty()) o.residual = parse_residual_kind(residual);
        if (max_iter != 0) o.max_iter = max_iter;
        if (!init.empty()) o.init = parse_init_policy(init);
        o.audit = audit;
        return o;
    }
};

std::vector<SchemeKind> parse_schemes(const std::string& s) {
    if (s == "all") return {kAllSchemes.begin(), kAllSchemes.end()};
    std::vector<SchemeKind> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!part.empty()) out.push_back(parse_scheme(part));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void print_rows(const std::vector<ResultRow>& rows, bool transient) {
    if (transient) {
        std::printf("%-10s %-9s %5s %9s %10s %8s %12s %12s %8s\n", "case", "scheme", "n", "dt",
                    "Niter_avg", "noconv%", "f_min", "f_max", "time[s]");
    } else {
        std::printf("%-12s %-9s %5s %6s %12s %12s %9s %9s %11s %8s\n", "case", "scheme", "n", "Niter",
                    "f_min", "f_max", "Runder%", "Rover%", "Err2%", "time[s]");
    }
    for (const auto& r : rows) {
        if (transient) {
            std::printf("%-10s %-9s %5d %9g %10.2f %8.2f %12.4e %12.4e %8.2f\n", r.case_name.c_str(),
                        r.scheme.c_str(), r.nx, r.dt, r.n_iter, 100.0 * r.nonconverged, r.f_min,
                        r.f_max, r.wall_seconds);
        } else {
            char err[32] = "-";
            if (r.err2) std::snprintf(err, sizeof err, "%.4f", 100.0 * *r.err2);
            std::printf("%-12s %-9s %5d %6.0f %12.4e %12.4e %9.2f %9.2f %11s %8.2f\n",
                        r.case_name.c_str(), r.scheme.c_str(), r.nx, r.n_iter, r.f_min, r.f_max,
                        100.0 * r.r_under, 100.0 * r.r_over, err, r.wall_seconds);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear monotone finite volume schemes for anisotropic diffusion"};
    app.require_subcommand(1);
    bool allow_nonconverged = false;

    auto* run_cmd = app.add_subcommand("run", "solve stationary cases on a grid sweep");
    std::string case_ref;
    std::string scheme = "all";
    std::vector<int> grids;
    std::string out_dir = "out";
    bool dump_matrix = false;
    int threads = 0;
    CommonPicard run_picard;
    run_cmd->add_option("--case", case_ref, "catalog name or case JSON file")->required();
    run_cmd->add_option("--scheme", scheme, "nltpfa | nlmpfa | rnlmpfa | all (comma list allowed)");
    run_cmd->add_option("--grids", grids, "grid sizes n (n x n cells)")->delimiter(',');
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_flag("--dump-matrix", dump_matrix, "write the last linearized system as triplets");
    run_cmd->add_option("--threads", threads, "concurrent runs (0: all cores)");
    run_cmd->add_flag("--allow-nonconverged", allow_nonconverged, "exit 0 even if a run did not converge");
    run_picard.add_to(run_cmd);

    auto* tr_cmd = app.add_subcommand("transient", "backward Euler runs of a weighted case");
    std::string tr_case = "transient";
    std::string tr_scheme = "nlmpfa,rnlmpfa";
    std::vector<double> dts;
    double t_end = 0.0;
    int tr_n = 0;
    std::string tr_out = "out";
    CommonPicard tr_picard;
    tr_cmd->add_option("--case", tr_case, "catalog name or case JSON file");
    tr_cmd->add_option("--scheme", tr_scheme, "schemes to run");
    tr_cmd->add_option("--dt", dts, "time steps in s")->delimiter(',');
    tr_cmd->add_option("--t-end", t_end, "final time in s");
    tr_cmd->add_option("--n", tr_n, "grid size override");
    tr_cmd->add_option("--out", tr_out, "output directory");
    tr_cmd->add_option("--threads", threads, "concurrent runs (0: all cores)");
    tr_cmd->add_flag("--allow-nonconverged", allow_nonconverged, "exit 0 even if a step did not converge");
    tr_picard.add_to(tr_cmd);

    auto* conv_cmd = app.add_subcommand("convergence", "observed orders from a results.csv");
    std::string csv_in;
    conv_cmd->add_option("--in", csv_in, "results.csv")->required();

    auto* cat_cmd = app.add_subcommand("catalog", "list catalog cases or print one as JSON");
    std::string show;
    cat_cmd->add_option("--show", show, "case to print");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            RunSpec spec;
            spec.case_ref = case_ref;
            spec.schemes = parse_schemes(scheme);
            spec.grids = grids;
            spec.picard = run_picard.overrides();
            spec.out = out_dir;
            spec.dump_matrix = dump_matrix;
            spec.threads = threads;
            const auto results = run(spec);
            std::vector<ResultRow> rows;
            bool all_converged = true;
            for (const auto& r : results) {
                rows.push_back(r.row);
                all_converged = all_converged && r.report.converged;
            }
            print_rows(rows, false);
            for (const auto& r : results) {
                if (r.report.scheme != SchemeKind::RNLMPFA) continue;
                std::printf("couple n=%-4d c1=%.4e c2=%.4e\n", r.row.nx, r.report.cweights.x.c1,
                            r.report.cweights.x.c2);
            }
            if (spec.picard.audit) {
                for (const auto& r : results) {
                    std::printf("audit %-9s n=%-4d systems=%zu failures=%d %s\n", r.row.scheme.c_str(),
                                r.row.nx, r.report.audits.size(), r.report.audit_failures(),
                                r.report.audit_pass() ? "pass" : "FAIL");
                }
            }
            std::printf("results written to %s/results.csv\n", out_dir.c_str());
            return all_converged || allow_nonconverged ? 0 : 1;
        }
        if (*tr_cmd) {
            TransientRunSpec spec;
            spec.case_ref = tr_case;
            spec.schemes = parse_schemes(tr_scheme);
            spec.dts = dts;
            if (t_end != 0.0) spec.t_end = t_end;
            if (tr_n != 0) spec.n = tr_n;
            spec.picard = tr_picard.overrides();
            spec.out = tr_out;
            spec.threads = threads;
            const auto results = run_transient(spec);
            std::vector<ResultRow> rows;
            bool all_converged = true;
            for (const auto& r : results) {
                rows.push_back(r.row);
                all_converged = all_converged && r.report.nonconverged == 0;
            }
            print_rows(rows, true);
            std::printf("results written to %s/results.csv\n", tr_out.c_str());
            return all_converged || allow_nonconverged ? 0 : 1;
        }
        if (*conv_cmd) {
            const auto rows = read_results(csv_in);
            std::map<std::pair<std::string, std::string>, std::vector<ResultRow>> groups;
            for (const auto& r : rows) groups[{r.case_name, r.scheme}].push_back(r);
            for (const auto& [key, g] : groups) {
                std::printf("%s %s\n", key.first.c_str(), key.second.c_str());
                for (const auto& o : convergence_report(g)) {
                    std::printf("  %4d -> %-4d  Err2 %.4e -> %.4e  order %.3f\n", o.n_coarse, o.n_fine,
                                o.err_coarse, o.err_fine, o.order);
                }
            }
            return 0;
        }
        if (*cat_cmd) {
            if (!show.empty()) {
                std::cout << case_to_json(catalog_case(show)) << '\n';
            } else {
                for (const auto& c : benchmark_catalog()) std::cout << c.name << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
