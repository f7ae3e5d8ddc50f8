#pragma once

#include "monofv/problems.hpp"
#include "monofv/report.hpp"
#include "monofv/schemes.hpp"
#include "monofv/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace monofv {

/// Overrides applied on top of a case's own Picard settings.
struct PicardOverrides {
    std::optional<double> epsilon;
    std::optional<ResidualKind> residual;
    std::optional<int> max_iter;
    std::optional<InitPolicy> init;
    bool audit = false;

    void apply(PicardConfig& cfg) const;
};

struct RunSpec {
    std::string case_ref;  ///< catalog name or JSON path
    std::vector<SchemeKind> schemes{kAllSchemes.begin(), kAllSchemes.end()};
    std::vector<int> grids;  ///< empty: the case's own sizes
    PicardOverrides picard;
    std::optional<std::filesystem::path> out;
    bool dump_matrix = false;
    int threads = 0;  ///< 0: hardware concurrency

    void validate() const;
};

struct RunOutcome {
    ResultRow row;
    PicardReport report;
};

/// One stationary solve of a materialized case on an n x n grid.
RunOutcome run_stationary(const BenchmarkCase& c, int n, SchemeKind scheme, const PicardConfig& cfg,
                          const std::optional<std::filesystem::path>& out = std::nullopt,
                          bool dump_matrix = false);

/// Every (scheme, grid) pair of the spec, run concurrently; rows come back in
/// scheme-major order. Writes results.csv and per-run files when `out` is set.
std::vector<RunOutcome> run(const RunSpec& spec);

struct TransientRunSpec {
    std::string case_ref = "transient";
    std::vector<SchemeKind> schemes{SchemeKind::NLMPFA, SchemeKind::RNLMPFA};
    std::vector<double> dts;  ///< empty: the case's dt
    std::optional<double> t_end;
    std::optional<int> n;     ///< grid size override
    PicardOverrides picard;
    std::optional<std::filesystem::path> out;
    int threads = 0;
};

struct TransientOutcome {
    ResultRow row;
    TransientReport report;
};

std::vector<TransientOutcome> run_transient(const TransientRunSpec& spec);

/// "case_scheme_n" (plus "_dt<value>" for transient runs), safe for file names.
std::string run_tag(const std::string& case_name, SchemeKind s, int n, double dt = 0.0);

}  // namespace monofv
