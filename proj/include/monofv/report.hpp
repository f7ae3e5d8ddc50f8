#pragma once

#include "monofv/grid.hpp"
#include "monofv/solver.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monofv {

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One line of results.csv.
struct ResultRow {
    std::string case_name;
    std::string scheme;
    int nx = 0;
    int ny = 0;
    double dt = 0.0;             ///< 0 for stationary runs
    double n_iter = 0.0;         ///< N_iter, or N_iter_avg for transient runs
    double nonconverged = 0.0;   ///< fraction of non-converged solves
    double f_min = 0.0;
    double f_max = 0.0;
    double r_under = 0.0;
    double r_over = 0.0;
    std::optional<double> err2;  ///< relative L2 error when a reference exists
    double wall_seconds = 0.0;

    bool operator==(const ResultRow&) const = default;
};

std::string csv_header();
std::string to_csv(const ResultRow& row);
ResultRow parse_csv_row(const std::string& line);

void write_results(const std::filesystem::path& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

struct ConvergenceOrder {
    int n_coarse = 0;
    int n_fine = 0;
    double err_coarse = 0.0;
    double err_fine = 0.0;
    double order = 0.0;  ///< log(err ratio) / log(h ratio)
};

/// Observed orders between successive grid sizes of one case/scheme.
/// ReportError with fewer than two sizes or a missing Err2.
std::vector<ConvergenceOrder> convergence_report(std::span<const ResultRow> rows);

/// "iteration residual" lines after a comment header.
void emit_residual_history(const PicardReport& report, const std::filesystem::path& path);

/// "x y value" triples at cell centers, one grid row per block.
void emit_field(const Grid& grid, std::span<const double> f, const std::filesystem::path& path);

}  // namespace monofv
