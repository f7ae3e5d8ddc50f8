#pragma once

#include "monofv/monotonicity.hpp"
#include "monofv/picard_config.hpp"
#include "monofv/schemes.hpp"

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace monofv {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Relative residual the direct solve must reach (after refinement).
inline constexpr double kLinearTolerance = 1e-12;

/// Sparse LU for the fixed 9-point pattern of one grid. The symbolic analysis
/// is done on the first solve and reused afterwards.
class LinearSolver {
public:
    LinearSolver();
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    std::vector<double> solve(const LinearizedSystem& sys);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot solve of A x = B.
std::vector<double> linear_solve(const LinearizedSystem& sys);

struct PicardReport {
    SchemeKind scheme = SchemeKind::NLTPFA;
    int iterations = 0;              ///< number of linear solves
    std::vector<double> residuals;   ///< one per iteration
    bool converged = false;
    CWeights cweights;               ///< couple used (R-NLMPFA)
    std::vector<MonotonicityReport> audits;
    std::vector<std::vector<double>> iterates;  ///< X^0 .. X^N when requested
    /// Largest |row sum| / row magnitude of the extended systems met.
    double max_row_sum = 0.0;
    double f_min = 0.0;
    double f_max = 0.0;
    int n_under = 0;
    int n_over = 0;
    double r_under = 0.0;
    double r_over = 0.0;

    bool audit_pass() const;
    int audit_failures() const;
};

struct PicardResult {
    std::vector<double> field;
    PicardReport report;
};

/// Algorithm 1: X^{s+1} solves A(X^s) X^{s+1} = B(X^s) until the chosen
/// residual falls below epsilon or max_iter solves were made.
/// `previous` is the last time level when `d` carries a mass term.
PicardResult picard_solve(const Discretization& d, SchemeKind scheme, const PicardConfig& cfg,
                          const CWeights* cw = nullptr, std::span<const double> previous = {});

/// Couple for R-NLMPFA: the fixed one of the case when present, otherwise
/// computed from the discretization.
CWeights couple_for(const BenchmarkCase& c, const Discretization& d);

/// Fills f_min, f_max and the undershoot/overshoot counters against the
/// Dirichlet data range. Overshoots are only counted for source-free problems.
void fill_extrema(PicardReport& rep, std::span<const double> f, const Discretization& d);

struct TransientReport {
    SchemeKind scheme = SchemeKind::NLTPFA;
    double dt = 0.0;
    int steps = 0;
    std::vector<PicardReport> per_step;
    double n_iter_avg = 0.0;
    double nonconverged_fraction = 0.0;
    int nonconverged = 0;
    double f_min = 0.0;  ///< over all steps
    double f_max = 0.0;
    CWeights cweights;
};

struct TransientResult {
    std::vector<double> field;
    TransientReport report;
};

/// Backward Euler for G df/dt = div(G D grad f) + S from the case's f_init.
/// Each step runs the Picard loop from the previous field. ConfigError on
/// dt <= 0 or t_end <= 0.
TransientResult transient_solve(const BenchmarkCase& c, const Grid& grid, SchemeKind scheme,
                                double dt, double t_end, PicardConfig cfg,
                                std::optional<CWeights> cw = std::nullopt);

}  // namespace monofv
