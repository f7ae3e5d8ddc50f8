#pragma once

#include "monofv/grid.hpp"
#include "monofv/picard_config.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monofv {

class TensorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProblemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Symmetric 2x2 diffusion tensor.
struct Tensor2 {
    double xx = 1.0;
    double xy = 0.0;
    double yy = 1.0;

    double det() const { return xx * yy - xy * xy; }
    bool is_spd() const { return xx > 0.0 && yy > 0.0 && det() > 0.0; }
    /// Largest over smallest eigenvalue.
    double anisotropy_ratio() const;
    Tensor2 scaled(double s) const { return {s * xx, s * xy, s * yy}; }
};

using ScalarFn = std::function<double(double, double)>;
using VectorFn = std::function<std::array<double, 2>(double, double)>;

/// Pointwise evaluator of the diffusion tensor, with an optional analytic
/// divergence (row-wise, d_i D_ij) and an optional positive weight G.
class TensorField {
public:
    TensorField() = default;
    TensorField(std::function<Tensor2(double, double)> eval, double declared_ratio,
                std::string description);

    Tensor2 operator()(double x, double y) const { return eval_(x, y); }
    Tensor2 at(Point p) const { return eval_(p.x, p.y); }

    /// Evaluate and throw TensorError unless the result is symmetric positive definite.
    Tensor2 checked(Point p) const;

    bool has_divergence() const { return static_cast<bool>(divergence_); }
    std::array<double, 2> divergence(double x, double y) const;
    TensorField& with_divergence(VectorFn div);

    bool has_weight() const { return static_cast<bool>(weight_); }
    double weight(double x, double y) const { return weight_ ? weight_(x, y) : 1.0; }
    TensorField& with_weight(ScalarFn g);

    /// The tensor G * D used by the weighted (transient) equation.
    TensorField effective() const;

    double declared_ratio() const { return declared_ratio_; }
    const std::string& description() const { return description_; }

private:
    std::function<Tensor2(double, double)> eval_;
    VectorFn divergence_;
    ScalarFn weight_;
    double declared_ratio_ = 1.0;
    std::string description_;
};

TensorField constant_tensor(Tensor2 d);
TensorField identity_tensor();
/// Uniform tensor (1e7, 1e3; 1e3, 1).
TensorField uniform_tensor();
/// (1/(x^2+y^2)) [[a x^2 + y^2, (a-1) x y], [(a-1) x y, x^2 + a y^2]]; eigenvalues 1 and a.
/// The origin may be shifted: the formula is applied to (x - x0, y - y0).
TensorField rotational_tensor(double alpha, double x0 = 0.0, double y0 = 0.0);

/// Smooth analytic field with derivatives, for manufactured solutions.
struct AnalyticField {
    ScalarFn value;
    VectorFn gradient;
    std::function<std::array<double, 3>(double, double)> hessian;  ///< (fxx, fxy, fyy)
};

AnalyticField sin_sin_field();
AnalyticField constant_field(double c);

/// S = -div(D grad f), from the closed forms of f and of D (value and divergence).
ScalarFn manufactured_source(const AnalyticField& f, const TensorField& d);

enum class BcKind { Dirichlet, NoFlux };

struct SideCondition {
    BcKind kind = BcKind::Dirichlet;
    ScalarFn value = [](double, double) { return 0.0; };
};

struct BoundaryConditions {
    std::array<SideCondition, 4> sides;

    const SideCondition& operator[](BoundarySide s) const { return sides[static_cast<int>(s)]; }
    SideCondition& operator[](BoundarySide s) { return sides[static_cast<int>(s)]; }

    static BoundaryConditions all_dirichlet(ScalarFn value);
};

/// Dirichlet values at boundary-edge midpoints, for the extremum bounds.
struct DirichletRange {
    double min = 0.0;
    double max = 0.0;
    bool any = false;
};
DirichletRange dirichlet_range(const Grid& grid, const BoundaryConditions& bc);

enum class SourceKind { Zero, Box, Function };

/// Volume source. Box indicators are integrated exactly over cell-box overlaps;
/// pointwise sources use the midpoint rule.
struct Source {
    SourceKind kind = SourceKind::Zero;
    std::array<double, 4> box{0, 0, 0, 0};  ///< x0, x1, y0, y1
    double box_value = 1.0;
    ScalarFn fn;

    double operator()(double x, double y) const;
    /// Integral of the source over the cell.
    double cell_integral(const Grid& grid, int cell) const;
    bool is_zero() const { return kind == SourceKind::Zero; }
};

/// Discrete L2 norm with cell-area weights.
double l2_norm(const Grid& grid, std::span<const double> f);

/// Relative discrete L2 error against `ref` sampled at cell centers.
/// Throws ProblemError when the reference has zero norm.
double err2(std::span<const double> f, const ScalarFn& ref, const Grid& grid);

// ---------------------------------------------------------------------------
// Serializable case description and its materialization.

struct GridSpec {
    std::array<double, 4> domain{0.0, 1.0, 0.0, 1.0};  ///< x0, x1, y0, y1
    std::vector<int> sizes{20, 40, 80};                 ///< n for n x n uniform grids
    std::vector<double> x_lines;                        ///< explicit lines override sizes
    std::vector<double> y_lines;

    bool explicit_lines() const { return !x_lines.empty(); }
    Grid make(int n) const;
};

struct TensorSpec {
    std::string kind = "constant";  ///< constant | uniform | rotational
    Tensor2 value;                  ///< constant
    double alpha = 1.0;             ///< rotational
    std::array<double, 2> origin{0.0, 0.0};
    double scale = 1.0;
};

struct SourceSpec {
    std::string kind = "zero";  ///< zero | box | manufactured
    std::array<double, 4> box{0.25, 0.75, 0.25, 0.75};
    double value = 1.0;
};

struct SideSpec {
    std::string kind = "dirichlet";  ///< dirichlet | noflux
    std::string data = "zero";       ///< zero | constant | sinsin | reference
    double constant = 0.0;
};

struct WeightSpec {
    std::string kind = "none";  ///< none | affine (G = (a + x)(b + y))
    double a = 0.5;
    double b = 1.0;
};

struct TransientSpec {
    bool enabled = false;
    double dt = 1000.0;
    double t_end = 90000.0;
    double f_init = 1e30;
    WeightSpec weight;
};

struct CaseConfig {
    std::string name;
    GridSpec grid;
    TensorSpec tensor;
    SourceSpec source;
    std::array<SideSpec, 4> sides;  ///< west, east, south, north
    std::string reference = "none";  ///< none | sinsin
    PicardConfig picard;
    std::optional<std::array<double, 2>> couple;  ///< fixed (c1, c2) for R-NLMPFA
    TransientSpec transient;
};

/// Materialized case: evaluators ready for discretization.
struct BenchmarkCase {
    CaseConfig config;
    TensorField tensor;
    Source source;
    BoundaryConditions bc;
    std::optional<AnalyticField> reference;

    const std::string& name() const { return config.name; }
};

TensorField make_tensor(const TensorSpec& spec, const WeightSpec& weight = {});
BenchmarkCase make_case(const CaseConfig& config);

/// The five stationary benchmarks plus the synthetic transient case.
std::vector<CaseConfig> benchmark_catalog();
/// Catalog lookup by name; throws ProblemError for unknown names.
CaseConfig catalog_case(const std::string& name);

}  // namespace monofv
