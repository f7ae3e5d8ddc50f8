#pragma once

#include "monofv/flux_kernel.hpp"
#include "monofv/grid.hpp"
#include "monofv/problems.hpp"

#include <array>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monofv {

class SchemeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SchemeKind { NLTPFA, NLMPFA, RNLMPFA };

std::string to_string(SchemeKind s);
/// "nltpfa" | "nlmpfa" | "rnlmpfa" (case-insensitive); ConfigError otherwise.
SchemeKind parse_scheme(const std::string& s);
inline constexpr std::array<SchemeKind, 3> kAllSchemes{SchemeKind::NLTPFA, SchemeKind::NLMPFA,
                                                      SchemeKind::RNLMPFA};

/// Stencil offsets in the local numbering 1..9 (stored 0..8):
/// center, E, NE, N, NW, W, SW, S, SE.
inline constexpr std::array<std::array<int, 2>, 9> kStencil{{
    {0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

/// Slot (0..8) of offset (di, dj), or -1.
int stencil_slot(int di, int dj);

struct Couple {
    double c1 = 0.5;  ///< weight kept on the lower/left side's transverse branch
    double c2 = 0.5;  ///< same for the upper/right side
};

struct CWeights {
    Couple x;  ///< couple of vertical edges (x-direction fluxes)
    Couple y;
    /// Smallest admissible c2 found over the audited cells (before the safety
    /// factor); +inf when no cross diffusion reaches the bounds.
    double bound = std::numeric_limits<double>::infinity();

    const Couple& along(Axis a) const { return a == Axis::X ? x : y; }
    static CWeights shared(double c1, double c2) { return {{c1, c2}, {c1, c2}, std::numeric_limits<double>::infinity()}; }
};

/// Linearized 9-point system A(X) X = B(X) for a frozen state X.
struct LinearizedSystem {
    int nx = 0;
    int ny = 0;
    SchemeKind scheme = SchemeKind::NLTPFA;
    std::vector<std::array<double, 9>> m;  ///< row stencil coefficients m_1..m_9
    std::vector<double> rhs;
    /// Sum of the coefficients that multiplied boundary values before they were
    /// moved into rhs, so that row sums can be checked on the extended system.
    std::vector<double> boundary_coeff;
    std::vector<double> mass;  ///< time-derivative diagonal already included in m_1

    int size() const { return nx * ny; }
    /// Cell id of stencil slot k of row r, or -1 outside the mesh.
    int column(int row, int slot) const;
    int nonzeros(int row) const;
    double entry(int row, int col) const;
    std::vector<double> apply(std::span<const double> x) const;
    /// B - A x.
    std::vector<double> residual(std::span<const double> x) const;
    /// Row sum of the extended system (cells + boundary coefficients, no mass).
    double extended_row_sum(int row) const;

    /// (row, col, value) lines, 0-based, one per nonzero.
    void write_triplets(std::ostream& os) const;
};

/// A case bound to one grid: kernels, cell sources, and for transient steps
/// the mass diagonal G|K|/dt.
struct Discretization {
    Grid grid;
    KernelSet kernels;
    std::vector<double> source;  ///< integral of S over each cell
    std::vector<double> mass;    ///< empty for stationary problems
    DirichletRange range;
    bool has_source = false;

    int size() const { return grid.num_cells(); }
};

/// Builds the discretization. With dt > 0 the tensor becomes G D and the mass
/// diagonal G(x_K)|K|/dt is added.
Discretization discretize(const BenchmarkCase& c, Grid grid, double dt = 0.0);

// ---------------------------------------------------------------------------
// Edge fluxes.

struct EdgeWeights {
    double mu1 = 0.5;
    double mu2 = 0.5;
};

/// NLTPFA weights from the edge-unknown groups a_1, a_2 (absolute values).
EdgeWeights nltpfa_weights(double a1, double a2);
EdgeWeights nltpfa_weights(const EdgeKernel& k, std::span<const double> state);

/// Weights of the multipoint schemes from the transverse groups G_1, G_2.
EdgeWeights mpfa_weights(double g1, double g2);

/// Coefficients of one side's row contribution: the flux leaving `self`
/// is sum coeff * value over {self, other, t_self, t_other}.
struct RowPiece {
    double self = 0.0;
    double other = 0.0;
    double t_self = 0.0;
    double t_other = 0.0;
};

struct EdgeLinearization {
    EdgeWeights mu;
    RowPiece lower;  ///< row of the lower cell
    RowPiece upper;  ///< row of the upper cell
    double g1 = 0.0;
    double g2 = 0.0;
};

/// Linearization of the NLMPFA (c = 0) or R-NLMPFA flux across an interior edge.
EdgeLinearization mpfa_linearize(const EdgeKernel& k, Couple c, std::span<const double> state);

/// Linearization of NLTPFA: lower row (alpha, -beta), upper row (beta, -alpha).
EdgeLinearization nltpfa_linearize(const EdgeKernel& k, std::span<const double> state);

/// Outward nonlinear fluxes of both cells evaluated at `state`.
struct EdgeFlux {
    double lower = 0.0;
    double upper = 0.0;
};
EdgeFlux edge_flux(SchemeKind s, const EdgeKernel& k, const CWeights& cw,
                   std::span<const double> state);

// ---------------------------------------------------------------------------
// Assembly.

struct AssembleOptions {
    /// Freeze every edge at mu = 1/2 without transverse branches on interior
    /// edges: the linear two-point scheme used for LinearSchemeOutput.
    bool linear_two_point = false;
    /// Previous time level, used when the discretization carries a mass term.
    std::span<const double> previous;
};

LinearizedSystem assemble(SchemeKind scheme, const Discretization& d, std::span<const double> frozen,
                          const CWeights* cw = nullptr, const AssembleOptions& opt = {});

// ---------------------------------------------------------------------------
// R-NLMPFA couples.

inline constexpr double kCSafety = 0.9;
inline constexpr double kCCap = 0.45;  ///< c2 cap, keeps c1 = 2 c2 below 1

/// Couple with c1 = 2 c2 and c2 = 0.9 * smallest local bound of the five
/// inequalities over cells with a full 9-point neighborhood. Returns
/// (0.5, 0.5) when no cross diffusion enters the bounds.
CWeights compute_c_weights(const Discretization& d);

struct CoupleCheck {
    bool pass = true;
    int cells = 0;
    std::array<double, 5> worst_margin;  ///< min over cells of 1 - lhs/rhs per inequality
    int failing_cell = -1;
};

/// Verifies a couple against the five inequalities on every full-stencil cell.
CoupleCheck check_couple(const Discretization& d, const CWeights& cw);

}  // namespace monofv
