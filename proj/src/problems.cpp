#include "monofv/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace monofv {

double Tensor2::anisotropy_ratio() const {
    const double half_tr = 0.5 * (xx + yy);
    const double disc = std::hypot(0.5 * (xx - yy), xy);
    const double lmax = half_tr + disc;
    const double lmin = det() / lmax;  // avoids cancellation in half_tr - disc
    return lmax / lmin;
}

TensorField::TensorField(std::function<Tensor2(double, double)> eval, double declared_ratio,
                         std::string description)
    : eval_(std::move(eval)), declared_ratio_(declared_ratio),
      description_(std::move(description)) {}

Tensor2 TensorField::checked(Point p) const {
    const Tensor2 d = eval_(p.x, p.y);
    if (!d.is_spd()) {
        throw TensorError("diffusion tensor is not SPD at (" + std::to_string(p.x) + ", " +
                          std::to_string(p.y) + ")");
    }
    return d;
}

std::array<double, 2> TensorField::divergence(double x, double y) const {
    if (!divergence_) throw TensorError("tensor field '" + description_ + "' has no divergence");
    return divergence_(x, y);
}

TensorField& TensorField::with_divergence(VectorFn div) {
    divergence_ = std::move(div);
    return *this;
}

TensorField& TensorField::with_weight(ScalarFn g) {
    weight_ = std::move(g);
    return *this;
}

TensorField TensorField::effective() const {
    if (!weight_) return *this;
    auto eval = eval_;
    auto g = weight_;
    TensorField out(
        [eval, g](double x, double y) {
            const double w = g(x, y);
            if (!(w > 0.0)) throw TensorError("weight G must be positive");
            return eval(x, y).scaled(w);
        },
        declared_ratio_, description_ + " (weighted)");
    return out;
}

TensorField constant_tensor(Tensor2 d) {
    TensorField t([d](double, double) { return d; }, d.anisotropy_ratio(), "constant");
    t.with_divergence([](double, double) { return std::array<double, 2>{0.0, 0.0}; });
    return t;
}

TensorField identity_tensor() { return constant_tensor({1.0, 0.0, 1.0}); }

TensorField uniform_tensor() {
    constexpr Tensor2 d{1e7, 1e3, 1.0};
    TensorField t([d](double, double) { return d; }, d.anisotropy_ratio(), "uniform");
    t.with_divergence([](double, double) { return std::array<double, 2>{0.0, 0.0}; });
    return t;
}

TensorField rotational_tensor(double alpha, double x0, double y0) {
    if (!(alpha > 0.0)) throw TensorError("rotational tensor needs alpha > 0");
    auto eval = [alpha, x0, y0](double x, double y) {
        const double X = x - x0;
        const double Y = y - y0;
        const double r2 = X * X + Y * Y;
        if (r2 == 0.0) throw TensorError("rotational tensor is singular at its origin");
        return Tensor2{(alpha * X * X + Y * Y) / r2, (alpha - 1.0) * X * Y / r2,
                       (X * X + alpha * Y * Y) / r2};
    };
    TensorField t(eval, std::max(alpha, 1.0 / alpha), "rotational");
    // D = I + (alpha - 1) r r^T / r^2, so div D = (alpha - 1) r / r^2.
    t.with_divergence([alpha, x0, y0](double x, double y) {
        const double X = x - x0;
        const double Y = y - y0;
        const double r2 = X * X + Y * Y;
        if (r2 == 0.0) throw TensorError("rotational tensor is singular at its origin");
        return std::array<double, 2>{(alpha - 1.0) * X / r2, (alpha - 1.0) * Y / r2};
    });
    return t;
}

AnalyticField sin_sin_field() {
    using std::numbers::pi;
    AnalyticField f;
    f.value = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    f.gradient = [](double x, double y) {
        return std::array<double, 2>{pi * std::cos(pi * x) * std::sin(pi * y),
                                     pi * std::sin(pi * x) * std::cos(pi * y)};
    };
    f.hessian = [](double x, double y) {
        const double s = std::sin(pi * x) * std::sin(pi * y);
        return std::array<double, 3>{-pi * pi * s, pi * pi * std::cos(pi * x) * std::cos(pi * y),
                                     -pi * pi * s};
    };
    return f;
}

AnalyticField constant_field(double c) {
    AnalyticField f;
    f.value = [c](double, double) { return c; };
    f.gradient = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
    f.hessian = [](double, double) { return std::array<double, 3>{0.0, 0.0, 0.0}; };
    return f;
}

ScalarFn manufactured_source(const AnalyticField& f, const TensorField& d) {
    if (!d.has_divergence()) {
        throw TensorError("manufactured source needs a closed-form tensor divergence");
    }
    return [f, d](double x, double y) {
        // -div(D grad f) = -(D : H + (div D) . grad f)
        const Tensor2 t = d(x, y);
        const auto g = f.gradient(x, y);
        const auto h = f.hessian(x, y);
        const auto div = d.divergence(x, y);
        return -(t.xx * h[0] + 2.0 * t.xy * h[1] + t.yy * h[2] + div[0] * g[0] + div[1] * g[1]);
    };
}

BoundaryConditions BoundaryConditions::all_dirichlet(ScalarFn value) {
    BoundaryConditions bc;
    for (auto& s : bc.sides) s = SideCondition{BcKind::Dirichlet, value};
    return bc;
}

DirichletRange dirichlet_range(const Grid& grid, const BoundaryConditions& bc) {
    DirichletRange r;
    for (const Edge& e : grid.boundary_edges()) {
        const SideCondition& sc = bc[e.side];
        if (sc.kind != BcKind::Dirichlet) continue;
        const double v = sc.value(e.mid.x, e.mid.y);
        if (!r.any) {
            r.min = r.max = v;
            r.any = true;
        } else {
            r.min = std::min(r.min, v);
            r.max = std::max(r.max, v);
        }
    }
    return r;
}

double Source::operator()(double x, double y) const {
    switch (kind) {
    case SourceKind::Zero: return 0.0;
    case SourceKind::Box:
        return (x >= box[0] && x <= box[1] && y >= box[2] && y <= box[3]) ? box_value : 0.0;
    case SourceKind::Function: return fn(x, y);
    }
    return 0.0;
}

double Source::cell_integral(const Grid& grid, int cell) const {
    switch (kind) {
    case SourceKind::Zero: return 0.0;
    case SourceKind::Box: {
        const int i = grid.i_of(cell);
        const int j = grid.j_of(cell);
        const auto xs = grid.x_lines();
        const auto ys = grid.y_lines();
        const double wx = std::max(0.0, std::min(xs[i + 1], box[1]) - std::max(xs[i], box[0]));
        const double wy = std::max(0.0, std::min(ys[j + 1], box[3]) - std::max(ys[j], box[2]));
        return box_value * wx * wy;
    }
    case SourceKind::Function: {
        const Point c = grid.center(cell);
        return fn(c.x, c.y) * grid.area(cell);
    }
    }
    return 0.0;
}

double l2_norm(const Grid& grid, std::span<const double> f) {
    double s = 0.0;
    for (int k = 0; k < grid.num_cells(); ++k) s += grid.area(k) * f[k] * f[k];
    return std::sqrt(s);
}

double err2(std::span<const double> f, const ScalarFn& ref, const Grid& grid) {
    if (static_cast<int>(f.size()) != grid.num_cells()) {
        throw ProblemError("err2: field size does not match the grid");
    }
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k < grid.num_cells(); ++k) {
        const Point c = grid.center(k);
        const double r = ref(c.x, c.y);
        num += grid.area(k) * (f[k] - r) * (f[k] - r);
        den += grid.area(k) * r * r;
    }
    if (den == 0.0) throw ProblemError("err2: reference field has zero norm");
    return std::sqrt(num / den);
}

Grid GridSpec::make(int n) const {
    if (explicit_lines()) return Grid(x_lines, y_lines);
    return uniform_grid(domain[0], domain[1], domain[2], domain[3], n, n);
}

TensorField make_tensor(const TensorSpec& spec, const WeightSpec& weight) {
    TensorField t;
    if (spec.kind == "uniform") {
        t = uniform_tensor();
    } else if (spec.kind == "rotational") {
        t = rotational_tensor(spec.alpha, spec.origin[0], spec.origin[1]);
    } else if (spec.kind == "constant") {
        if (!spec.value.is_spd()) throw TensorError("constant tensor is not SPD");
        t = constant_tensor(spec.value);
    } else {
        throw ProblemError("unknown tensor kind '" + spec.kind + "'");
    }
    if (spec.scale != 1.0) {
        if (!(spec.scale > 0.0)) throw TensorError("tensor scale must be positive");
        const double s = spec.scale;
        TensorField base = t;
        TensorField scaled([base, s](double x, double y) { return base(x, y).scaled(s); },
                           base.declared_ratio(), base.description() + " (scaled)");
        if (base.has_divergence()) {
            scaled.with_divergence([base, s](double x, double y) {
                auto d = base.divergence(x, y);
                return std::array<double, 2>{s * d[0], s * d[1]};
            });
        }
        t = scaled;
    }
    if (weight.kind == "affine") {
        const double a = weight.a;
        const double b = weight.b;
        t.with_weight([a, b](double x, double y) { return (a + x) * (b + y); });
    } else if (weight.kind != "none") {
        throw ProblemError("unknown weight kind '" + weight.kind + "'");
    }
    return t;
}

BenchmarkCase make_case(const CaseConfig& config) {
    BenchmarkCase c;
    c.config = config;
    c.tensor = make_tensor(config.tensor, config.transient.weight);

    if (config.reference == "sinsin") {
        c.reference = sin_sin_field();
    } else if (config.reference != "none") {
        throw ProblemError("unknown reference '" + config.reference + "'");
    }

    const auto& s = config.source;
    if (s.kind == "zero") {
        c.source.kind = SourceKind::Zero;
    } else if (s.kind == "box") {
        c.source.kind = SourceKind::Box;
        c.source.box = s.box;
        c.source.box_value = s.value;
    } else if (s.kind == "manufactured") {
        if (!c.reference) throw ProblemError("manufactured source needs a reference solution");
        c.source.kind = SourceKind::Function;
        c.source.fn = manufactured_source(*c.reference, c.tensor);
    } else {
        throw ProblemError("unknown source kind '" + s.kind + "'");
    }

    for (int k = 0; k < 4; ++k) {
        const SideSpec& sp = config.sides[k];
        SideCondition sc;
        if (sp.kind == "noflux") {
            sc.kind = BcKind::NoFlux;
        } else if (sp.kind == "dirichlet") {
            sc.kind = BcKind::Dirichlet;
        } else {
            throw ProblemError("unknown boundary kind '" + sp.kind + "'");
        }
        if (sp.data == "zero") {
            sc.value = [](double, double) { return 0.0; };
        } else if (sp.data == "constant") {
            const double v = sp.constant;
            sc.value = [v](double, double) { return v; };
        } else if (sp.data == "sinsin") {
            sc.value = sin_sin_field().value;
        } else if (sp.data == "reference") {
            if (!c.reference) throw ProblemError("boundary data 'reference' needs a reference");
            sc.value = c.reference->value;
        } else {
            throw ProblemError("unknown boundary data '" + sp.data + "'");
        }
        c.bc.sides[k] = sc;
    }
    return c;
}

namespace {

SideSpec dirichlet(const std::string& data, double constant = 0.0) {
    return SideSpec{"dirichlet", data, constant};
}
SideSpec noflux() { return SideSpec{"noflux", "zero", 0.0}; }

CaseConfig stationary(std::string name, std::array<double, 4> domain) {
    CaseConfig c;
    c.name = std::move(name);
    c.grid.domain = domain;
    c.grid.sizes = {20, 40, 80};
    c.picard.epsilon = 1e-6;
    c.picard.residual = ResidualKind::SuccessiveIterates;
    c.picard.init = InitPolicy::Ones;
    c.picard.max_iter = 2000;
    return c;
}

}  // namespace

std::vector<CaseConfig> benchmark_catalog() {
    std::vector<CaseConfig> out;

    {
        CaseConfig c = stationary("uniform", {0.0, 0.5, 0.0, 0.5});
        c.tensor.kind = "uniform";
        c.sides = {dirichlet("sinsin"), dirichlet("sinsin"), dirichlet("sinsin"),
                   dirichlet("sinsin")};
        c.couple = std::array<double, 2>{8.327e-6, 4.164e-6};
        out.push_back(c);
    }
    {
        CaseConfig c = stationary("positivity", {0.0, 1.0, 0.0, 1.0});
        c.tensor.kind = "rotational";
        c.tensor.alpha = 1e-9;
        c.source.kind = "box";
        c.sides = {dirichlet("zero"), noflux(), dirichlet("zero"), dirichlet("zero")};
        c.couple = std::array<double, 2>{2.548e-5, 1.274e-5};
        out.push_back(c);
    }
    {
        CaseConfig c = stationary("minimum", {0.0, 1.0, 0.0, 1.0});
        c.tensor.kind = "rotational";
        c.tensor.alpha = 1e-9;
        c.source.kind = "box";
        c.sides = {dirichlet("constant", 1.0), dirichlet("constant", 1.0),
                   dirichlet("constant", 1.0), dirichlet("constant", 1.0)};
        c.couple = std::array<double, 2>{2.548e-5, 1.274e-5};
        out.push_back(c);
    }
    {
        CaseConfig c = stationary("minmax", {0.0, 0.5, 0.0, 0.5});
        c.tensor.kind = "rotational";
        c.tensor.alpha = 1e-9;
        c.sides = {dirichlet("sinsin"), noflux(), dirichlet("sinsin"), dirichlet("sinsin")};
        c.couple = std::array<double, 2>{2.548e-5, 1.274e-5};
        out.push_back(c);
    }
    {
        CaseConfig c = stationary("convergence", {0.0, 0.5, 0.0, 0.5});
        c.tensor.kind = "rotational";
        c.tensor.alpha = 1e-6;
        c.source.kind = "manufactured";
        c.reference = "sinsin";
        c.sides = {dirichlet("reference"), dirichlet("reference"), dirichlet("reference"),
                   dirichlet("reference")};
        c.couple = std::array<double, 2>{2.61e-5, 1.305e-5};
        out.push_back(c);
    }
    {
        // Synthetic stand-in for a pitch-angle/energy diffusion plane: x plays
        // the pitch-angle sine, y a normalized energy coordinate.
        CaseConfig c;
        c.name = "transient";
        c.grid.domain = {0.0867, 1.0, 0.0, 1.0};
        c.grid.sizes = {24};
        c.tensor.kind = "rotational";
        c.tensor.alpha = 1e-6;
        c.tensor.origin = {-0.2, -0.2};
        c.tensor.scale = 2e-5;
        c.sides = {dirichlet("zero"), noflux(), dirichlet("constant", 1e30), dirichlet("zero")};
        c.picard.epsilon = 1e-6;
        c.picard.residual = ResidualKind::AlgebraicResidual;
        c.picard.init = InitPolicy::GivenField;
        c.picard.max_iter = 300;
        c.transient.enabled = true;
        c.transient.dt = 1000.0;
        c.transient.t_end = 90000.0;
        c.transient.f_init = 1e30;
        c.transient.weight = WeightSpec{"affine", 0.5, 1.0};
        out.push_back(c);
    }
    return out;
}

CaseConfig catalog_case(const std::string& name) {
    for (auto& c : benchmark_catalog()) {
        if (c.name == name) return c;
    }
    throw ProblemError("unknown case '" + name + "'");
}

}  // namespace monofv
