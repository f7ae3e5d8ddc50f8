#pragma once

// Random small cases and a dense brute-force assembler used as an oracle for
// the library's 9-point assembly.

#include "monofv/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace monofv::oracle {

struct RandomCase {
    std::vector<double> xl;
    std::vector<double> yl;
    std::vector<Tensor2> d;  // per cell, row-major
    std::array<BcKind, 4> kind;
    std::array<double, 3> data{1.0, 0.0, 0.0};  // Dirichlet data a0 + a1 x + a2 y
    BenchmarkCase bench;
};

inline std::vector<double> random_lines(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> w(0.3, 1.7);
    std::vector<double> l{0.0};
    for (int k = 0; k < n; ++k) l.push_back(l.back() + w(rng) / n);
    return l;
}

/// SPD tensor with eigenvalues s and s / ratio, principal axis at angle phi.
inline Tensor2 rotated_tensor(double s, double ratio, double phi) {
    const double c = std::cos(phi);
    const double sn = std::sin(phi);
    const double l1 = s;
    const double l2 = s / ratio;
    return {l1 * c * c + l2 * sn * sn, (l1 - l2) * c * sn, l1 * sn * sn + l2 * c * c};
}

inline RandomCase random_case(std::mt19937_64& rng, int nx, int ny, double max_log_ratio = 9.0,
                              bool allow_noflux = true) {
    RandomCase rc;
    rc.xl = random_lines(rng, nx);
    rc.yl = random_lines(rng, ny);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < nx * ny; ++k) {
        const double ratio = std::pow(10.0, max_log_ratio * u(rng));
        const double s = std::pow(10.0, 2.0 * u(rng) - 1.0);
        rc.d.push_back(rotated_tensor(s, ratio, M_PI * u(rng)));
    }
    rc.data = {0.5 + u(rng), u(rng), u(rng)};
    for (int k = 0; k < 4; ++k) {
        rc.kind[k] = allow_noflux && u(rng) < 0.3 ? BcKind::NoFlux : BcKind::Dirichlet;
    }
    rc.kind[2] = BcKind::Dirichlet;  // keep the problem well posed

    const auto xl = rc.xl;
    const auto yl = rc.yl;
    const auto cells = rc.d;
    auto eval = [xl, yl, cells, nx](double x, double y) {
        const int i = static_cast<int>(std::upper_bound(xl.begin(), xl.end(), x) - xl.begin()) - 1;
        const int j = static_cast<int>(std::upper_bound(yl.begin(), yl.end(), y) - yl.begin()) - 1;
        return cells[std::clamp(j, 0, static_cast<int>(yl.size()) - 2) * nx +
                     std::clamp(i, 0, nx - 1)];
    };
    rc.bench.tensor = TensorField(eval, std::pow(10.0, max_log_ratio), "random cells");
    const auto data = rc.data;
    for (int k = 0; k < 4; ++k) {
        rc.bench.bc.sides[k].kind = rc.kind[k];
        rc.bench.bc.sides[k].value = [data](double x, double y) {
            return data[0] + data[1] * x + data[2] * y;
        };
    }
    rc.bench.config.name = "random";
    return rc;
}

inline Grid grid_of(const RandomCase& rc) { return Grid(rc.xl, rc.yl); }

/// Dense matrix and right-hand side assembled edge by edge from the flux
/// formulas, without the library's kernels.
struct DenseSystem {
    int n = 0;
    std::vector<double> a;  // row-major n x n
    std::vector<double> b;
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }
};

inline DenseSystem oracle_assemble(const RandomCase& rc, SchemeKind scheme, const std::vector<double>& f,
                                   Couple cx, Couple cy) {
    const int nx = static_cast<int>(rc.xl.size()) - 1;
    const int ny = static_cast<int>(rc.yl.size()) - 1;
    const int n = nx * ny;
    DenseSystem s;
    s.n = n;
    s.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    s.b.assign(n, 0.0);

    auto xc = [&](int i) { return 0.5 * (rc.xl[i] + rc.xl[i + 1]); };
    auto yc = [&](int j) { return 0.5 * (rc.yl[j] + rc.yl[j + 1]); };
    auto hx = [&](int i) { return rc.xl[i + 1] - rc.xl[i]; };
    auto hy = [&](int j) { return rc.yl[j + 1] - rc.yl[j]; };
    auto g = [&](double x, double y) { return rc.data[0] + rc.data[1] * x + rc.data[2] * y; };
    auto inside = [&](int i, int j) { return i >= 0 && j >= 0 && i < nx && j < ny; };
    // side index in the case: west, east, south, north
    auto side_of = [](bool xdir, int sign) { return xdir ? (sign > 0 ? 1 : 0) : (sign > 0 ? 3 : 2); };

    // Transverse reference seen from cell (i, j) whose outward normal on the
    // edge is sign * e_axis.
    struct Trans {
        int cell = -1;        // neighbor cell, or -1
        bool dropped = false;
        double ghost = 0.0;
        double nu = 0.0;      // cell-centered coefficient
        double eta = 0.0;     // edge form coefficient
        double tedge = 0.0;   // value on the transverse edge (edge form)
    };
    auto transverse = [&](int i, int j, bool xdir, int sign, double len) {
        const Tensor2& d = rc.d[j * nx + i];
        const int dir = (sign > 0) == (d.xy >= 0.0) ? 1 : -1;
        const int ti = xdir ? i : i + dir;
        const int tj = xdir ? j + dir : j;
        const double half = 0.5 * (xdir ? hy(j) : hx(i));
        Trans t;
        if (inside(ti, tj)) {
            t.cell = tj * nx + ti;
            const double gap = xdir ? std::abs(yc(tj) - yc(j)) : std::abs(xc(ti) - xc(i));
            t.nu = std::abs(d.xy) * len / gap;
            t.eta = std::abs(d.xy) * len / half;
            const Tensor2& dm = rc.d[t.cell];
            const double ks = (xdir ? d.yy : d.xx) / half;
            const double km = (xdir ? dm.yy : dm.xx) / (0.5 * (xdir ? hy(tj) : hx(ti)));
            t.tedge = (ks * f[j * nx + i] + km * f[t.cell]) / (ks + km);
            return t;
        }
        const int side = side_of(!xdir, dir);
        if (rc.kind[side] == BcKind::NoFlux) {
            t.dropped = true;
            return t;
        }
        const double px = xdir ? xc(i) : (dir > 0 ? rc.xl[nx] : rc.xl[0]);
        const double py = xdir ? (dir > 0 ? rc.yl[ny] : rc.yl[0]) : yc(j);
        t.ghost = g(px, py);
        t.nu = std::abs(d.xy) * len / half;
        t.eta = t.nu;
        t.tedge = t.ghost;
        return t;
    };
    auto tval = [&](const Trans& t) { return t.cell >= 0 ? f[t.cell] : t.ghost; };
    // coefficient v on the transverse unknown of row r
    auto put = [&](int r, const Trans& t, double v) {
        if (t.dropped) return;
        if (t.cell >= 0) {
            s.at(r, t.cell) += v;
        } else {
            s.b[r] -= v * t.ghost;
        }
    };

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = j * nx + i;
            const Tensor2& dk = rc.d[k];
            const int dirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            for (const auto& dd : dirs) {
                const bool xdir = dd[0] != 0;
                const int sign = xdir ? dd[0] : dd[1];
                const double len = xdir ? hy(j) : hx(i);
                const double dnn_k = xdir ? dk.xx : dk.yy;
                const double half_n = 0.5 * (xdir ? hx(i) : hy(j));
                const Trans tk = transverse(i, j, xdir, sign, len);
                const int li = i + dd[0];
                const int lj = j + dd[1];

                if (!inside(li, lj)) {
                    const int side = side_of(xdir, sign);
                    if (rc.kind[side] == BcKind::NoFlux) continue;
                    const double px = xdir ? (sign > 0 ? rc.xl[nx] : rc.xl[0]) : xc(i);
                    const double py = xdir ? yc(j) : (sign > 0 ? rc.yl[ny] : rc.yl[0]);
                    const double fb = g(px, py);
                    const double lam = dnn_k * len / half_n;
                    if (scheme == SchemeKind::NLTPFA) {
                        s.at(k, k) += lam + tk.eta;
                        s.b[k] += lam * fb + tk.eta * (tk.dropped ? 0.0 : tk.tedge);
                    } else {
                        s.at(k, k) += lam + tk.nu;
                        s.b[k] += lam * fb;
                        put(k, tk, -tk.nu);
                    }
                    continue;
                }

                const int l = lj * nx + li;
                const Tensor2& dl = rc.d[l];
                const double dnn_l = xdir ? dl.xx : dl.yy;
                const double half_l = 0.5 * (xdir ? hx(li) : hy(lj));
                const Trans tl = transverse(li, lj, xdir, -sign, len);

                if (scheme == SchemeKind::NLTPFA) {
                    const double tau_k = dnn_k * len / half_n;
                    const double tau_l = dnn_l * len / half_l;
                    const double fs = (tau_k * f[k] + tau_l * f[l]) / (tau_k + tau_l);
                    const double ak = tau_k * fs + tk.eta * (tk.dropped ? 0.0 : tk.tedge);
                    const double al = tau_l * fs + tl.eta * (tl.dropped ? 0.0 : tl.tedge);
                    double mk = 0.5;
                    double ml = 0.5;
                    if (std::abs(ak) + std::abs(al) != 0.0) {
                        mk = std::abs(al) / (std::abs(ak) + std::abs(al));
                        ml = std::abs(ak) / (std::abs(ak) + std::abs(al));
                    }
                    s.at(k, k) += mk * (tau_k + tk.eta);
                    s.at(k, l) -= ml * (tau_l + tl.eta);
                    continue;
                }

                const double gap = xdir ? xc(li) - xc(i) : yc(lj) - yc(j);
                const double lam_k = dnn_k * len / std::abs(gap);
                const double lam_l = dnn_l * len / std::abs(gap);
                double c_k = 0.0;
                double c_l = 0.0;
                if (scheme == SchemeKind::RNLMPFA) {
                    const Couple& c = xdir ? cx : cy;
                    c_k = sign > 0 ? c.c1 : c.c2;
                    c_l = sign > 0 ? c.c2 : c.c1;
                }
                const double gk = tk.dropped ? 0.0 : (1.0 - c_k) * tk.nu * (f[k] - tval(tk));
                const double gl = tl.dropped ? 0.0 : (1.0 - c_l) * tl.nu * (f[l] - tval(tl));
                double mk = 0.5;
                double ml = 0.5;
                if (std::abs(gk) + std::abs(gl) != 0.0) {
                    mk = std::abs(gl) / (std::abs(gk) + std::abs(gl));
                    ml = std::abs(gk) / (std::abs(gk) + std::abs(gl));
                }
                const double theta = gk * gl < 0.0 ? 2.0 - c_k : c_k;
                const double L = mk * lam_k + ml * lam_l;
                // F = L (f_K - f_L) + theta mk nu_k (f_K - f_M) + c_l ml nu_l (f_N - f_L)
                s.at(k, k) += L;
                s.at(k, l) -= L;
                s.at(k, k) += theta * mk * tk.nu;
                put(k, tk, -theta * mk * tk.nu);
                put(k, tl, c_l * ml * tl.nu);
                s.at(k, l) -= c_l * ml * tl.nu;
            }
        }
    }
    return s;
}

/// Largest entry mismatch of row r divided by the row's largest magnitude.
inline double worst_row_mismatch(const LinearizedSystem& sys, const DenseSystem& o) {
    double worst = 0.0;
    for (int r = 0; r < o.n; ++r) {
        double scale = 0.0;
        for (int c = 0; c < o.n; ++c) scale = std::max(scale, std::abs(o.at(r, c)));
        double diff = 0.0;
        for (int c = 0; c < o.n; ++c) diff = std::max(diff, std::abs(sys.entry(r, c) - o.at(r, c)));
        worst = std::max(worst, diff / scale);
        // boundary data is O(1), so the row scale bounds the rhs terms
        const double bd = std::abs(sys.rhs[r] - o.b[r]);
        worst = std::max(worst, bd / std::max(std::abs(o.b[r]), scale));
    }
    return worst;
}

}  // namespace monofv::oracle
