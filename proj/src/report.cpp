#include "monofv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace monofv {

namespace {

constexpr int kColumns = 13;

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

double parse_double(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ReportError(std::string("bad ") + what + " value '" + s + "'");
    }
    return v;
}

int parse_int(const std::string& s, const char* what) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ReportError(std::string("bad ") + what + " value '" + s + "'");
    }
    return static_cast<int>(v);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ReportError("cannot write " + path.string());
    out.precision(17);
    return out;
}

}  // namespace

std::string csv_header() {
    return "case,scheme,nx,ny,dt,n_iter,nonconverged,f_min,f_max,r_under,r_over,err2,wall_s";
}

std::string to_csv(const ResultRow& r) {
    std::ostringstream os;
    os << r.case_name << ',' << r.scheme << ',' << r.nx << ',' << r.ny << ',' << sci(r.dt) << ','
       << sci(r.n_iter) << ',' << sci(r.nonconverged) << ',' << sci(r.f_min) << ',' << sci(r.f_max)
       << ',' << sci(r.r_under) << ',' << sci(r.r_over) << ',' << (r.err2 ? sci(*r.err2) : "")
       << ',' << sci(r.wall_seconds);
    return os.str();
}

ResultRow parse_csv_row(const std::string& line) {
    std::vector<std::string> f;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (static_cast<int>(f.size()) != kColumns) {
        throw ReportError("expected " + std::to_string(kColumns) + " columns, got " +
                          std::to_string(f.size()));
    }
    ResultRow r;
    r.case_name = f[0];
    r.scheme = f[1];
    r.nx = parse_int(f[2], "nx");
    r.ny = parse_int(f[3], "ny");
    r.dt = parse_double(f[4], "dt");
    r.n_iter = parse_double(f[5], "n_iter");
    r.nonconverged = parse_double(f[6], "nonconverged");
    r.f_min = parse_double(f[7], "f_min");
    r.f_max = parse_double(f[8], "f_max");
    r.r_under = parse_double(f[9], "r_under");
    r.r_over = parse_double(f[10], "r_over");
    if (!f[11].empty()) r.err2 = parse_double(f[11], "err2");
    r.wall_seconds = parse_double(f[12], "wall_s");
    return r;
}

void write_results(const std::filesystem::path& path, std::span<const ResultRow> rows) {
    std::ofstream out = open_out(path);
    out << csv_header() << '\n';
    for (const auto& r : rows) out << to_csv(r) << '\n';
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ReportError("cannot read " + path.string());
    std::vector<ResultRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && line == csv_header()) {
            first = false;
            continue;
        }
        first = false;
        rows.push_back(parse_csv_row(line));
    }
    return rows;
}

std::vector<ConvergenceOrder> convergence_report(std::span<const ResultRow> rows) {
    std::vector<ResultRow> sorted(rows.begin(), rows.end());
    if (sorted.size() < 2) throw ReportError("convergence needs at least two grid sizes");
    for (const auto& r : sorted) {
        if (!r.err2) throw ReportError("row " + r.case_name + "/" + r.scheme + " n=" +
                                       std::to_string(r.nx) + " has no Err2");
        if (!(*r.err2 > 0.0)) throw ReportError("Err2 must be positive to take log ratios");
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.nx < b.nx; });
    std::vector<ConvergenceOrder> out;
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        const ResultRow& c = sorted[k - 1];
        const ResultRow& f = sorted[k];
        if (f.nx == c.nx) throw ReportError("duplicate grid size " + std::to_string(f.nx));
        ConvergenceOrder o{c.nx, f.nx, *c.err2, *f.err2, 0.0};
        o.order = std::log(*c.err2 / *f.err2) / std::log(static_cast<double>(f.nx) / c.nx);
        out.push_back(o);
    }
    return out;
}

void emit_residual_history(const PicardReport& report, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "# iteration residual\n";
    for (std::size_t k = 0; k < report.residuals.size(); ++k) {
        out << k + 1 << ' ' << report.residuals[k] << '\n';
    }
}

void emit_field(const Grid& grid, std::span<const double> f, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "# x y value\n";
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            out << grid.xc(i) << ' ' << grid.yc(j) << ' ' << f[grid.id(i, j)] << '\n';
        }
        out << '\n';
    }
}

}  // namespace monofv
