#include "monofv/monotonicity.hpp"

#include <cmath>
#include <sstream>

namespace monofv {

namespace {
constexpr std::size_t kMaxViolations = 64;
constexpr const char* kNames[kNumConditions] = {"A0",  "A1a", "A1b", "A1c", "A1d",
                                                "A2",  "A3a", "A3b", "A3c", "A3d"};
}  // namespace

std::string to_string(Condition c) { return kNames[static_cast<int>(c)]; }

int MonotonicityReport::total_failures() const {
    int n = 0;
    for (int f : failures) n += f;
    return n;
}

std::string MonotonicityReport::summary() const {
    std::ostringstream os;
    os << (pass ? "pass" : "FAIL") << " audited=" << audited << " skipped=" << skipped;
    for (int k = 0; k < kNumConditions; ++k) {
        if (failures[k] > 0) os << ' ' << kNames[k] << ':' << failures[k];
    }
    return os.str();
}

MonotonicityReport check_monotonicity(const LinearizedSystem& sys) {
    MonotonicityReport rep;
    rep.worst.fill(1.0);
    const int nx = sys.nx;
    auto record = [&](int cell, Condition c, double value, double scale) {
        const int k = static_cast<int>(c);
        const double rel = scale > 0.0 ? value / scale : (value > 0.0 ? 1.0 : -1.0);
        if (rel < rep.worst[k]) rep.worst[k] = rel;
        if (!(value > 0.0)) {
            ++rep.failures[k];
            rep.pass = false;
            if (rep.violations.size() < kMaxViolations) rep.violations.push_back({cell, c, value});
        }
    };

    for (int r = 0; r < sys.size(); ++r) {
        const int i = r % nx;
        const int j = r / nx;
        if (i == 0 || j == 0 || i == nx - 1 || j == sys.ny - 1) {
            ++rep.skipped;
            continue;
        }
        ++rep.audited;
        const auto& m = sys.m[r];
        const auto& lo = sys.m[r - nx];  // row (i, j-1)
        const auto& hi = sys.m[r + nx];  // row (i, j+1)
        double row_scale = 0.0;
        for (double v : m) row_scale += std::abs(v);

        record(r, Condition::A0, m[0], row_scale);
        record(r, Condition::A1a, -m[1], row_scale);
        record(r, Condition::A1b, -m[3], row_scale);
        record(r, Condition::A1c, -m[5], row_scale);
        record(r, Condition::A1d, -m[7], row_scale);
        record(r, Condition::A2, m[0] + m[1] + m[5], row_scale);

        auto cross = [&](Condition c, double a, double b, double p, double q) {
            record(r, c, a * b - p * q, std::abs(a * b) + std::abs(p * q));
        };
        cross(Condition::A3a, m[1], lo[3], lo[2], m[0]);
        cross(Condition::A3b, m[5], lo[3], lo[4], m[0]);
        cross(Condition::A3c, m[5], hi[7], hi[6], m[0]);
        cross(Condition::A3d, m[1], hi[7], hi[8], m[0]);
    }
    return rep;
}

}  // namespace monofv
