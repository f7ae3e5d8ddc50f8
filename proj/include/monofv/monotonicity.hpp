#pragma once

#include "monofv/schemes.hpp"

#include <array>
#include <string>
#include <vector>

namespace monofv {

/// The ten checks, in report order.
enum class Condition { A0, A1a, A1b, A1c, A1d, A2, A3a, A3b, A3c, A3d };
inline constexpr int kNumConditions = 10;

std::string to_string(Condition c);

struct CellViolation {
    int cell = -1;
    Condition condition = Condition::A0;
    double value = 0.0;
};

/// Result of evaluating (A0)-(A3) on every cell whose 9-point neighborhood
/// lies inside the mesh.
struct MonotonicityReport {
    int audited = 0;
    int skipped = 0;
    std::array<int, kNumConditions> failures{};
    /// Smallest relative margin per condition (value divided by the magnitude
    /// of its terms); positive means satisfied.
    std::array<double, kNumConditions> worst{};
    std::vector<CellViolation> violations;  ///< first violations, capped
    bool pass = true;

    int total_failures() const;
    std::string summary() const;
};

MonotonicityReport check_monotonicity(const LinearizedSystem& sys);

}  // namespace monofv
