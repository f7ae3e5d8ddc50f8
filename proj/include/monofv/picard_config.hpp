#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monofv {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ResidualKind {
    SuccessiveIterates,  ///< |X^{s+1} - X^s|_inf / |X^s|_inf
    AlgebraicResidual,   ///< |A(X^{s+1}) X^{s+1} - B^{s+1}|_2 / |B^s|_2
};

enum class InitPolicy { Ones, LinearSchemeOutput, GivenField };

struct LinearizedSystem;

/// Called after each linearized system is assembled inside the Picard loop,
/// with the 1-based iteration number and the frozen state.
using IterationObserver =
    std::function<void(int iteration, const LinearizedSystem&, std::span<const double> frozen)>;

struct PicardConfig {
    double epsilon = 1e-6;
    ResidualKind residual = ResidualKind::SuccessiveIterates;
    int max_iter = 300;
    InitPolicy init = InitPolicy::Ones;
    std::vector<double> initial;  ///< used with InitPolicy::GivenField
    bool audit = false;           ///< run the (A0)-(A3) audit on every linearized system
    bool keep_iterates = false;
    IterationObserver observer;

    /// Throws ConfigError on epsilon <= 0 or max_iter < 1.
    void validate() const;
};

std::string to_string(ResidualKind k);
std::string to_string(InitPolicy p);
ResidualKind parse_residual_kind(const std::string& s);
InitPolicy parse_init_policy(const std::string& s);

}  // namespace monofv
