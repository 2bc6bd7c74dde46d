// params.hpp - control parameters of the extended Rabi Hamiltonian

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace erabi {

/// Raised when a parameter or configuration value is outside its admissible range.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// All controls of H = w[b^+ b + R Jz] + 2 sqrt(NR) { lambda[...] + mu (b^+ + b)(Jz + gamma j) }.
struct ModelParams {
    double omega{1.0};   // boson quantum
    double R{100.0};     // qubit-to-boson energy ratio
    int N{1};            // number of qubits, j = N/2
    double lambda{0.0};  // parity-conserving coupling
    double delta{0.0};   // rotating / counter-rotating asymmetry in [-1, 1]
    double mu{0.0};      // parity-violating coupling
    double gamma{0.0};   // drive switch, 0 or 1
    bool allow_continuous_gamma{false};

    double j() const { return 0.5 * N; }
    int two_j() const { return N; }
    /// Size parameter NR; 1/NR is the effective Planck constant of the field quadratures.
    double size() const { return N * R; }
};

inline ModelParams validate_params(ModelParams p)
{
    auto fail = [](const std::string& what) { throw ValidationError(what); };
    if (!std::isfinite(p.omega) || p.omega <= 0.0) fail("omega must be positive");
    if (!std::isfinite(p.R) || p.R < 1.0) fail("R must be >= 1");
    if (p.N < 1) fail("N must be a positive integer");
    if (!std::isfinite(p.lambda) || p.lambda < 0.0) fail("lambda negative");
    if (!std::isfinite(p.delta) || std::abs(p.delta) > 1.0) fail("delta out of [-1,1]");
    if (!std::isfinite(p.mu) || p.mu < 0.0) fail("mu negative");
    if (!std::isfinite(p.gamma)) fail("gamma not finite");

    constexpr double snap = 1e-12;
    if (std::abs(p.gamma) <= snap) {
        p.gamma = 0.0;
    } else if (std::abs(p.gamma - 1.0) <= snap) {
        p.gamma = 1.0;
    } else if (!p.allow_continuous_gamma) {
        fail("gamma must be 0 or 1");
    }
    return p;
}

/// epsilon = E / (N R omega)
inline double scaled_energy(double E, const ModelParams& p)
{
    return E / (p.size() * p.omega);
}

}  // namespace erabi
