#pragma once

#include <functional>
#include <string>
#include <vector>

namespace spde {

/// One scalar flux component F_k with its derivative and Engquist-Osher split
/// antiderivatives F+' = max(F',0), F-' = min(F',0).
struct FluxComponent {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> eo_plus;
    std::function<double(double)> eo_minus;
};

/// Componentwise flux F: R -> R^d, Lipschitz with F_k(0) = 0.
struct FluxModel {
    enum class Kind { zero, linear, burgers_clamped, custom };

    std::string name = "zero";
    Kind kind = Kind::zero;
    int dimension = 1;
    double lipschitz = 0.0;   // L_F on the admissible state range
    double param = 0.0;       // linear: speed c; burgers: clamp window M
    std::vector<FluxComponent> components;

    const FluxComponent& component(int k = 0) const { return components.at(k); }
};

FluxModel make_zero_flux(int dimension = 1);
FluxModel make_linear_flux(double c, int dimension = 1);
/// Burgers F(u) = u^2/2 inside [-M, M], extended with slope +-M outside so the
/// flux stays globally Lipschitz with constant M.
FluxModel make_burgers_flux(double clamp_m);

/// Nonlinear diffusion Phi: nondecreasing, Lipschitz, Phi(0) = 0. A closed-form
/// Kirchhoff transform G = int_0^x sqrt(Phi') is carried when the family has
/// one; the quadrature route in entropy_calculus stays the independent check.
struct DiffusionModel {
    enum class Kind { zero, identity, power_clamped, custom };

    std::string name = "zero";
    Kind kind = Kind::zero;
    double lipschitz = 0.0;
    double exponent = 1.0;    // power_clamped: m > 1
    double clamp_slope = 0.0; // power_clamped: L
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> kirchhoff_closed; // empty when no closed form
};

DiffusionModel make_zero_diffusion();
DiffusionModel make_identity_diffusion();
/// Phi(u) = sgn(u) min(|u|^m, L|u|) with m > 1: genuinely degenerate at u = 0.
DiffusionModel make_power_diffusion(double exponent, double clamp_slope);

/// Brownian coefficient phi, Lipschitz with phi(0) = 0.
struct BrownianCoefficient {
    enum class Kind { zero, linear, custom };

    std::string name = "zero";
    Kind kind = Kind::zero;
    double lipschitz = 0.0;
    double param = 0.0; // linear coefficient
    std::function<double(double)> value;
};

BrownianCoefficient make_zero_brownian();
BrownianCoefficient make_linear_brownian(double c);

} // namespace spde
