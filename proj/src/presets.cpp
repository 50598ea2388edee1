#include "spde/presets.hpp"

#include <cmath>

namespace spde::presets {

ProblemSpec heat(double horizon) {
    ProblemSpec p;
    p.domain = {0.0, 1.0};
    p.horizon = horizon;
    p.flux = make_zero_flux();
    p.diffusion = make_identity_diffusion();
    p.brownian = make_zero_brownian();
    p.jump_coef = make_zero_jump_coefficient();
    p.levy = make_zero_levy();
    p.initial_data = [](double x) { return std::sin(3.141592653589793 * x); };
    p.state_clamp = 2.5;
    return p;
}

ProblemSpec burgers_riemann(double horizon) {
    ProblemSpec p;
    p.domain = {0.0, 1.0};
    p.horizon = horizon;
    p.flux = make_burgers_flux(2.5);
    p.diffusion = make_zero_diffusion();
    p.brownian = make_zero_brownian();
    p.jump_coef = make_zero_jump_coefficient();
    p.levy = make_zero_levy();
    p.initial_data = [](double x) { return x < 0.3 ? 1.0 : 0.0; };
    p.state_clamp = 2.5;
    return p;
}

ProblemSpec mixed(double horizon) {
    ProblemSpec p;
    p.domain = {0.0, 1.0};
    p.horizon = horizon;
    p.flux = make_burgers_flux(2.5);
    p.diffusion = make_power_diffusion(2.0, 2.0);
    p.brownian = make_linear_brownian(0.2);
    p.jump_coef = make_tanh_jump_coefficient(0.5);
    p.levy = make_two_atom_levy();
    p.initial_data = [](double x) { return std::sin(3.141592653589793 * x); };
    p.state_clamp = 2.5;
    return p;
}

} // namespace spde::presets
