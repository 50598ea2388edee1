#pragma once

#include "spde/solver.hpp"

namespace spde::presets {

/// Pure heat problem: F = 0, Phi = id, no noise, u0 = sin(pi x) on (0,1).
/// With viscosity eps the exact solution is exp(-(1+eps) pi^2 t) sin(pi x).
ProblemSpec heat(double horizon);

/// Deterministic Burgers with Riemann data (1 for x < 0.3, else 0) and a small
/// viscosity surrogate; the shock travels at speed 1/2.
ProblemSpec burgers_riemann(double horizon);

/// The full mixed problem: clamped Burgers flux, degenerate power-law
/// diffusion, linear Brownian coefficient 0.2 u, tanh jump shape against the
/// two-atom Levy measure, u0 = sin(pi x).
ProblemSpec mixed(double horizon);

} // namespace spde::presets
