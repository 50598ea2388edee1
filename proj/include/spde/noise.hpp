#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spde/rng.hpp"

namespace spde {

/// Mark z = (z1, z2) in E = O x R*; O is a finite label set here.
struct Mark {
    double component = 1.0; // point of O
    double size = 0.0;      // z2 in R*
};

/// Finite-activity truncation of the Levy intensity m = mu x lambda. Only
/// jumps with |z2| > delta are simulated; the dropped small-jump second moment
/// is recorded in residual_g2_fraction rather than silently ignored.
struct LevyMeasureSpec {
    enum class Kind { zero, finite_atoms, power_density };

    std::string name = "zero";
    Kind kind = Kind::zero;
    double delta = 0.0;            // small-jump truncation radius
    double total_mass = 0.0;       // m_delta = m({|z2| > delta})
    double residual_g2_fraction = 0.0;

    struct Atom {
        Mark z;
        double weight = 0.0;
    };
    /// finite_atoms: the measure itself. power_density: a fixed Gauss-Legendre
    /// discretization of the truncated density, used for the compensator and
    /// the entropy functional's z-integrals.
    std::vector<Atom> atoms;

    // power_density parameters: lambda(dz) = scale * z^(-1-alpha) dz on (delta, 1]
    double alpha = 0.0;
    double scale = 0.0;
};

LevyMeasureSpec make_zero_levy();
/// Two atoms on O = {1}: (z2 = 0.4, weight 1.2) and (z2 = -0.3, weight 0.8)
/// by default; exactly summable, used as the oracle case.
LevyMeasureSpec make_two_atom_levy(double z_up = 0.4, double w_up = 1.2,
                                   double z_down = -0.3, double w_down = 0.8,
                                   double delta = 0.1);
/// Truncated alpha-like density on [delta, 1]; delta defaults keep the dropped
/// g^2 mass below 1e-4 of the total for g(z) = min(|z2|, 1).
LevyMeasureSpec make_power_levy(double alpha = 0.5, double scale = 1.0,
                                double delta = 1e-3);

/// nu(u; z) = lambda_star * g(z) * h(u) with g: E -> [0,1] and h nondecreasing,
/// Lipschitz-1, h(0) = 0.
struct JumpCoefficient {
    enum class Kind { zero, linear, tanh_shaped };

    std::string name = "zero";
    Kind kind = Kind::zero;
    double lambda_star = 0.0;
    std::function<double(const Mark&)> g;
    std::function<double(double)> h;

    double value(double u, const Mark& z) const {
        return lambda_star == 0.0 ? 0.0 : lambda_star * g(z) * h(u);
    }
};

JumpCoefficient make_zero_jump_coefficient();
JumpCoefficient make_linear_jump_coefficient(double lambda_star);
JumpCoefficient make_tanh_jump_coefficient(double lambda_star);

struct Jump {
    double time = 0.0;
    Mark mark;
};

/// One replayable realization of the driving noise on a uniform time grid.
struct NoisePath {
    std::uint64_t seed = 0;
    double horizon = 0.0;
    int steps = 0;
    std::vector<double> brownian_increments; // one per step, variance T/steps
    std::vector<Jump> jumps;                 // sorted by time in (0, T]
};

/// i.i.d. N(0, T/steps) increments, bit-reproducible per seed.
std::vector<double> sample_brownian(double horizon, int steps, std::uint64_t seed);

/// Compound-Poisson draw from the truncated measure: count ~ Poisson(m_delta T),
/// times uniform on (0, T], marks i.i.d. from the normalized measure.
std::vector<Jump> sample_jumps(const LevyMeasureSpec& spec, double horizon,
                               std::uint64_t seed);

/// Brownian and jump streams for one path, keyed (master seed, path index).
NoisePath sample_noise_path(const LevyMeasureSpec& spec, double horizon, int steps,
                            std::uint64_t master_seed, std::uint64_t path_index);

/// Per-unit-time compensator int_E nu(u; z) m(dz) over the truncated measure.
double compensator_drift(const JumpCoefficient& coef, const LevyMeasureSpec& spec,
                         double u, double quad_tol = 1e-10);

/// Text archive format (CSV sections: header, increments, jumps).
void save_noise_path(const NoisePath& path, std::ostream& os);
NoisePath load_noise_path(std::istream& is);

} // namespace spde
