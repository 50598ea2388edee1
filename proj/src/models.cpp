#include "spde/models.hpp"

#include <cmath>

#include "spde/errors.hpp"

namespace spde {

FluxModel make_zero_flux(int dimension) {
    FluxModel m;
    m.name = "zero";
    m.kind = FluxModel::Kind::zero;
    m.dimension = dimension;
    m.lipschitz = 0.0;
    FluxComponent c;
    c.value = [](double) { return 0.0; };
    c.deriv = [](double) { return 0.0; };
    c.eo_plus = [](double) { return 0.0; };
    c.eo_minus = [](double) { return 0.0; };
    m.components.assign(dimension, c);
    return m;
}

FluxModel make_linear_flux(double cspeed, int dimension) {
    FluxModel m;
    m.name = "linear";
    m.kind = FluxModel::Kind::linear;
    m.dimension = dimension;
    m.lipschitz = std::abs(cspeed);
    m.param = cspeed;
    FluxComponent c;
    c.value = [cspeed](double u) { return cspeed * u; };
    c.deriv = [cspeed](double) { return cspeed; };
    c.eo_plus = [cspeed](double u) { return cspeed > 0.0 ? cspeed * u : 0.0; };
    c.eo_minus = [cspeed](double u) { return cspeed < 0.0 ? cspeed * u : 0.0; };
    m.components.assign(dimension, c);
    return m;
}

FluxModel make_burgers_flux(double clamp_m) {
    if (!(clamp_m > 0.0)) {
        throw InvalidParameterError("make_burgers_flux: clamp window must be positive");
    }
    FluxModel m;
    m.name = "burgers";
    m.kind = FluxModel::Kind::burgers_clamped;
    m.dimension = 1;
    m.lipschitz = clamp_m;
    m.param = clamp_m;
    FluxComponent c;
    // F' = clamp(u, -M, M); F continues linearly outside [-M, M].
    c.value = [clamp_m](double u) {
        const double a = std::abs(u);
        if (a <= clamp_m) return 0.5 * u * u;
        return clamp_m * a - 0.5 * clamp_m * clamp_m;
    };
    c.deriv = [clamp_m](double u) {
        if (u > clamp_m) return clamp_m;
        if (u < -clamp_m) return -clamp_m;
        return u;
    };
    c.eo_plus = [clamp_m](double u) {
        const double up = u > 0.0 ? u : 0.0;
        const double v = up < clamp_m ? up : clamp_m;
        return 0.5 * v * v + clamp_m * (up - v);
    };
    c.eo_minus = [clamp_m](double u) {
        const double un = u < 0.0 ? u : 0.0;
        const double v = un > -clamp_m ? un : -clamp_m;
        return 0.5 * v * v - clamp_m * (un - v);
    };
    m.components.push_back(c);
    return m;
}

DiffusionModel make_zero_diffusion() {
    DiffusionModel d;
    d.name = "zero";
    d.kind = DiffusionModel::Kind::zero;
    d.lipschitz = 0.0;
    d.value = [](double) { return 0.0; };
    d.deriv = [](double) { return 0.0; };
    d.kirchhoff_closed = [](double) { return 0.0; };
    return d;
}

DiffusionModel make_identity_diffusion() {
    DiffusionModel d;
    d.name = "identity";
    d.kind = DiffusionModel::Kind::identity;
    d.lipschitz = 1.0;
    d.value = [](double u) { return u; };
    d.deriv = [](double) { return 1.0; };
    d.kirchhoff_closed = [](double u) { return u; };
    return d;
}

DiffusionModel make_power_diffusion(double exponent, double clamp_slope) {
    if (!(exponent > 1.0)) {
        throw InvalidParameterError("make_power_diffusion: exponent must exceed 1");
    }
    if (!(clamp_slope > 0.0)) {
        throw InvalidParameterError("make_power_diffusion: clamp slope must be positive");
    }
    DiffusionModel d;
    d.name = "power";
    d.kind = DiffusionModel::Kind::power_clamped;
    d.exponent = exponent;
    d.clamp_slope = clamp_slope;
    // |u|^m matches L|u| at the knee |u| = L^(1/(m-1)); Phi' jumps from mL to L
    // there, so the Lipschitz constant is m L.
    const double knee = std::pow(clamp_slope, 1.0 / (exponent - 1.0));
    d.lipschitz = exponent * clamp_slope;
    d.value = [exponent, clamp_slope](double u) {
        const double a = std::abs(u);
        const double p = std::pow(a, exponent);
        const double lin = clamp_slope * a;
        const double v = p < lin ? p : lin;
        return u >= 0.0 ? v : -v;
    };
    d.deriv = [exponent, clamp_slope, knee](double u) {
        const double a = std::abs(u);
        if (a < knee) return exponent * std::pow(a, exponent - 1.0);
        return clamp_slope;
    };
    // G(x) = int_0^x sqrt(Phi'): inside the knee sqrt(m) |x|^((m+1)/2) / ((m+1)/2),
    // beyond it the integrand is the constant sqrt(L).
    d.kirchhoff_closed = [exponent, clamp_slope, knee](double x) {
        const double a = std::abs(x);
        const double inner = std::min(a, knee);
        const double half_p = 0.5 * (exponent + 1.0);
        double g = std::sqrt(exponent) * std::pow(inner, half_p) / half_p;
        if (a > knee) g += std::sqrt(clamp_slope) * (a - knee);
        return x >= 0.0 ? g : -g;
    };
    return d;
}

BrownianCoefficient make_zero_brownian() {
    BrownianCoefficient b;
    b.name = "zero";
    b.kind = BrownianCoefficient::Kind::zero;
    b.lipschitz = 0.0;
    b.value = [](double) { return 0.0; };
    return b;
}

BrownianCoefficient make_linear_brownian(double c) {
    BrownianCoefficient b;
    b.name = "linear";
    b.kind = BrownianCoefficient::Kind::linear;
    b.lipschitz = std::abs(c);
    b.param = c;
    b.value = [c](double u) { return c * u; };
    return b;
}

} // namespace spde
