#include "spde/entropy_calculus.hpp"

#include <cmath>

#include "spde/errors.hpp"

namespace spde {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Plus-oriented closed forms. On [0, xi]:
//   beta'(r) = (1 + sin(pi (2r - xi) / (2 xi))) / 2
//   beta(r)  = r/2 - (xi / (2 pi)) cos(pi (2r - xi) / (2 xi))
//   beta''(r)= (pi / (2 xi)) cos(pi (2r - xi) / (2 xi))
// and beta(r) = r - xi/2 above xi. Both branch ends agree at r = 0 and r = xi.
double beta_plus_value(double r, double xi) {
    if (r <= 0.0) return 0.0;
    if (r >= xi) return r - 0.5 * xi;
    const double arg = kPi * (2.0 * r - xi) / (2.0 * xi);
    return 0.5 * r - (xi / (2.0 * kPi)) * std::cos(arg);
}

double beta_plus_deriv(double r, double xi) {
    if (r <= 0.0) return 0.0;
    if (r >= xi) return 1.0;
    const double arg = kPi * (2.0 * r - xi) / (2.0 * xi);
    return 0.5 * (1.0 + std::sin(arg));
}

double beta_plus_second(double r, double xi) {
    if (r <= 0.0 || r >= xi) return 0.0;
    const double arg = kPi * (2.0 * r - xi) / (2.0 * xi);
    return (kPi / (2.0 * xi)) * std::cos(arg);
}

} // namespace

EntropyApprox::EntropyApprox(double xi, Orientation orientation)
    : xi_(xi), orientation_(orientation) {
    if (!(xi > 0.0)) {
        throw InvalidParameterError("EntropyApprox: xi must be positive");
    }
}

double EntropyApprox::value(double r) const {
    return orientation_ == Orientation::plus ? beta_plus_value(r, xi_)
                                             : beta_plus_value(-r, xi_);
}

double EntropyApprox::deriv(double r) const {
    return orientation_ == Orientation::plus ? beta_plus_deriv(r, xi_)
                                             : -beta_plus_deriv(-r, xi_);
}

double EntropyApprox::second(double r) const {
    return orientation_ == Orientation::plus ? beta_plus_second(r, xi_)
                                             : beta_plus_second(-r, xi_);
}

double beta_eval(const EntropyApprox& approx, double r, int order) {
    switch (order) {
        case 0: return approx.value(r);
        case 1: return approx.deriv(r);
        case 2: return approx.second(r);
        default: throw InvalidParameterError("beta_eval: order must be 0, 1 or 2");
    }
}

double sign_bracket(double x, SignMode mode) {
    switch (mode) {
        case SignMode::plus: return x > 0.0 ? 1.0 : 0.0;
        case SignMode::minus: return x < 0.0 ? 1.0 : 0.0;
        case SignMode::full: return x != 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double signum(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<double> kruzhkov_flux(const FluxModel& model, double a, double b,
                                  SignMode mode) {
    const double s = sign_bracket(a - b, mode);
    std::vector<double> out(model.components.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = s * (model.components[k].value(a) - model.components[k].value(b));
    }
    return out;
}

double kruzhkov_flux(const DiffusionModel& model, double a, double b, SignMode mode) {
    return sign_bracket(a - b, mode) * (model.value(a) - model.value(b));
}

std::vector<double> kruzhkov_flux_signed(const FluxModel& model, double a, double b) {
    const double s = signum(a - b);
    std::vector<double> out(model.components.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = s * (model.components[k].value(a) - model.components[k].value(b));
    }
    return out;
}

double kruzhkov_flux_signed(const DiffusionModel& model, double a, double b) {
    return signum(a - b) * (model.value(a) - model.value(b));
}

namespace {

// The integrand beta'(r - b) g(r) has kinks where r - b hits 0 or xi (for the
// minus orientation, -xi and 0).
std::vector<double> beta_kinks(const EntropyApprox& approx, double b) {
    if (approx.orientation() == Orientation::plus) return {b, b + approx.xi()};
    return {b - approx.xi(), b};
}

} // namespace

std::vector<double> entropy_flux(const FluxModel& model, const EntropyApprox& approx,
                                 double a, double b, double quad_tol) {
    if (!(quad_tol > 0.0)) {
        throw InvalidParameterError("entropy_flux: quad_tol must be positive");
    }
    std::vector<double> out(model.components.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& comp = model.components[k];
        out[k] = quad::adaptive_simpson_segmented(
            [&](double r) { return approx.deriv(r - b) * comp.deriv(r); }, b, a,
            beta_kinks(approx, b), quad_tol);
    }
    return out;
}

double entropy_flux(const DiffusionModel& model, const EntropyApprox& approx,
                    double a, double b, double quad_tol) {
    if (!(quad_tol > 0.0)) {
        throw InvalidParameterError("entropy_flux: quad_tol must be positive");
    }
    return quad::adaptive_simpson_segmented(
        [&](double r) { return approx.deriv(r - b) * model.deriv(r); }, b, a,
        beta_kinks(approx, b), quad_tol);
}

double kirchhoff(const DiffusionModel& model, double x, double quad_tol) {
    return quad::adaptive_simpson_segmented(
        [&](double r) {
            const double d = model.deriv(r);
            if (d < 0.0) {
                throw ModelViolationError("kirchhoff: Phi' < 0 sampled");
            }
            return std::sqrt(d);
        },
        0.0, x, {}, quad_tol);
}

std::vector<double> concentration_limit(const std::function<double(double)>& l,
                                        double a, double b,
                                        const std::vector<double>& xi_seq,
                                        ConcentrationSide side, double quad_tol) {
    for (std::size_t i = 1; i < xi_seq.size(); ++i) {
        if (!(xi_seq[i] < xi_seq[i - 1])) {
            throw InvalidParameterError(
                "concentration_limit: xi_seq must decrease strictly");
        }
    }
    std::vector<double> out;
    out.reserve(xi_seq.size());
    for (double xi : xi_seq) {
        const EntropyApprox beta(xi);
        double v;
        if (side == ConcentrationSide::at_a) {
            // beta''(a - s) is supported on s in [a - xi, a]
            v = quad::adaptive_simpson_segmented(
                [&](double s) { return beta.second(a - s) * l(s); }, a, b,
                {a - xi, a}, quad_tol);
        } else {
            // beta''(s - b) is supported on s in [b, b + xi]
            v = quad::adaptive_simpson_segmented(
                [&](double s) { return beta.second(s - b) * l(s); }, b, a,
                {b, b + xi}, quad_tol);
        }
        out.push_back(v);
    }
    return out;
}

} // namespace spde
