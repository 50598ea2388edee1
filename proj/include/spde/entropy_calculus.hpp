#pragma once

#include <vector>

#include "spde/models.hpp"
#include "spde/quadrature.hpp"

namespace spde {

enum class Orientation { plus, minus };
enum class SignMode { plus, minus, full };

/// Smooth one-sided approximation of x -> x+ (plus orientation) or x -> x-
/// (minus orientation, the reflection beta(-x)).
///
/// The plus-oriented member is the explicit construction
///   beta'(r) = 0 for r < 0, (1 + sin(pi (2r - xi) / (2 xi))) / 2 on [0, xi],
///   1 for r > xi,
/// integrated from beta(0) = 0. It is convex, 0 <= beta' <= 1, beta'' is
/// supported in [0, xi] with max pi/(2 xi), and |beta(r) - r+| <= xi/2.
class EntropyApprox {
public:
    EntropyApprox(double xi, Orientation orientation = Orientation::plus);

    double xi() const { return xi_; }
    Orientation orientation() const { return orientation_; }

    double value(double r) const;
    double deriv(double r) const;
    double second(double r) const;

    EntropyApprox reflected() const {
        return EntropyApprox(xi_, orientation_ == Orientation::plus
                                      ? Orientation::minus
                                      : Orientation::plus);
    }

private:
    double xi_;
    Orientation orientation_;
};

/// beta(r), beta'(r) or beta''(r) for order 0, 1, 2.
double beta_eval(const EntropyApprox& approx, double r, int order);

/// sgn+, sgn- and their sum, literally as the paper defines them:
/// sgn+(x) = 1 for x > 0 else 0; sgn-(x) = 1 for x < 0 else 0; both 0 at x = 0,
/// so the full mode is 1 for any x != 0.
double sign_bracket(double x, SignMode mode);

/// Conventional signed bracket sgn+(x) - sgn-(x) in {-1, 0, 1}; provided
/// alongside the literal one because the classic Kruzhkov flux uses it.
double signum(double x);

/// F^pm(a,b) = sgn^pm(a-b) [F(a) - F(b)], one entry per flux component. The
/// full mode uses the literal sgn = sgn+ + sgn- (value 1 for any a != b).
std::vector<double> kruzhkov_flux(const FluxModel& model, double a, double b,
                                  SignMode mode);
/// Phi version (scalar).
double kruzhkov_flux(const DiffusionModel& model, double a, double b, SignMode mode);

/// Classic Kruzhkov bracket with the conventional signed bracket, i.e.
/// signum(a-b) [F(a) - F(b)] = |F(a) - F(b)| for monotone F.
std::vector<double> kruzhkov_flux_signed(const FluxModel& model, double a, double b);
double kruzhkov_flux_signed(const DiffusionModel& model, double a, double b);

/// F^beta(a,b) = int_b^a beta'(r-b) F'(r) dr per component, by adaptive
/// quadrature split at the beta kinks; oriented in the integration direction.
std::vector<double> entropy_flux(const FluxModel& model, const EntropyApprox& approx,
                                 double a, double b, double quad_tol);
double entropy_flux(const DiffusionModel& model, const EntropyApprox& approx,
                    double a, double b, double quad_tol);

/// Kirchhoff transform G(x) = int_0^x sqrt(Phi'(r)) dr by quadrature; throws
/// ModelViolationError when a negative Phi' sample is seen.
double kirchhoff(const DiffusionModel& model, double x,
                 double quad_tol = quad::kDefaultTol);

/// Which endpoint the beta'' mass concentrates at as xi -> 0.
enum class ConcentrationSide { at_a, at_b };

/// Values of int_a^b beta''_xi(a - s) l(s) ds (concentrating at a) or
/// int_b^a beta''_xi(s - b) l(s) ds (concentrating at b) along a decreasing
/// xi sequence. At continuity points of l these converge to -sgn+(a-b) l(a),
/// respectively sgn+(a-b) l(b); asserting that is the caller's job.
std::vector<double> concentration_limit(const std::function<double(double)>& l,
                                        double a, double b,
                                        const std::vector<double>& xi_seq,
                                        ConcentrationSide side, double quad_tol);

} // namespace spde
