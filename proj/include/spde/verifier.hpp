#pragma once

#include <cstdint>
#include <vector>

#include "spde/entropy_calculus.hpp"
#include "spde/noise.hpp"
#include "spde/solver.hpp"

namespace spde {

/// One product bump a * b((t-tc)/rt) * b((x-xc)/rx) with b(s) = (1-s^2)^4.
struct BumpTerm {
    double amplitude = 1.0;
    double time_center = 0.5;
    double time_radius = 0.5;
    double space_center = 0.5;
    double space_radius = 0.25;
};

/// Nonnegative combination of product bumps. Compactly supported with
/// closed-form derivatives, so the only discretization error in the entropy
/// functional comes from the solver grid itself. Closed under nonnegative
/// linear combination, which is what Lambda's linearity property needs.
struct TestFunction {
    std::vector<BumpTerm> terms;

    static TestFunction bump(double amplitude, double time_center, double time_radius,
                             double space_center, double space_radius);

    double value(double t, double x) const;
    double dt(double t, double x) const;
    double dx(double t, double x) const;
    double dxx(double t, double x) const;

    TestFunction scaled(double factor) const;
    TestFunction operator+(const TestFunction& other) const;

    /// Spatial support strictly inside the domain?
    bool support_in_domain(const Domain1D& d) const;
    /// Vanishes at the final time (required for the no-terminal-term form)?
    bool vanishes_at(double horizon) const;
};

/// (k, psi, beta) with the orientation-dependent support constraint of the
/// admissible family: plus orientation requires psi supported inside D when
/// k < 0; the minus orientation mirrors it for k > 0.
struct AdmissibleTriple {
    double k = 0.0;
    TestFunction psi = TestFunction::bump(1.0, 0.5, 0.5, 0.5, 0.25);
    EntropyApprox beta{0.02, Orientation::plus};
};

bool admissible(const AdmissibleTriple& triple, const Domain1D& domain);

/// Per-term values of the entropy functional; `total` is their sum.
struct LambdaBreakdown {
    double transport = 0.0;       // beta(u-k) dt_psi - F^beta grad_psi + Phi^beta lap_psi
    double ito = 0.0;             // int phi(u) beta'(u-k) psi dW
    double ito_correction = 0.0;  // 1/2 int phi^2 beta''(u-k) psi
    double jump_martingale = 0.0; // sum over jumps minus its compensator
    double jump_compensation = 0.0; // Taylor remainder against m(dz)
    double dissipation = 0.0;     // -int beta''(u-k) |grad G(u)|^2 psi  (<= 0)
    double initial = 0.0;         // int beta(u0-k) psi(0,.)

    double total() const {
        return transport + ito + ito_correction + jump_martingale +
               jump_compensation + dissipation + initial;
    }
};

LambdaBreakdown lambda_breakdown(const Trajectory& traj, const NoisePath& noise,
                                 const AdmissibleTriple& triple,
                                 const ProblemSpec& problem, double quad_tol = 1e-10);

/// Discrete entropy functional Lambda(k, psi, beta) along one trajectory.
double lambda_functional(const Trajectory& traj, const NoisePath& noise,
                         const AdmissibleTriple& triple, const ProblemSpec& problem,
                         double quad_tol = 1e-10);

struct McEntropyResult {
    double mean = 0.0;
    double half_width_95 = 0.0;
    double p05 = 0.0; // 5th percentile of per-path Lambda
    int paths_succeeded = 0;
    std::vector<std::uint64_t> failed_paths;
    std::vector<double> samples; // per-path Lambda, path order
};

/// Monte Carlo verification of E[Lambda] >= 0: mean, normal-approximation 95%
/// half-width, and the per-path lower tail.
McEntropyResult mc_entropy_check(const ProblemSpec& problem, const SolverConfig& config,
                                 const AdmissibleTriple& triple, int n_paths,
                                 std::uint64_t master_seed, int threads = 0);

} // namespace spde
