#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spde/grid.hpp"
#include "spde/models.hpp"
#include "spde/noise.hpp"

namespace spde {

/// One SPDE instance: du - div F(u) dt - Lap Phi(u) dt
///                      = phi(u) dW + int nu(u;z) Ntilde(dz,dt)
/// on domain x (0, T] with u = 0 on the boundary. Construction-time sampling
/// checks the structural assumptions (F(0)=0, Phi nondecreasing, phi(0)=0,
/// nu monotone and Lipschitz in u).
struct ProblemSpec {
    Domain1D domain;
    double horizon = 1.0;
    FluxModel flux = make_zero_flux();
    DiffusionModel diffusion = make_zero_diffusion();
    BrownianCoefficient brownian = make_zero_brownian();
    JumpCoefficient jump_coef = make_zero_jump_coefficient();
    LevyMeasureSpec levy = make_zero_levy();
    std::function<double(double)> initial_data = [](double) { return 0.0; };
    double state_clamp = 10.0; // Lipschitz window [-M, M] of the clamped families

    /// Smooth rough initial data with the boundary-compatible shifted
    /// mollifier before sampling it onto cells; kappa = premollify_kappa_per_dx
    /// * dx, clipped below the domain cone's kappa_C, so the smoothing radius
    /// vanishes with the grid.
    bool premollify_initial = false;
    double premollify_kappa_per_dx = 4.0;

    /// Randomized assumption audit; throws ModelViolationError on a violation.
    void validate(std::uint64_t seed = 7u) const;
};

struct SolverConfig {
    double epsilon = 0.01;
    int cells = 100;
    int steps = 1000;
    double newton_tol = 1e-10;
    int newton_max_iter = 50;
    double cfl_safety = 0.45;

    double dx(const ProblemSpec& p) const { return p.domain.length() / cells; }
    double dt(const ProblemSpec& p) const { return p.horizon / steps; }
    /// Explicit-part CFL check L_F dt / dx <= safety; throws when violated.
    void check_cfl(const ProblemSpec& p) const;
};

struct StepDiagnostics {
    int newton_iterations = 0;
    int jumps_applied = 0;
    int clamp_activations = 0;
};

/// Grid trajectory u(t_n, x_i) of one noise realization; cell-centered states
/// with homogeneous Dirichlet ghost values.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(int cells, int steps, double dx, double dt, double x0);

    int cells() const { return cells_; }
    int steps() const { return steps_; }
    double dx() const { return dx_; }
    double dt() const { return dt_; }
    double time(int n) const { return n * dt_; }
    double cell_x(int i) const { return x0_ + (i + 0.5) * dx_; }

    std::span<double> state(int n) {
        return {data_.data() + static_cast<std::size_t>(n) * cells_,
                static_cast<std::size_t>(cells_)};
    }
    std::span<const double> state(int n) const {
        return {data_.data() + static_cast<std::size_t>(n) * cells_,
                static_cast<std::size_t>(cells_)};
    }

    std::vector<StepDiagnostics>& diagnostics() { return diag_; }
    const std::vector<StepDiagnostics>& diagnostics() const { return diag_; }

    int total_clamps() const;
    int total_jumps() const;

private:
    int cells_ = 0, steps_ = 0;
    double dx_ = 0.0, dt_ = 0.0, x0_ = 0.0;
    std::vector<double> data_; // (steps+1) x cells
    std::vector<StepDiagnostics> diag_;
};

/// One operator-split step: explicit Engquist-Osher convection, implicit
/// (Phi + eps id) diffusion by damped Newton, Ito noise increment with the
/// left-point state, then the step's jumps in time order plus the compensator
/// drift evaluated at the pre-step state. `t` is the step's start time,
/// `jumps_in_step` the recorded jumps with time in (t, t+dt].
void step(std::span<double> state, double t, double dt, double brownian_increment,
          std::span<const Jump> jumps_in_step, const ProblemSpec& problem,
          const SolverConfig& config, StepDiagnostics& diag);

/// Full trajectory for one noise realization; deterministic in its inputs.
Trajectory solve_path(const ProblemSpec& problem, const SolverConfig& config,
                      const NoisePath& noise);

/// Monte Carlo means of the a-priori quantities:
///   sup_t E||u||^2_L2,  eps int_0^T E||grad u||^2 dt,  int_0^T E||grad G(u)||^2 dt.
struct AprioriStatistics {
    double sup_expected_l2_sq = 0.0;
    double eps_grad_sq_time_integral = 0.0;
    double kirchhoff_grad_sq_time_integral = 0.0;
    double total() const {
        return sup_expected_l2_sq + eps_grad_sq_time_integral +
               kirchhoff_grad_sq_time_integral;
    }
};

AprioriStatistics apriori_statistics(const std::vector<Trajectory>& ensemble,
                                     const ProblemSpec& problem,
                                     const SolverConfig& config);

/// Streaming accumulator with the same math as apriori_statistics, for
/// ensembles too large to hold in memory.
class AprioriAccumulator {
public:
    AprioriAccumulator(const ProblemSpec& problem, const SolverConfig& config);
    void add(const Trajectory& traj);
    AprioriStatistics finish() const;

private:
    const ProblemSpec* problem_;
    double epsilon_;
    int paths_ = 0;
    std::vector<double> l2_sq_sum_per_time_;
    double grad_sq_sum_ = 0.0;
    double kirchhoff_grad_sq_sum_ = 0.0;
};

/// G applied cellwise through the model's closed form when it has one; the
/// quadrature route in entropy_calculus stays the independent cross-check.
double kirchhoff_value(const DiffusionModel& model, double u);

/// Trajectory archive: one (t, x, u) row per stored sample, optionally thinned
/// to every `stride` steps.
void save_trajectory(const Trajectory& traj, std::ostream& os, int stride = 1);

/// One-line JSON-like record of the a-priori statistics.
std::string format_statistics_record(const AprioriStatistics& stats);

} // namespace spde
