#include "spde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <cstdio>
#include <ostream>

#include "spde/entropy_calculus.hpp"
#include "spde/mollify.hpp"
#include "spde/errors.hpp"
#include "spde/kernels.hpp"
#include "spde/rng.hpp"

namespace spde {

void ProblemSpec::validate(std::uint64_t seed) const {
    rng::Engine eng(seed);
    const double span = state_clamp;
    auto draw = [&] { return span * (2.0 * eng.uniform() - 1.0); };

    for (const auto& comp : flux.components) {
        if (comp.value(0.0) != 0.0) {
            throw ModelViolationError("ProblemSpec: F(0) != 0");
        }
    }
    if (diffusion.value(0.0) != 0.0) {
        throw ModelViolationError("ProblemSpec: Phi(0) != 0");
    }
    if (brownian.value(0.0) != 0.0) {
        throw ModelViolationError("ProblemSpec: phi(0) != 0");
    }
    for (int k = 0; k < 256; ++k) {
        const double a = draw(), b = draw();
        for (const auto& comp : flux.components) {
            if (std::abs(comp.value(a) - comp.value(b)) >
                flux.lipschitz * std::abs(a - b) + 1e-12) {
                throw ModelViolationError("ProblemSpec: flux Lipschitz bound violated");
            }
        }
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (diffusion.value(hi) < diffusion.value(lo)) {
            throw ModelViolationError("ProblemSpec: Phi not nondecreasing");
        }
        if (std::abs(brownian.value(a) - brownian.value(b)) >
            brownian.lipschitz * std::abs(a - b) + 1e-12) {
            throw ModelViolationError("ProblemSpec: phi Lipschitz bound violated");
        }
        if (jump_coef.lambda_star > 0.0 && !levy.atoms.empty()) {
            const auto& z = levy.atoms[k % levy.atoms.size()].z;
            if (jump_coef.value(0.0, z) != 0.0) {
                throw ModelViolationError("ProblemSpec: nu(0;z) != 0");
            }
            const double nua = jump_coef.value(a, z), nub = jump_coef.value(b, z);
            if (std::abs(nua - nub) >
                jump_coef.lambda_star * std::abs(a - b) * jump_coef.g(z) + 1e-12) {
                throw ModelViolationError("ProblemSpec: nu Lipschitz bound violated");
            }
            if ((hi > lo) && jump_coef.value(hi, z) < jump_coef.value(lo, z)) {
                throw ModelViolationError("ProblemSpec: nu not nondecreasing in u");
            }
        }
    }
}

void SolverConfig::check_cfl(const ProblemSpec& p) const {
    if (!(epsilon >= 0.0) || cells < 2 || steps < 1) {
        throw InvalidParameterError("SolverConfig: bad epsilon/cells/steps");
    }
    const double ratio = p.flux.lipschitz * dt(p) / dx(p);
    if (ratio > cfl_safety) {
        throw InvalidParameterError("SolverConfig: CFL violated, L_F dt/dx = " +
                                    std::to_string(ratio) + " > safety " +
                                    std::to_string(cfl_safety));
    }
}

Trajectory::Trajectory(int cells, int steps, double dx, double dt, double x0)
    : cells_(cells),
      steps_(steps),
      dx_(dx),
      dt_(dt),
      x0_(x0),
      data_(static_cast<std::size_t>(steps + 1) * cells, 0.0),
      diag_(static_cast<std::size_t>(steps)) {}

int Trajectory::total_clamps() const {
    int n = 0;
    for (const auto& d : diag_) n += d.clamp_activations;
    return n;
}

int Trajectory::total_jumps() const {
    int n = 0;
    for (const auto& d : diag_) n += d.jumps_applied;
    return n;
}

double kirchhoff_value(const DiffusionModel& model, double u) {
    if (model.kirchhoff_closed) return model.kirchhoff_closed(u);
    return kirchhoff(model, u);
}

namespace {

// Scratch buffers for one step; reused across the whole path solve.
struct StepWorkspace {
    std::vector<double> extended;  // state with ghost cells
    std::vector<double> face_flux; // EO fluxes, cells+1 faces
    std::vector<double> rhs;       // convection result / Newton right-hand side
    std::vector<double> w;         // Phi(v) + eps v with ghosts
    std::vector<double> residual;
    std::vector<double> delta;
    std::vector<double> diag_a, diag_b, diag_c; // tridiagonal Jacobian bands
    std::vector<double> trial;
    std::vector<double> compensator;

    void resize(int cells) {
        extended.assign(cells + 2, 0.0);
        face_flux.assign(cells + 1, 0.0);
        rhs.assign(cells, 0.0);
        w.assign(cells + 2, 0.0);
        residual.assign(cells, 0.0);
        delta.assign(cells, 0.0);
        diag_a.assign(cells, 0.0);
        diag_b.assign(cells, 0.0);
        diag_c.assign(cells, 0.0);
        trial.assign(cells, 0.0);
    }
};

thread_local StepWorkspace tl_ws;

// The equation transports along +div F (it reads du - div F(u) dt = ...), so
// the conservation flux is -F and the Engquist-Osher split swaps roles: the
// face flux is -(F-(u_left) + F+(u_right)).
void eo_convection(std::span<const double> u, std::span<double> out, double dt_over_dx,
                   const ProblemSpec& p, StepWorkspace& ws) {
    const int n = static_cast<int>(u.size());
    if (p.flux.kind == FluxModel::Kind::zero) {
        std::copy(u.begin(), u.end(), out.begin());
        return;
    }
    ws.extended[0] = 0.0;
    ws.extended[n + 1] = 0.0;
    std::copy(u.begin(), u.end(), ws.extended.begin() + 1);
    const std::span<const double> ext(ws.extended.data(), ws.extended.size());
    const std::span<double> flux(ws.face_flux.data(), ws.face_flux.size());
    switch (p.flux.kind) {
        case FluxModel::Kind::linear:
            // EO flux of -c u is exactly the linear kernel at speed -c
            kernels::eo_flux_linear(-p.flux.param, ext, flux);
            break;
        case FluxModel::Kind::burgers_clamped:
            kernels::eo_flux_burgers_mirror(p.flux.param, ext, flux);
            break;
        default: {
            const auto& comp = p.flux.component(0);
            for (int j = 0; j <= n; ++j) {
                ws.face_flux[j] = -(comp.eo_minus(ws.extended[j]) +
                                    comp.eo_plus(ws.extended[j + 1]));
            }
            break;
        }
    }
    for (int i = 0; i < n; ++i) {
        out[i] = u[i] - dt_over_dx * (ws.face_flux[i + 1] - ws.face_flux[i]);
    }
}

double residual_norm(std::span<const double> r) { return kernels::max_abs(r); }

// v - (dt/dx^2) Lap_h [Phi(v) + eps v] = rhs with homogeneous Dirichlet ghosts.
// Damped Newton with the tridiagonal Jacobian; the diagonal stays >= 1 because
// Phi' + eps >= 0, so the Thomas solve never degenerates. Templated on the
// diffusion callables so the shipped families run without std::function cost.
template <typename PhiFn, typename DPhiFn>
void newton_diffusion(std::span<double> v, std::span<const double> rhs, double lam,
                      double eps, PhiFn&& phi, DPhiFn&& dphi, const SolverConfig& cfg,
                      double t, StepWorkspace& ws, StepDiagnostics& diag) {
    const int n = static_cast<int>(v.size());

    auto eval_residual = [&](std::span<const double> trial, std::span<double> res) {
        ws.w[0] = 0.0;
        ws.w[n + 1] = 0.0;
        for (int i = 0; i < n; ++i) ws.w[i + 1] = phi(trial[i]) + eps * trial[i];
        for (int i = 0; i < n; ++i) {
            const double lap = ws.w[i] - 2.0 * ws.w[i + 1] + ws.w[i + 2];
            res[i] = trial[i] - lam * lap - rhs[i];
        }
    };

    eval_residual(v, ws.residual);
    double rnorm = residual_norm(ws.residual);
    int iter = 0;
    while (rnorm > cfg.newton_tol && iter < cfg.newton_max_iter) {
        // Jacobian row i: [ -lam s_{i-1}, 1 + 2 lam s_i, -lam s_{i+1} ],
        // s_j = Phi'(v_j) + eps (ghost columns drop out).
        for (int i = 0; i < n; ++i) {
            const double s = std::max(dphi(v[i]), 0.0) + eps;
            ws.diag_b[i] = 1.0 + 2.0 * lam * s;
        }
        ws.diag_a[0] = 0.0;
        ws.diag_c[n - 1] = 0.0;
        for (int i = 1; i < n; ++i) {
            ws.diag_a[i] = -lam * (std::max(dphi(v[i - 1]), 0.0) + eps);
        }
        for (int i = 0; i + 1 < n; ++i) {
            ws.diag_c[i] = -lam * (std::max(dphi(v[i + 1]), 0.0) + eps);
        }
        // Thomas solve J delta = residual (in place on the band copies)
        for (int i = 1; i < n; ++i) {
            const double m = ws.diag_a[i] / ws.diag_b[i - 1];
            ws.diag_b[i] -= m * ws.diag_c[i - 1];
            ws.residual[i] -= m * ws.residual[i - 1];
        }
        ws.delta[n - 1] = ws.residual[n - 1] / ws.diag_b[n - 1];
        for (int i = n - 2; i >= 0; --i) {
            ws.delta[i] = (ws.residual[i] - ws.diag_c[i] * ws.delta[i + 1]) / ws.diag_b[i];
        }

        // damped update: halve until the residual actually drops
        double step_scale = 1.0;
        bool accepted = false;
        for (int backtrack = 0; backtrack < 30; ++backtrack) {
            for (int i = 0; i < n; ++i) v[i] = v[i] - step_scale * ws.delta[i];
            eval_residual(v, ws.trial);
            const double tnorm = residual_norm(ws.trial);
            if (tnorm < rnorm || tnorm <= cfg.newton_tol) {
                rnorm = tnorm;
                std::copy(ws.trial.begin(), ws.trial.end(), ws.residual.begin());
                accepted = true;
                break;
            }
            for (int i = 0; i < n; ++i) v[i] = v[i] + step_scale * ws.delta[i];
            step_scale *= 0.5;
        }
        ++iter;
        if (!accepted) break;
    }
    diag.newton_iterations += iter;
    if (rnorm > cfg.newton_tol) {
        throw StepError("implicit diffusion solve failed at t=" + std::to_string(t),
                        -1, rnorm);
    }
}

void implicit_diffusion(std::span<double> v, std::span<const double> rhs, double dt,
                        double dx, const ProblemSpec& p, const SolverConfig& cfg,
                        double t, StepWorkspace& ws, StepDiagnostics& diag) {
    const double eps = cfg.epsilon;
    const double lam = dt / (dx * dx);
    switch (p.diffusion.kind) {
        case DiffusionModel::Kind::zero:
            if (eps == 0.0) return;
            newton_diffusion(
                v, rhs, lam, eps, [](double) { return 0.0; },
                [](double) { return 0.0; }, cfg, t, ws, diag);
            break;
        case DiffusionModel::Kind::identity:
            newton_diffusion(
                v, rhs, lam, eps, [](double u) { return u; },
                [](double) { return 1.0; }, cfg, t, ws, diag);
            break;
        case DiffusionModel::Kind::power_clamped: {
            const double m = p.diffusion.exponent;
            const double L = p.diffusion.clamp_slope;
            const double knee = std::pow(L, 1.0 / (m - 1.0));
            if (m == 2.0) {
                newton_diffusion(
                    v, rhs, lam, eps,
                    [L](double u) {
                        const double a = std::abs(u);
                        const double val = a < L ? a * a : L * a;
                        return u >= 0.0 ? val : -val;
                    },
                    [L, knee](double u) {
                        const double a = std::abs(u);
                        return a < knee ? 2.0 * a : L;
                    },
                    cfg, t, ws, diag);
            } else {
                newton_diffusion(
                    v, rhs, lam, eps,
                    [&](double u) { return p.diffusion.value(u); },
                    [&](double u) { return p.diffusion.deriv(u); }, cfg, t, ws, diag);
            }
            break;
        }
        default:
            newton_diffusion(
                v, rhs, lam, eps, [&](double u) { return p.diffusion.value(u); },
                [&](double u) { return p.diffusion.deriv(u); }, cfg, t, ws, diag);
            break;
    }
}

} // namespace

void step(std::span<double> state, double t, double dt, double brownian_increment,
          std::span<const Jump> jumps_in_step, const ProblemSpec& problem,
          const SolverConfig& config, StepDiagnostics& diag) {
    const int n = static_cast<int>(state.size());
    StepWorkspace& ws = tl_ws;
    if (static_cast<int>(ws.rhs.size()) != n) ws.resize(n);

    const double dx = problem.domain.length() / n;

    // compensator at the pre-step state, applied once per step; nu factors as
    // lambda* g(z) h(u), so the z-integral collapses to one weighted g-mass
    const bool has_jumps =
        problem.jump_coef.lambda_star > 0.0 && problem.levy.total_mass > 0.0;
    std::vector<double>& compensator = ws.compensator;
    if (has_jumps) {
        double g_mass = 0.0;
        for (const auto& atom : problem.levy.atoms) {
            g_mass += problem.jump_coef.g(atom.z) * atom.weight;
        }
        const double factor = problem.jump_coef.lambda_star * g_mass;
        compensator.resize(n);
        switch (problem.jump_coef.kind) {
            case JumpCoefficient::Kind::linear:
                for (int i = 0; i < n; ++i) compensator[i] = factor * state[i];
                break;
            case JumpCoefficient::Kind::tanh_shaped:
                for (int i = 0; i < n; ++i) {
                    compensator[i] = factor * std::tanh(state[i]);
                }
                break;
            default:
                for (int i = 0; i < n; ++i) {
                    compensator[i] = factor * problem.jump_coef.h(state[i]);
                }
                break;
        }
    }

    // (a) explicit monotone convection
    eo_convection(state, std::span<double>(ws.rhs.data(), n), dt / dx, problem, ws);

    // (b) implicit diffusion, warm-started from the convected state
    std::copy(ws.rhs.begin(), ws.rhs.end(), state.begin());
    implicit_diffusion(state, std::span<const double>(ws.rhs.data(), n), dt, dx,
                       problem, config, t, ws, diag);

    // (c) Ito increment, left-point evaluation
    if (problem.brownian.kind == BrownianCoefficient::Kind::linear) {
        kernels::scale(1.0 + problem.brownian.param * brownian_increment, state);
    } else if (problem.brownian.kind != BrownianCoefficient::Kind::zero) {
        for (int i = 0; i < n; ++i) {
            state[i] += problem.brownian.value(state[i]) * brownian_increment;
        }
    }

    // (d) jumps in time order with the pre-jump state, then the compensator
    for (const auto& jump : jumps_in_step) {
        const double gz = problem.jump_coef.lambda_star * problem.jump_coef.g(jump.mark);
        switch (problem.jump_coef.kind) {
            case JumpCoefficient::Kind::linear:
                for (int i = 0; i < n; ++i) state[i] += gz * state[i];
                break;
            case JumpCoefficient::Kind::tanh_shaped:
                for (int i = 0; i < n; ++i) state[i] += gz * std::tanh(state[i]);
                break;
            default:
                for (int i = 0; i < n; ++i) {
                    state[i] += problem.jump_coef.value(state[i], jump.mark);
                }
                break;
        }
        ++diag.jumps_applied;
    }
    if (has_jumps) {
        kernels::axpy(-dt, compensator, state);
    }

    // clamp to the Lipschitz window; activations go to the diagnostics
    const double m = problem.state_clamp;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(state[i])) {
            throw StepError("state diverged (non-finite value)", -1,
                            std::numeric_limits<double>::infinity());
        }
        if (state[i] > m) {
            state[i] = m;
            ++diag.clamp_activations;
        } else if (state[i] < -m) {
            state[i] = -m;
            ++diag.clamp_activations;
        }
    }
}

Trajectory solve_path(const ProblemSpec& problem, const SolverConfig& config,
                      const NoisePath& noise) {
    if (noise.steps != config.steps) {
        throw InvalidParameterError("solve_path: noise grid does not match config steps");
    }
    config.check_cfl(problem);

    const int n = config.cells;
    const double dx = config.dx(problem);
    const double dt = config.dt(problem);
    Trajectory traj(n, config.steps, dx, dt, problem.domain.x0);

    auto u0 = traj.state(0);
    if (problem.premollify_initial) {
        // sample onto a finer nodal grid, smooth up to the boundary, resample
        const ConeSpec cone{1.5707963267948966, 0.5 * problem.domain.length(),
                            {1.0, 0.0}};
        const double kappa =
            std::min(problem.premollify_kappa_per_dx * dx, 0.9 * cone.kappa_max());
        GridFunction1D fine(problem.domain, 4 * n + 1);
        for (int i = 0; i < fine.nodes(); ++i) {
            fine[i] = problem.initial_data(fine.node_x(i));
        }
        const GridFunction1D smooth = mollify_shifted_inward(fine, kappa, cone);
        for (int i = 0; i < n; ++i) u0[i] = smooth.sample_extended(traj.cell_x(i));
    } else {
        for (int i = 0; i < n; ++i) u0[i] = problem.initial_data(traj.cell_x(i));
    }

    std::size_t jump_cursor = 0;
    for (int step_idx = 0; step_idx < config.steps; ++step_idx) {
        const double t = step_idx * dt;
        const double t_next = (step_idx + 1) * dt;
        auto prev = traj.state(step_idx);
        auto next = traj.state(step_idx + 1);
        std::copy(prev.begin(), prev.end(), next.begin());

        // jumps with time in (t, t_next]
        const std::size_t first = jump_cursor;
        while (jump_cursor < noise.jumps.size() &&
               noise.jumps[jump_cursor].time <= t_next) {
            ++jump_cursor;
        }
        std::span<const Jump> jumps(noise.jumps.data() + first, jump_cursor - first);

        try {
            step(next, t, dt, noise.brownian_increments[step_idx], jumps, problem,
                 config, traj.diagnostics()[step_idx]);
        } catch (const StepError& e) {
            throw StepError(std::string(e.what()) + " (step " +
                                std::to_string(step_idx) + ")",
                            step_idx, e.residual_norm);
        }
    }
    return traj;
}

namespace {

// ||grad v||^2_L2 with ghost zeros: all cells+1 face differences count.
double grad_sq_l2(std::span<const double> v, double dx) {
    const int n = static_cast<int>(v.size());
    double acc = v[0] * v[0]; // face at the left boundary
    for (int i = 0; i + 1 < n; ++i) {
        const double d = v[i + 1] - v[i];
        acc += d * d;
    }
    acc += v[n - 1] * v[n - 1];
    return acc / dx; // (d/dx)^2 * dx per face
}

} // namespace

AprioriAccumulator::AprioriAccumulator(const ProblemSpec& problem,
                                       const SolverConfig& config)
    : problem_(&problem),
      epsilon_(config.epsilon),
      l2_sq_sum_per_time_(static_cast<std::size_t>(config.steps) + 1, 0.0) {}

void AprioriAccumulator::add(const Trajectory& traj) {
    const double dx = traj.dx();
    const double dt = traj.dt();
    std::vector<double> g(static_cast<std::size_t>(traj.cells()));
    double grad_int = 0.0, kirchhoff_int = 0.0;
    for (int nstep = 0; nstep <= traj.steps(); ++nstep) {
        auto u = traj.state(nstep);
        l2_sq_sum_per_time_[nstep] += kernels::sum_sq(u) * dx;
        if (nstep < traj.steps()) {
            grad_int += grad_sq_l2(u, dx) * dt;
            for (int i = 0; i < traj.cells(); ++i) {
                g[i] = kirchhoff_value(problem_->diffusion, u[i]);
            }
            kirchhoff_int += grad_sq_l2(g, dx) * dt;
        }
    }
    grad_sq_sum_ += grad_int;
    kirchhoff_grad_sq_sum_ += kirchhoff_int;
    ++paths_;
}

AprioriStatistics AprioriAccumulator::finish() const {
    if (paths_ == 0) {
        throw InvalidParameterError("apriori statistics: empty ensemble");
    }
    AprioriStatistics stats;
    double sup = 0.0;
    for (double s : l2_sq_sum_per_time_) sup = std::max(sup, s / paths_);
    stats.sup_expected_l2_sq = sup;
    stats.eps_grad_sq_time_integral = epsilon_ * grad_sq_sum_ / paths_;
    stats.kirchhoff_grad_sq_time_integral = kirchhoff_grad_sq_sum_ / paths_;
    return stats;
}

AprioriStatistics apriori_statistics(const std::vector<Trajectory>& ensemble,
                                     const ProblemSpec& problem,
                                     const SolverConfig& config) {
    AprioriAccumulator acc(problem, config);
    for (const auto& traj : ensemble) acc.add(traj);
    return acc.finish();
}

namespace {
void put_g17(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}
} // namespace

void save_trajectory(const Trajectory& traj, std::ostream& os, int stride) {
    if (stride < 1) stride = 1;
    os << "# spde-trajectory v1\n";
    os << "t,x,u\n";
    for (int n = 0; n <= traj.steps(); n += stride) {
        auto u = traj.state(n);
        for (int i = 0; i < traj.cells(); ++i) {
            put_g17(os, traj.time(n));
            os << ',';
            put_g17(os, traj.cell_x(i));
            os << ',';
            put_g17(os, u[i]);
            os << '\n';
        }
    }
}

std::string format_statistics_record(const AprioriStatistics& stats) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{ sup_E_l2_sq: %.17g, eps_grad_sq_int: %.17g, "
                  "kirchhoff_grad_sq_int: %.17g }",
                  stats.sup_expected_l2_sq, stats.eps_grad_sq_time_integral,
                  stats.kirchhoff_grad_sq_time_integral);
    return buf;
}

} // namespace spde
