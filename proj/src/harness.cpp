#include "spde/harness.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "spde/errors.hpp"
#include "spde/kernels.hpp"
#include "spde/parallel.hpp"

namespace spde {

namespace {

void enforce_failure_policy(int failed, int total, const FailurePolicy& policy,
                            const char* what) {
    if (total == 0 ||
        static_cast<double>(failed) / total > policy.max_failed_fraction) {
        throw NumericalError(std::string(what) + ": too many failed paths (" +
                                 std::to_string(failed) + "/" + std::to_string(total) +
                                 ")",
                             0.0);
    }
}

} // namespace

ContractionResult contraction_experiment(const ProblemSpec& problem,
                                         const std::function<double(double)>& u01,
                                         const std::function<double(double)>& u02,
                                         const SolverConfig& config, int n_paths,
                                         std::uint64_t master_seed, int threads,
                                         int output_every, FailurePolicy policy) {
    if (output_every <= 0) output_every = std::max(1, config.steps / 50);

    std::vector<int> output_steps;
    for (int n = 0; n <= config.steps; n += output_every) output_steps.push_back(n);
    if (output_steps.back() != config.steps) output_steps.push_back(config.steps);
    const int n_out = static_cast<int>(output_steps.size());

    ProblemSpec p1 = problem;
    p1.initial_data = u01;
    ProblemSpec p2 = problem;
    p2.initial_data = u02;

    // per path, the discrete int (u1-u2)+ dx at each output time
    std::vector<std::vector<double>> per_path(
        static_cast<std::size_t>(n_paths));
    std::vector<char> ok(static_cast<std::size_t>(n_paths), 0);

    parallel_for_indexed(n_paths, threads, [&](int p) {
        try {
            const NoisePath noise =
                sample_noise_path(problem.levy, problem.horizon, config.steps,
                                  master_seed, static_cast<std::uint64_t>(p));
            const Trajectory t1 = solve_path(p1, config, noise);
            const Trajectory t2 = solve_path(p2, config, noise);
            auto& row = per_path[p];
            row.resize(n_out);
            for (int j = 0; j < n_out; ++j) {
                row[j] = kernels::sum_pos_diff(t1.state(output_steps[j]),
                                               t2.state(output_steps[j])) *
                         t1.dx();
            }
            ok[p] = 1;
        } catch (const std::exception&) {
            ok[p] = 0;
        }
    });

    ContractionResult res;
    for (int p = 0; p < n_paths; ++p) {
        if (!ok[p]) res.failed_paths.push_back(static_cast<std::uint64_t>(p));
    }
    res.paths_succeeded = n_paths - static_cast<int>(res.failed_paths.size());
    enforce_failure_policy(static_cast<int>(res.failed_paths.size()), n_paths, policy,
                           "contraction_experiment");

    res.series.resize(n_out);
    const double dt = config.dt(problem);
    for (int j = 0; j < n_out; ++j) {
        double mean = 0.0;
        for (int p = 0; p < n_paths; ++p) {
            if (ok[p]) mean += per_path[p][j];
        }
        mean /= res.paths_succeeded;
        // CI of the paired drift value(t) - value(0)
        double var = 0.0;
        double drift_mean = 0.0;
        for (int p = 0; p < n_paths; ++p) {
            if (ok[p]) drift_mean += per_path[p][j] - per_path[p][0];
        }
        drift_mean /= res.paths_succeeded;
        for (int p = 0; p < n_paths; ++p) {
            if (ok[p]) {
                const double d = (per_path[p][j] - per_path[p][0]) - drift_mean;
                var += d * d;
            }
        }
        var = res.paths_succeeded > 1 ? var / (res.paths_succeeded - 1) : 0.0;
        res.series[j] = SeriesPoint{
            output_steps[j] * dt, mean,
            1.959963984540054 * std::sqrt(var / res.paths_succeeded)};
        res.worst_drift = std::max(res.worst_drift, drift_mean);
    }
    return res;
}

KatoReport kato_report(const Trajectory& u, const Trajectory& v,
                       const TestFunction& psi, const ProblemSpec& problem) {
    if (u.cells() != v.cells() || u.steps() != v.steps()) {
        throw InvalidParameterError("kato_report: trajectory grids differ");
    }
    const int n_cells = u.cells();
    const int n_steps = u.steps();
    const double dx = u.dx();
    const double dt = u.dt();

    const auto& flux_value = problem.flux.component(0).value;
    const bool has_flux = problem.flux.kind != FluxModel::Kind::zero;
    const bool has_diffusion = problem.diffusion.kind != DiffusionModel::Kind::zero;

    KatoReport rep;
    for (int n = 0; n < n_steps; ++n) {
        const double t = u.time(n);
        double time_acc = 0.0, flux_acc = 0.0, diff_acc = 0.0;
        auto uu = u.state(n);
        auto vv = v.state(n);
        for (int i = 0; i < n_cells; ++i) {
            const double x = u.cell_x(i);
            const double dpsi_t = psi.dt(t, x);
            const double dpsi_x = has_flux ? psi.dx(t, x) : 0.0;
            const double dpsi_xx = has_diffusion ? psi.dxx(t, x) : 0.0;
            if (dpsi_t == 0.0 && dpsi_x == 0.0 && dpsi_xx == 0.0) continue;
            const double diff = uu[i] - vv[i];
            const double sgn_plus = diff > 0.0 ? 1.0 : 0.0;
            time_acc += std::max(diff, 0.0) * dpsi_t;
            if (has_flux && sgn_plus != 0.0) {
                flux_acc -= (flux_value(uu[i]) - flux_value(vv[i])) * dpsi_x;
            }
            if (has_diffusion && sgn_plus != 0.0) {
                diff_acc += (problem.diffusion.value(uu[i]) -
                             problem.diffusion.value(vv[i])) *
                            dpsi_xx;
            }
        }
        rep.time_term += time_acc * dx * dt;
        rep.flux_term += flux_acc * dx * dt;
        rep.diffusion_term += diff_acc * dx * dt;
    }
    {
        auto u0 = u.state(0);
        auto v0 = v.state(0);
        double acc = 0.0;
        for (int i = 0; i < n_cells; ++i) {
            acc += std::max(u0[i] - v0[i], 0.0) * psi.value(0.0, u.cell_x(i));
        }
        rep.initial_term = acc * dx;
    }
    return rep;
}

std::vector<ConvergenceRow> viscosity_convergence(
    const ProblemSpec& problem, const std::vector<double>& eps_seq,
    const SolverConfig& config, int n_paths, std::uint64_t master_seed, int threads,
    InteriorWindow window, FailurePolicy policy) {
    if (eps_seq.size() < 3) {
        throw InvalidParameterError("viscosity_convergence: need >= 3 viscosities");
    }
    for (std::size_t i = 1; i < eps_seq.size(); ++i) {
        if (!(eps_seq[i] < eps_seq[i - 1])) {
            throw InvalidParameterError(
                "viscosity_convergence: eps_seq must decrease strictly");
        }
    }

    const int n_pairs = static_cast<int>(eps_seq.size()) - 1;
    const double dx = config.dx(problem);
    const double dt = config.dt(problem);
    const double x_lo =
        problem.domain.x0 + window.x_lo_fraction * problem.domain.length();
    const double x_hi =
        problem.domain.x0 + window.x_hi_fraction * problem.domain.length();

    std::vector<std::vector<double>> p1_sums(static_cast<std::size_t>(n_paths)),
        p2_sums(static_cast<std::size_t>(n_paths));
    std::vector<char> ok(static_cast<std::size_t>(n_paths), 0);

    parallel_for_indexed(n_paths, threads, [&](int p) {
        try {
            const NoisePath noise =
                sample_noise_path(problem.levy, problem.horizon, config.steps,
                                  master_seed, static_cast<std::uint64_t>(p));
            std::vector<Trajectory> runs;
            runs.reserve(eps_seq.size());
            for (double eps : eps_seq) {
                SolverConfig c = config;
                c.epsilon = eps;
                runs.push_back(solve_path(problem, c, noise));
            }
            auto& l1 = p1_sums[p];
            auto& l2 = p2_sums[p];
            l1.assign(n_pairs, 0.0);
            l2.assign(n_pairs, 0.0);
            for (int pair = 0; pair < n_pairs; ++pair) {
                const Trajectory& a = runs[pair];
                const Trajectory& b = runs[pair + 1];
                double acc1 = 0.0, acc2 = 0.0;
                for (int n = 1; n <= config.steps; ++n) {
                    auto ua = a.state(n);
                    auto ub = b.state(n);
                    for (int i = 0; i < config.cells; ++i) {
                        const double x = a.cell_x(i);
                        if (x < x_lo || x > x_hi) continue;
                        const double d = std::abs(ua[i] - ub[i]);
                        acc1 += d;
                        acc2 += d * d;
                    }
                }
                l1[pair] = acc1 * dx * dt;
                l2[pair] = std::sqrt(acc2 * dx * dt);
            }
            ok[p] = 1;
        } catch (const std::exception&) {
            ok[p] = 0;
        }
    });

    int failed = 0;
    for (char c : ok) {
        if (!c) ++failed;
    }
    enforce_failure_policy(failed, n_paths, policy, "viscosity_convergence");
    const int good = n_paths - failed;

    std::vector<ConvergenceRow> rows(static_cast<std::size_t>(n_pairs));
    for (int pair = 0; pair < n_pairs; ++pair) {
        double m1 = 0.0, m2 = 0.0;
        for (int p = 0; p < n_paths; ++p) {
            if (ok[p]) {
                m1 += p1_sums[p][pair];
                m2 += p2_sums[p][pair];
            }
        }
        rows[pair] = ConvergenceRow{eps_seq[pair], eps_seq[pair + 1], m1 / good,
                                    m2 / good};
    }
    return rows;
}

AprioriStatistics apriori_experiment(const ProblemSpec& problem,
                                     const SolverConfig& config, int n_paths,
                                     std::uint64_t master_seed, int threads) {
    std::vector<std::vector<double>> per_path_l2(static_cast<std::size_t>(n_paths));
    std::vector<double> per_path_grad(static_cast<std::size_t>(n_paths), 0.0);
    std::vector<double> per_path_kirchhoff(static_cast<std::size_t>(n_paths), 0.0);

    // per-path quantities recorded individually, reduced in path order so the
    // result is independent of the worker partition
    parallel_for_indexed(n_paths, threads, [&](int p) {
        const NoisePath noise =
            sample_noise_path(problem.levy, problem.horizon, config.steps,
                              master_seed, static_cast<std::uint64_t>(p));
        const Trajectory traj = solve_path(problem, config, noise);
        const double dx = traj.dx();
        const double dt = traj.dt();
        auto& l2 = per_path_l2[p];
        l2.resize(traj.steps() + 1);
        std::vector<double> g(static_cast<std::size_t>(traj.cells()));
        double grad_int = 0.0, kirch_int = 0.0;
        for (int n = 0; n <= traj.steps(); ++n) {
            auto u = traj.state(n);
            l2[n] = kernels::sum_sq(u) * dx;
            if (n < traj.steps()) {
                double acc = u[0] * u[0];
                for (int i = 0; i + 1 < traj.cells(); ++i) {
                    const double d = u[i + 1] - u[i];
                    acc += d * d;
                }
                acc += u[traj.cells() - 1] * u[traj.cells() - 1];
                grad_int += acc / dx * dt;
                for (int i = 0; i < traj.cells(); ++i) {
                    g[i] = kirchhoff_value(problem.diffusion, u[i]);
                }
                double gacc = g[0] * g[0];
                for (int i = 0; i + 1 < traj.cells(); ++i) {
                    const double d = g[i + 1] - g[i];
                    gacc += d * d;
                }
                gacc += g[traj.cells() - 1] * g[traj.cells() - 1];
                kirch_int += gacc / dx * dt;
            }
        }
        per_path_grad[p] = grad_int;
        per_path_kirchhoff[p] = kirch_int;
    });

    AprioriStatistics stats;
    std::vector<double> l2_mean(static_cast<std::size_t>(config.steps) + 1, 0.0);
    double grad_sum = 0.0, kirch_sum = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        for (std::size_t n = 0; n < l2_mean.size(); ++n) l2_mean[n] += per_path_l2[p][n];
        grad_sum += per_path_grad[p];
        kirch_sum += per_path_kirchhoff[p];
    }
    double sup = 0.0;
    for (double s : l2_mean) sup = std::max(sup, s / n_paths);
    stats.sup_expected_l2_sq = sup;
    stats.eps_grad_sq_time_integral = config.epsilon * grad_sum / n_paths;
    stats.kirchhoff_grad_sq_time_integral = kirch_sum / n_paths;
    return stats;
}

} // namespace spde
