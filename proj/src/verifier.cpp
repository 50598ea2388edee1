#include "spde/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spde/errors.hpp"
#include "spde/parallel.hpp"
#include "spde/quadrature.hpp"

namespace spde {

namespace {

// b(s) = (1 - s^2)^4,  b'(s) = -8 s (1-s^2)^3,  b''(s) = (1-s^2)^2 (56 s^2 - 8)
double bump(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    const double q2 = q * q;
    return q2 * q2;
}

double bump_d1(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return -8.0 * s * q * q * q;
}

double bump_d2(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return q * q * (56.0 * s * s - 8.0);
}

} // namespace

TestFunction TestFunction::bump(double amplitude, double time_center,
                                double time_radius, double space_center,
                                double space_radius) {
    TestFunction f;
    f.terms.push_back({amplitude, time_center, time_radius, space_center, space_radius});
    return f;
}

double TestFunction::value(double t, double x) const {
    double acc = 0.0;
    for (const auto& b : terms) {
        acc += b.amplitude * spde::bump((t - b.time_center) / b.time_radius) *
               spde::bump((x - b.space_center) / b.space_radius);
    }
    return acc;
}

double TestFunction::dt(double t, double x) const {
    double acc = 0.0;
    for (const auto& b : terms) {
        acc += b.amplitude * bump_d1((t - b.time_center) / b.time_radius) /
               b.time_radius * spde::bump((x - b.space_center) / b.space_radius);
    }
    return acc;
}

double TestFunction::dx(double t, double x) const {
    double acc = 0.0;
    for (const auto& b : terms) {
        acc += b.amplitude * spde::bump((t - b.time_center) / b.time_radius) *
               bump_d1((x - b.space_center) / b.space_radius) / b.space_radius;
    }
    return acc;
}

double TestFunction::dxx(double t, double x) const {
    double acc = 0.0;
    for (const auto& b : terms) {
        acc += b.amplitude * spde::bump((t - b.time_center) / b.time_radius) *
               bump_d2((x - b.space_center) / b.space_radius) /
               (b.space_radius * b.space_radius);
    }
    return acc;
}

TestFunction TestFunction::scaled(double factor) const {
    if (factor < 0.0) {
        throw InvalidParameterError("TestFunction::scaled: factor must be >= 0");
    }
    TestFunction f = *this;
    for (auto& b : f.terms) b.amplitude *= factor;
    return f;
}

TestFunction TestFunction::operator+(const TestFunction& other) const {
    TestFunction f = *this;
    f.terms.insert(f.terms.end(), other.terms.begin(), other.terms.end());
    return f;
}

bool TestFunction::support_in_domain(const Domain1D& d) const {
    for (const auto& b : terms) {
        if (b.space_center - b.space_radius < d.x0 ||
            b.space_center + b.space_radius > d.x1) {
            return false;
        }
    }
    return true;
}

bool TestFunction::vanishes_at(double horizon) const {
    for (const auto& b : terms) {
        if (b.time_center + b.time_radius > horizon) return false;
    }
    return true;
}

bool admissible(const AdmissibleTriple& triple, const Domain1D& domain) {
    if (triple.beta.orientation() == Orientation::plus) {
        return triple.k >= 0.0 || triple.psi.support_in_domain(domain);
    }
    // (k, psi, beta) in A- iff (-k, psi, reflected beta) in A+
    return triple.k <= 0.0 || triple.psi.support_in_domain(domain);
}

namespace {

// Cumulative table of a -> int_k^a beta'(r-k) model'(r) dr on [-m, m]; linear
// interpolation between nodes. The grid is fine enough that the kink-bearing
// cells contribute O(h^2) locally, far below the verification tolerance.
class EntropyFluxTable {
public:
    EntropyFluxTable() = default;

    template <typename DerivFn>
    EntropyFluxTable(double k, const EntropyApprox& beta, DerivFn&& deriv, double m,
                     int nodes = 4097) {
        lo_ = -m;
        h_ = 2.0 * m / (nodes - 1);
        values_.resize(static_cast<std::size_t>(nodes));
        auto integrand = [&](double r) { return beta.deriv(r - k) * deriv(r); };
        values_[0] = quad::adaptive_simpson_segmented(
            integrand, k, lo_, {k - beta.xi(), k, k + beta.xi()}, 1e-11);
        for (int j = 1; j < nodes; ++j) {
            const double a = lo_ + (j - 1) * h_;
            const double b = lo_ + j * h_;
            const double mid = 0.5 * (a + b);
            values_[j] = values_[j - 1] +
                         (b - a) / 6.0 *
                             (integrand(a) + 4.0 * integrand(mid) + integrand(b));
        }
    }

    double operator()(double u) const {
        const double s = (u - lo_) / h_;
        const int n = static_cast<int>(values_.size());
        if (s <= 0.0) return values_.front();
        if (s >= n - 1) return values_.back();
        const int j = static_cast<int>(s);
        const double w = s - j;
        return (1.0 - w) * values_[j] + w * values_[j + 1];
    }

private:
    double lo_ = 0.0, h_ = 1.0;
    std::vector<double> values_;
};

// nu(u; z) factored per atom: nu = factor_a * h(u) with one h dispatch.
struct JumpAtomView {
    double factor = 0.0; // lambda* g(z)
    double weight = 0.0; // m({z})
};

double h_of(const JumpCoefficient& coef, double u) {
    switch (coef.kind) {
        case JumpCoefficient::Kind::linear: return u;
        case JumpCoefficient::Kind::tanh_shaped: return std::tanh(u);
        default: return coef.h(u);
    }
}

} // namespace

LambdaBreakdown lambda_breakdown(const Trajectory& traj, const NoisePath& noise,
                                 const AdmissibleTriple& triple,
                                 const ProblemSpec& problem, double quad_tol) {
    if (noise.steps != traj.steps()) {
        throw InvalidParameterError("lambda_breakdown: trajectory/noise grid mismatch");
    }
    if (!admissible(triple, problem.domain)) {
        throw InvalidParameterError("lambda_breakdown: triple not admissible");
    }
    if (!triple.psi.vanishes_at(problem.horizon)) {
        throw InvalidParameterError("lambda_breakdown: psi must vanish at t = T");
    }

    const int n_cells = traj.cells();
    const int n_steps = traj.steps();
    const double dx = traj.dx();
    const double dt_step = traj.dt();
    const double k = triple.k;
    const EntropyApprox& beta = triple.beta;
    const auto& psi = triple.psi;
    const int n_terms = static_cast<int>(psi.terms.size());

    // per-bump spatial factors on the cell centers
    std::vector<std::vector<double>> bx(n_terms), bx1(n_terms), bx2(n_terms);
    for (int tix = 0; tix < n_terms; ++tix) {
        const auto& b = psi.terms[tix];
        bx[tix].resize(n_cells);
        bx1[tix].resize(n_cells);
        bx2[tix].resize(n_cells);
        for (int i = 0; i < n_cells; ++i) {
            const double s = (traj.cell_x(i) - b.space_center) / b.space_radius;
            bx[tix][i] = b.amplitude * bump(s);
            bx1[tix][i] = b.amplitude * bump_d1(s) / b.space_radius;
            bx2[tix][i] = b.amplitude * bump_d2(s) / (b.space_radius * b.space_radius);
        }
    }
    // merged per-step arrays psi, dt_psi, dx_psi, dxx_psi on the cells
    std::vector<double> psi_v(n_cells), psi_t(n_cells), psi_x1(n_cells),
        psi_x2(n_cells);
    auto assemble = [&](double t) {
        std::fill(psi_v.begin(), psi_v.end(), 0.0);
        std::fill(psi_t.begin(), psi_t.end(), 0.0);
        std::fill(psi_x1.begin(), psi_x1.end(), 0.0);
        std::fill(psi_x2.begin(), psi_x2.end(), 0.0);
        bool live = false;
        for (int tix = 0; tix < n_terms; ++tix) {
            const auto& b = psi.terms[tix];
            const double s = (t - b.time_center) / b.time_radius;
            const double bt = bump(s);
            const double bt1 = bump_d1(s) / b.time_radius;
            if (bt == 0.0 && bt1 == 0.0) continue;
            live = true;
            for (int i = 0; i < n_cells; ++i) {
                psi_v[i] += bt * bx[tix][i];
                psi_t[i] += bt1 * bx[tix][i];
                psi_x1[i] += bt * bx1[tix][i];
                psi_x2[i] += bt * bx2[tix][i];
            }
        }
        return live;
    };

    const bool has_flux = problem.flux.kind != FluxModel::Kind::zero;
    const bool has_diffusion = problem.diffusion.kind != DiffusionModel::Kind::zero;
    const bool has_brownian = problem.brownian.kind != BrownianCoefficient::Kind::zero;
    const bool has_jumps =
        problem.jump_coef.lambda_star > 0.0 && !problem.levy.atoms.empty();

    EntropyFluxTable flux_table, diff_table;
    const double table_span = problem.state_clamp + 1.0;
    if (has_flux) {
        const auto& deriv = problem.flux.component(0).deriv;
        flux_table = EntropyFluxTable(k, beta, deriv, table_span);
    }
    if (has_diffusion) {
        diff_table = EntropyFluxTable(k, beta, problem.diffusion.deriv, table_span);
    }
    (void)quad_tol;

    std::vector<JumpAtomView> atoms;
    if (has_jumps) {
        atoms.reserve(problem.levy.atoms.size());
        for (const auto& atom : problem.levy.atoms) {
            atoms.push_back({problem.jump_coef.lambda_star * problem.jump_coef.g(atom.z),
                             atom.weight});
        }
    }

    LambdaBreakdown out;
    std::vector<double> g(static_cast<std::size_t>(n_cells));
    std::size_t jump_cursor = 0;

    for (int n = 0; n < n_steps; ++n) {
        const double t = traj.time(n);
        auto u = traj.state(n);

        // jump events inside (t, t+dt]: state at the step start (pre-jump up
        // to O(dt)), psi at the exact jump time
        while (jump_cursor < noise.jumps.size() &&
               noise.jumps[jump_cursor].time <= t + dt_step) {
            const auto& jmp = noise.jumps[jump_cursor];
            if (has_jumps) {
                const double factor =
                    problem.jump_coef.lambda_star * problem.jump_coef.g(jmp.mark);
                double acc = 0.0;
                for (int i = 0; i < n_cells; ++i) {
                    const double pv = psi.value(jmp.time, traj.cell_x(i));
                    if (pv == 0.0) continue;
                    const double r = u[i] - k;
                    const double nu = factor * h_of(problem.jump_coef, u[i]);
                    acc += (beta.value(r + nu) - beta.value(r)) * pv;
                }
                out.jump_martingale += acc * dx;
            }
            ++jump_cursor;
        }

        if (!assemble(t)) continue;

        double transport = 0.0;
        double ito_sum = 0.0;
        double ito_corr = 0.0;
        double jump_comp_mart = 0.0;
        double jump_comp_taylor = 0.0;
        double dissipation = 0.0;

        if (has_diffusion) {
            for (int i = 0; i < n_cells; ++i) {
                g[i] = kirchhoff_value(problem.diffusion, u[i]);
            }
        }

        for (int i = 0; i < n_cells; ++i) {
            const double pv = psi_v[i];
            const double pt = psi_t[i];
            const double px1 = psi_x1[i];
            const double px2 = psi_x2[i];
            if (pv == 0.0 && pt == 0.0 && px1 == 0.0 && px2 == 0.0) continue;
            const double r = u[i] - k;

            transport += beta.value(r) * pt;
            if (has_flux) transport -= flux_table(u[i]) * px1;
            if (has_diffusion) transport += diff_table(u[i]) * px2;

            if (pv != 0.0) {
                if (has_brownian) {
                    const double phi_u = problem.brownian.value(u[i]);
                    ito_sum += phi_u * beta.deriv(r) * pv;
                    ito_corr += 0.5 * phi_u * phi_u * beta.second(r) * pv;
                }
                if (has_jumps) {
                    const double hu = h_of(problem.jump_coef, u[i]);
                    double comp_m = 0.0, comp_t = 0.0;
                    for (const auto& atom : atoms) {
                        const double nu = atom.factor * hu;
                        const double dbeta = beta.value(r + nu) - beta.value(r);
                        comp_m += dbeta * atom.weight;
                        comp_t += (dbeta - nu * beta.deriv(r)) * atom.weight;
                    }
                    jump_comp_mart += comp_m * pv;
                    jump_comp_taylor += comp_t * pv;
                }
                if (has_diffusion) {
                    const double b2 = beta.second(r);
                    if (b2 != 0.0) {
                        const double g_left = (i == 0) ? 0.0 : g[i - 1];
                        const double g_right = (i == n_cells - 1) ? 0.0 : g[i + 1];
                        const double grad = (g_right - g_left) / (2.0 * dx);
                        dissipation -= b2 * grad * grad * pv;
                    }
                }
            }
        }

        out.transport += transport * dx * dt_step;
        out.ito += ito_sum * dx * noise.brownian_increments[n];
        out.ito_correction += ito_corr * dx * dt_step;
        out.jump_martingale -= jump_comp_mart * dx * dt_step;
        out.jump_compensation += jump_comp_taylor * dx * dt_step;
        out.dissipation += dissipation * dx * dt_step;
    }

    // initial term
    {
        auto u0 = traj.state(0);
        double acc = 0.0;
        for (int i = 0; i < n_cells; ++i) {
            const double pv = psi.value(0.0, traj.cell_x(i));
            if (pv != 0.0) acc += beta.value(u0[i] - k) * pv;
        }
        out.initial = acc * dx;
    }

    return out;
}

double lambda_functional(const Trajectory& traj, const NoisePath& noise,
                         const AdmissibleTriple& triple, const ProblemSpec& problem,
                         double quad_tol) {
    return lambda_breakdown(traj, noise, triple, problem, quad_tol).total();
}

McEntropyResult mc_entropy_check(const ProblemSpec& problem, const SolverConfig& config,
                                 const AdmissibleTriple& triple, int n_paths,
                                 std::uint64_t master_seed, int threads) {
    if (n_paths < 2) {
        throw InvalidParameterError("mc_entropy_check: need at least 2 paths");
    }
    std::vector<double> samples(static_cast<std::size_t>(n_paths), 0.0);
    std::vector<char> ok(static_cast<std::size_t>(n_paths), 0);

    parallel_for_indexed(n_paths, threads, [&](int p) {
        try {
            const NoisePath noise = sample_noise_path(
                problem.levy, problem.horizon, config.steps, master_seed,
                static_cast<std::uint64_t>(p));
            const Trajectory traj = solve_path(problem, config, noise);
            samples[p] = lambda_functional(traj, noise, triple, problem);
            ok[p] = 1;
        } catch (const std::exception&) {
            ok[p] = 0;
        }
    });

    McEntropyResult res;
    for (int p = 0; p < n_paths; ++p) {
        if (ok[p]) {
            res.samples.push_back(samples[p]);
        } else {
            res.failed_paths.push_back(static_cast<std::uint64_t>(p));
        }
    }
    res.paths_succeeded = static_cast<int>(res.samples.size());
    if (res.paths_succeeded < 2) {
        throw NumericalError("mc_entropy_check: fewer than 2 paths succeeded", 0.0);
    }

    double mean = 0.0;
    for (double s : res.samples) mean += s;
    mean /= res.paths_succeeded;
    double var = 0.0;
    for (double s : res.samples) var += (s - mean) * (s - mean);
    var /= (res.paths_succeeded - 1);
    res.mean = mean;
    res.half_width_95 = 1.959963984540054 * std::sqrt(var / res.paths_succeeded);

    std::vector<double> sorted = res.samples;
    std::sort(sorted.begin(), sorted.end());
    const auto idx =
        static_cast<std::size_t>(std::floor(0.05 * (sorted.size() - 1)));
    res.p05 = sorted[idx];
    return res;
}

} // namespace spde
