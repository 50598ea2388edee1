#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spde/config.hpp"
#include "spde/errors.hpp"
#include "spde/harness.hpp"
#include "spde/kernels.hpp"
#include "spde/presets.hpp"
#include "spde/tolerances.hpp"

using namespace spde;

namespace {

NoisePath zero_noise(int steps, double horizon) {
    NoisePath p;
    p.horizon = horizon;
    p.steps = steps;
    p.brownian_increments.assign(static_cast<std::size_t>(steps), 0.0);
    return p;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parser: values, comments, and errors with line numbers") {
    std::stringstream good(
        "# a comment\n"
        "experiment = contraction\n"
        "cells = 50\n"
        "steps= 500   # trailing comment\n"
        "eps_seq = 0.04, 0.02, 0.01\n"
        "seed = 42\n");
    const RunConfig cfg = parse_run_config(good);
    CHECK(cfg.experiment == "contraction");
    CHECK(cfg.cells == 50);
    CHECK(cfg.steps == 500);
    CHECK(cfg.eps_seq.size() == 3);
    CHECK(cfg.seed == 42);

    std::stringstream bad_key("experiment = entropy\nnot_a_key = 1\n");
    try {
        parse_run_config(bad_key);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("not_a_key") != std::string::npos);
    }

    std::stringstream no_exp("cells = 10\n");
    try {
        parse_run_config(no_exp);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("experiment") != std::string::npos);
    }

    std::stringstream bad_num("experiment = kato\ncells = many\n");
    CHECK_THROWS_AS(parse_run_config(bad_num), ConfigError);

    std::stringstream bad_exp("experiment = frobnicate\n");
    CHECK_THROWS_AS(parse_run_config(bad_exp), ConfigError);
}

TEST_CASE("contraction with identical data is exactly zero") {
    ProblemSpec p = presets::mixed(0.5);
    SolverConfig cfg;
    cfg.epsilon = 0.02;
    cfg.cells = 40;
    cfg.steps = 250;
    auto u0 = p.initial_data;
    const auto res = contraction_experiment(p, u0, u0, cfg, 6, 11);
    CHECK(res.paths_succeeded == 6);
    for (const auto& pt : res.series) {
        CHECK(pt.mean == 0.0);
        CHECK(pt.half_width == 0.0);
    }
    CHECK(res.worst_drift == 0.0);
}

TEST_CASE("contraction series is reproducible bit for bit across thread counts") {
    ProblemSpec p = presets::mixed(0.5);
    SolverConfig cfg;
    cfg.epsilon = 0.02;
    cfg.cells = 40;
    cfg.steps = 250;
    auto u01 = p.initial_data;
    auto u02 = [](double x) {
        const double s = (x - 0.5) / 0.2;
        const double b = std::abs(s) < 1.0 ? std::pow(1.0 - s * s, 4) : 0.0;
        return std::sin(3.141592653589793 * x) - 0.3 * b;
    };
    const auto a = contraction_experiment(p, u01, u02, cfg, 8, 21, 1);
    const auto b = contraction_experiment(p, u01, u02, cfg, 8, 21, 4);
    REQUIRE(a.series.size() == b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) {
        CHECK(a.series[i].mean == b.series[i].mean);
        CHECK(a.series[i].half_width == b.series[i].half_width);
    }
}

TEST_CASE("contracting pair: the positive-part integral does not grow") {
    ProblemSpec p = presets::mixed(1.0);
    SolverConfig cfg;
    cfg.epsilon = 0.01;
    cfg.cells = 50;
    cfg.steps = 1000;
    auto u01 = p.initial_data;
    auto u02 = [u01](double x) {
        const double s = (x - 0.5) / 0.2;
        const double b = std::abs(s) < 1.0 ? std::pow(1.0 - s * s, 4) : 0.0;
        return u01(x) - 0.4 * b;
    };
    const auto res = contraction_experiment(p, u01, u02, cfg, 24, 31);
    const double tol =
        tol::inequality(cfg.dx(p), cfg.dt(p));
    for (const auto& pt : res.series) {
        CHECK(pt.mean <= res.series.front().mean + tol + pt.half_width);
    }
    CHECK(res.series.front().mean > 0.0);
}

TEST_CASE("kato report: identical trajectories leave only roundoff") {
    ProblemSpec p = presets::mixed(0.5);
    SolverConfig cfg;
    cfg.epsilon = 0.02;
    cfg.cells = 40;
    cfg.steps = 250;
    const NoisePath noise = sample_noise_path(p.levy, p.horizon, cfg.steps, 3, 0);
    const Trajectory t1 = solve_path(p, cfg, noise);
    const TestFunction psi = TestFunction::bump(1.0, 0.2, 0.2, 0.5, 0.4);
    const KatoReport rep = kato_report(t1, t1, psi, p);
    CHECK(rep.time_term == 0.0);
    CHECK(rep.flux_term == 0.0);
    CHECK(rep.diffusion_term == 0.0);
    CHECK(rep.initial_term == 0.0);
    CHECK(rep.total() == 0.0);
}

TEST_CASE("kato report on ordered heat data: sign and breakdown additivity") {
    ProblemSpec p = presets::heat(0.5);
    SolverConfig cfg;
    cfg.epsilon = 0.0;
    cfg.cells = 100;
    cfg.steps = 1000;
    ProblemSpec lo = p;
    lo.initial_data = [](double x) { return 0.5 * std::sin(3.141592653589793 * x); };
    const NoisePath noise = zero_noise(cfg.steps, p.horizon);
    const Trajectory hi_t = solve_path(p, cfg, noise);
    const Trajectory lo_t = solve_path(lo, cfg, noise);

    const TestFunction global = TestFunction::bump(1.0, 0.2, 0.2, 0.5, 0.6);
    const TestFunction local = TestFunction::bump(1.0, 0.2, 0.2, 0.5, 0.45);
    const double tol = tol::inequality(cfg.dx(p), cfg.dt(p));
    for (const auto& psi : {global, local}) {
        const KatoReport rep = kato_report(hi_t, lo_t, psi, p);
        CHECK(rep.total() >= -tol);
        const double resum =
            rep.time_term + rep.flux_term + rep.diffusion_term + rep.initial_term;
        CHECK(std::abs(rep.total() - resum) <=
              1e-10 * std::max(1.0, std::abs(rep.total())));
        // swapped arguments use (v-u)+ brackets and must also clear the bar
        const KatoReport swapped = kato_report(lo_t, hi_t, psi, p);
        CHECK(swapped.total() >= -tol);
    }
}

TEST_CASE("trajectory pairs satisfy identity (a-b)+ = (a+-b+)+ + (b--a-)+ nodewise") {
    ProblemSpec p = presets::mixed(0.5);
    SolverConfig cfg;
    cfg.epsilon = 0.02;
    cfg.cells = 40;
    cfg.steps = 250;
    const NoisePath noise = sample_noise_path(p.levy, p.horizon, cfg.steps, 17, 0);
    ProblemSpec shifted = p;
    shifted.initial_data = [](double x) {
        return std::sin(3.141592653589793 * x) - 0.2;
    };
    const Trajectory a = solve_path(p, cfg, noise);
    const Trajectory b = solve_path(shifted, cfg, noise);
    auto pos = [](double v) { return v > 0.0 ? v : 0.0; };
    auto negpart = [](double v) { return v < 0.0 ? -v : 0.0; };
    for (int n = 0; n <= cfg.steps; n += 50) {
        auto ua = a.state(n);
        auto ub = b.state(n);
        for (int i = 0; i < cfg.cells; ++i) {
            const double lhs = pos(ua[i] - ub[i]);
            const double rhs =
                pos(pos(ua[i]) - pos(ub[i])) + pos(negpart(ub[i]) - negpart(ua[i]));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("viscosity convergence on the heat problem scales with eps gaps") {
    ProblemSpec p = presets::heat(0.5);
    SolverConfig cfg;
    cfg.cells = 50;
    cfg.steps = 500;
    const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
    const auto rows = viscosity_convergence(p, eps, cfg, 2, 5);
    REQUIRE(rows.size() == 3);
    // linear problem: differences scale like the eps gap (4:2:1 here)
    CHECK(rows[0].diff_p1 > rows[1].diff_p1);
    CHECK(rows[1].diff_p1 > rows[2].diff_p1);
    CHECK(rows[0].diff_p1 / rows[1].diff_p1 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(rows[1].diff_p1 / rows[2].diff_p1 == doctest::Approx(2.0).epsilon(0.15));

    // zero initial data: all differences vanish
    ProblemSpec z = p;
    z.initial_data = [](double) { return 0.0; };
    for (const auto& row : viscosity_convergence(z, eps, cfg, 2, 5)) {
        CHECK(row.diff_p1 == 0.0);
        CHECK(row.diff_p2 == 0.0);
    }

    CHECK_THROWS_AS(viscosity_convergence(p, {0.1, 0.2, 0.3}, cfg, 2, 5),
                    InvalidParameterError);
    CHECK_THROWS_AS(viscosity_convergence(p, {0.1, 0.05}, cfg, 2, 5),
                    InvalidParameterError);
}

TEST_CASE("cli run: contraction config produces byte-identical reruns") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "spde_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg_path = dir / "run.cfg";
    {
        std::ofstream os(cfg_path);
        os << "experiment = contraction\n"
           << "T = 0.5\n"
           << "flux = burgers\nflux_param = 2.5\n"
           << "diffusion = power\ndiffusion_exponent = 2\ndiffusion_clamp = 2\n"
           << "brownian = linear\nbrownian_param = 0.2\n"
           << "levy = two_atom\njump = tanh\nlambda_star = 0.5\n"
           << "u0 = sine\nbump_height = 0.3\n"
           << "epsilon = 0.02\ncells = 40\nsteps = 250\n"
           << "paths = 6\nseed = 9\n";
    }
    CliOverrides ov1;
    ov1.has_out = true;
    ov1.out_dir = (dir / "out1").string();
    CHECK(cli_run(cfg_path.string(), ov1) == 0);
    CliOverrides ov2;
    ov2.has_out = true;
    ov2.out_dir = (dir / "out2").string();
    CHECK(cli_run(cfg_path.string(), ov2) == 0);

    const auto s1 = slurp(dir / "out1" / "contraction_series.csv");
    const auto s2 = slurp(dir / "out2" / "contraction_series.csv");
    CHECK(!s1.empty());
    CHECK(s1 == s2);
    CHECK(slurp(dir / "out1" / "summary.txt") == slurp(dir / "out2" / "summary.txt"));

    // identical-data control: series must be exactly zero
    const fs::path control_path = dir / "control.cfg";
    {
        std::ofstream os(control_path);
        os << "experiment = contraction\nT = 0.5\nflux = burgers\nflux_param = 2.5\n"
           << "u0 = sine\nbump_height = 0\nepsilon = 0.02\ncells = 40\nsteps = 250\n"
           << "paths = 4\nseed = 9\n";
    }
    CliOverrides ovc;
    ovc.has_out = true;
    ovc.out_dir = (dir / "out_control").string();
    CHECK(cli_run(control_path.string(), ovc) == 0);
    std::ifstream series(dir / "out_control" / "contraction_series.csv");
    std::string line;
    std::getline(series, line); // schema comment
    std::getline(series, line); // header
    while (std::getline(series, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        CHECK(line.substr(c1 + 1, c2 - c1 - 1) == "0");
    }
}

TEST_CASE("cli run: malformed configs exit nonzero with a named key") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "spde_cli_bad";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg_path = dir / "bad.cfg";
    {
        std::ofstream os(cfg_path);
        os << "experiment = contraction\nzells = 40\n";
    }
    try {
        cli_run(cfg_path.string(), {});
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("zells") != std::string::npos);
        CHECK(e.line == 2);
    }
}

TEST_CASE("tolerance model covers the heat-problem defects with margin") {
    // the (a, b) coefficients frozen in tolerances.hpp were calibrated on this
    // problem; this test guards the calibration
    ProblemSpec p = presets::heat(0.5);
    SolverConfig cfg;
    cfg.epsilon = 0.05;
    cfg.cells = 50;
    cfg.steps = 500;
    const NoisePath noise = zero_noise(cfg.steps, p.horizon);
    const Trajectory traj = solve_path(p, cfg, noise);

    // entropy side: k crossing the solution range, coarse xi
    double worst_lambda = 0.0;
    for (double k : {0.0, 0.3, 0.7}) {
        for (double xi : {0.02, 0.05}) {
            const double val = lambda_functional(
                traj, noise,
                {k, TestFunction::bump(1.0, 0.2, 0.2, 0.5, 0.3), EntropyApprox(xi)},
                p);
            worst_lambda = std::min(worst_lambda, val);
            CHECK(val >= -tol::entropy(cfg.dx(p), cfg.dt(p), xi));
        }
    }

    // kato side: ordered data, both variants
    ProblemSpec lo = p;
    lo.initial_data = [](double x) { return 0.6 * std::sin(3.141592653589793 * x); };
    const Trajectory lo_t = solve_path(lo, cfg, noise);
    const Trajectory hi_t = traj;
    for (double radius : {0.45, 0.6}) {
        const KatoReport rep = kato_report(
            hi_t, lo_t, TestFunction::bump(1.0, 0.2, 0.2, 0.5, radius), p);
        CHECK(rep.total() >= -tol::inequality(cfg.dx(p), cfg.dt(p)));
    }
}

TEST_CASE("partial path failures respect the failure policy") {
    // a flux that refuses large states: paths whose jumps push u past the
    // threshold fail, jump-free paths survive
    ProblemSpec p = presets::mixed(0.5);
    p.jump_coef = make_tanh_jump_coefficient(3.0);
    p.diffusion = make_zero_diffusion(); // keep the state from decaying
    p.initial_data = [](double x) { return 0.5 * std::sin(3.141592653589793 * x); };
    p.flux = make_linear_flux(0.5);
    p.flux.kind = FluxModel::Kind::custom; // generic EO path
    auto base_plus = p.flux.components[0].eo_plus;
    p.flux.components[0].eo_plus = [base_plus](double u) {
        if (std::abs(u) > 0.7) throw std::runtime_error("synthetic overload");
        return base_plus(u);
    };

    SolverConfig cfg;
    cfg.epsilon = 0.02;
    cfg.cells = 40;
    cfg.steps = 250;
    auto u0 = p.initial_data;

    FailurePolicy tolerant;
    tolerant.max_failed_fraction = 1.0;
    const auto res = contraction_experiment(p, u0, u0, cfg, 12, 55, 0, 0, tolerant);
    const int failed = static_cast<int>(res.failed_paths.size());
    INFO("failed paths: ", failed);
    CHECK(failed > 0);
    CHECK(failed < 12);
    CHECK(res.paths_succeeded == 12 - failed);

    FailurePolicy strict;
    strict.max_failed_fraction = 0.0;
    CHECK_THROWS_AS(contraction_experiment(p, u0, u0, cfg, 12, 55, 0, 0, strict),
                    NumericalError);
}

TEST_CASE("linear transport: exact translation oracle and conserved difference") {
    // the equation moves mass along +div F, so F(u) = c u translates the
    // profile to x - c t... i.e. leftward for c > 0: u(t, x) = u0(x + c t)
    ProblemSpec p;
    p.horizon = 0.4;
    p.flux = make_linear_flux(0.5);
    p.initial_data = [](double x) {
        const double s = (x - 0.65) / 0.15;
        return std::abs(s) < 1.0 ? std::pow(1.0 - s * s, 4) : 0.0;
    };
    SolverConfig cfg;
    cfg.epsilon = 1e-4;
    cfg.cells = 200;
    cfg.steps = 200;
    const auto noise = zero_noise(cfg.steps, p.horizon);
    const Trajectory traj = solve_path(p, cfg, noise);
    auto uT = traj.state(cfg.steps);
    double err = 0.0;
    for (int i = 0; i < cfg.cells; ++i) {
        const double x = traj.cell_x(i);
        err += std::abs(uT[i] - p.initial_data(x + 0.5 * p.horizon)) * traj.dx();
    }
    CHECK(err < 0.04); // first-order smearing only

    // ordered pair: int (u1 - u2)+ is conserved while the support stays inside
    auto u01 = p.initial_data;
    auto u02 = [u01](double x) { return 0.7 * u01(x); };
    const auto res = contraction_experiment(p, u01, u02, cfg, 2, 3, 1, 20);
    const double tol = tol::inequality(cfg.dx(p), cfg.dt(p));
    for (const auto& pt : res.series) {
        CHECK(std::abs(pt.mean - res.series.front().mean) <= tol);
    }
}
