#include "spde/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "spde/errors.hpp"
#include "spde/harness.hpp"
#include "spde/noise.hpp"
#include "spde/tolerances.hpp"

namespace spde {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + v + "'", line);
    }
}

int parse_int(const std::string& v, int line) {
    const double d = parse_double(v, line);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) {
        throw ConfigError("expected an integer, got '" + v + "'", line);
    }
    return i;
}

std::uint64_t parse_seed(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const std::uint64_t s = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return s;
    } catch (const std::exception&) {
        throw ConfigError("expected an unsigned integer, got '" + v + "'", line);
    }
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line));
    }
    if (out.empty()) throw ConfigError("expected a comma-separated list", line);
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

const std::vector<std::string>& known_experiments() {
    static const std::vector<std::string> kinds{"entropy", "contraction", "kato",
                                                "convergence", "apriori"};
    return kinds;
}

RunConfig parse_run_config(std::istream& is) {
    RunConfig cfg;
    std::map<std::string, std::function<void(const std::string&, int)>> setters;
    auto set_str = [](std::string& dst) {
        return [&dst](const std::string& v, int) { dst = v; };
    };
    auto set_dbl = [](double& dst) {
        return [&dst](const std::string& v, int line) { dst = parse_double(v, line); };
    };
    auto set_int = [](int& dst) {
        return [&dst](const std::string& v, int line) { dst = parse_int(v, line); };
    };

    setters["experiment"] = set_str(cfg.experiment);
    setters["T"] = set_dbl(cfg.horizon);
    setters["flux"] = set_str(cfg.flux);
    setters["flux_param"] = set_dbl(cfg.flux_param);
    setters["diffusion"] = set_str(cfg.diffusion);
    setters["diffusion_exponent"] = set_dbl(cfg.diffusion_exponent);
    setters["diffusion_clamp"] = set_dbl(cfg.diffusion_clamp);
    setters["brownian"] = set_str(cfg.brownian);
    setters["brownian_param"] = set_dbl(cfg.brownian_param);
    setters["levy"] = set_str(cfg.levy);
    setters["jump"] = set_str(cfg.jump);
    setters["lambda_star"] = set_dbl(cfg.lambda_star);
    setters["state_clamp"] = set_dbl(cfg.state_clamp);
    setters["u0"] = set_str(cfg.u0);
    setters["u0_amplitude"] = set_dbl(cfg.u0_amplitude);
    setters["u0_center"] = set_dbl(cfg.u0_center);
    setters["u0_radius"] = set_dbl(cfg.u0_radius);
    setters["u0_left"] = set_dbl(cfg.u0_left);
    setters["u0_right"] = set_dbl(cfg.u0_right);
    setters["u0_jump_at"] = set_dbl(cfg.u0_jump_at);
    setters["bump_height"] = set_dbl(cfg.bump_height);
    setters["bump_center"] = set_dbl(cfg.bump_center);
    setters["bump_radius"] = set_dbl(cfg.bump_radius);
    setters["epsilon"] = set_dbl(cfg.epsilon);
    setters["cells"] = set_int(cfg.cells);
    setters["steps"] = set_int(cfg.steps);
    setters["eps_seq"] = [&cfg](const std::string& v, int line) {
        cfg.eps_seq = parse_list(v, line);
    };
    setters["paths"] = set_int(cfg.paths);
    setters["seed"] = [&cfg](const std::string& v, int line) {
        cfg.seed = parse_seed(v, line);
    };
    setters["threads"] = set_int(cfg.threads);
    setters["output_every"] = set_int(cfg.output_every);
    setters["xi"] = set_dbl(cfg.xi);
    setters["k_values"] = [&cfg](const std::string& v, int line) {
        cfg.k_values = parse_list(v, line);
    };
    setters["out"] = set_str(cfg.out_dir);

    std::string line;
    int line_no = 0;
    bool saw_experiment = false;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
        if (value.empty()) {
            throw ConfigError("empty value for key '" + key + "'", line_no);
        }
        it->second(value, line_no);
        if (key == "experiment") saw_experiment = true;
    }
    if (!saw_experiment) {
        throw ConfigError("missing required key: experiment");
    }
    const auto& kinds = known_experiments();
    if (std::find(kinds.begin(), kinds.end(), cfg.experiment) == kinds.end()) {
        throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    }
    return cfg;
}

RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'");
    return parse_run_config(is);
}

ProblemSpec build_problem(const RunConfig& cfg) {
    ProblemSpec p;
    p.horizon = cfg.horizon;
    p.state_clamp = cfg.state_clamp;

    if (cfg.flux == "zero") p.flux = make_zero_flux();
    else if (cfg.flux == "linear") p.flux = make_linear_flux(cfg.flux_param);
    else if (cfg.flux == "burgers") p.flux = make_burgers_flux(
        cfg.flux_param > 0.0 ? cfg.flux_param : cfg.state_clamp);
    else throw ConfigError("unknown flux '" + cfg.flux + "'");

    if (cfg.diffusion == "zero") p.diffusion = make_zero_diffusion();
    else if (cfg.diffusion == "identity") p.diffusion = make_identity_diffusion();
    else if (cfg.diffusion == "power") {
        p.diffusion = make_power_diffusion(cfg.diffusion_exponent, cfg.diffusion_clamp);
    } else throw ConfigError("unknown diffusion '" + cfg.diffusion + "'");

    if (cfg.brownian == "zero") p.brownian = make_zero_brownian();
    else if (cfg.brownian == "linear") p.brownian = make_linear_brownian(cfg.brownian_param);
    else throw ConfigError("unknown brownian '" + cfg.brownian + "'");

    if (cfg.levy == "zero") p.levy = make_zero_levy();
    else if (cfg.levy == "two_atom") p.levy = make_two_atom_levy();
    else if (cfg.levy == "power") p.levy = make_power_levy();
    else throw ConfigError("unknown levy '" + cfg.levy + "'");

    if (cfg.jump == "zero") p.jump_coef = make_zero_jump_coefficient();
    else if (cfg.jump == "linear") p.jump_coef = make_linear_jump_coefficient(cfg.lambda_star);
    else if (cfg.jump == "tanh") p.jump_coef = make_tanh_jump_coefficient(cfg.lambda_star);
    else throw ConfigError("unknown jump coefficient '" + cfg.jump + "'");

    p.initial_data = build_initial_data(cfg);
    p.validate();
    return p;
}

SolverConfig build_solver_config(const RunConfig& cfg) {
    SolverConfig c;
    c.epsilon = cfg.epsilon;
    c.cells = cfg.cells;
    c.steps = cfg.steps;
    return c;
}

std::function<double(double)> build_initial_data(const RunConfig& cfg) {
    const double amp = cfg.u0_amplitude;
    if (cfg.u0 == "zero") return [](double) { return 0.0; };
    if (cfg.u0 == "sine") {
        return [amp](double x) { return amp * std::sin(3.141592653589793 * x); };
    }
    if (cfg.u0 == "bump") {
        const double c = cfg.u0_center, r = cfg.u0_radius;
        return [amp, c, r](double x) {
            const double s = (x - c) / r;
            if (std::abs(s) >= 1.0) return 0.0;
            const double q = 1.0 - s * s;
            return amp * q * q * q * q;
        };
    }
    if (cfg.u0 == "riemann") {
        const double left = cfg.u0_left, right = cfg.u0_right, at = cfg.u0_jump_at;
        return [left, right, at](double x) { return x < at ? left : right; };
    }
    throw ConfigError("unknown u0 '" + cfg.u0 + "'");
}

namespace {

std::function<double(double)> subtract_bump(std::function<double(double)> base,
                                            double height, double center,
                                            double radius) {
    return [=](double x) {
        const double s = (x - center) / radius;
        double b = 0.0;
        if (std::abs(s) < 1.0) {
            const double q = 1.0 - s * s;
            b = q * q * q * q;
        }
        return base(x) - height * b;
    };
}

struct Summary {
    std::vector<std::pair<bool, std::string>> lines;
    bool all_pass = true;

    void add(bool pass, const std::string& text) {
        lines.push_back({pass, text});
        all_pass = all_pass && pass;
    }
};

void write_summary(const Summary& s, const std::filesystem::path& dir) {
    std::ofstream os(dir / "summary.txt");
    os << "# spde-summary v1\n";
    for (const auto& [pass, text] : s.lines) {
        os << (pass ? "[PASS] " : "[FAIL] ") << text << '\n';
    }
    os << (s.all_pass ? "RESULT: PASS\n" : "RESULT: FAIL\n");
}

std::vector<TestFunction> standard_test_functions(const ProblemSpec& p, bool interior) {
    const double mid = 0.5 * (p.domain.x0 + p.domain.x1);
    const double len = p.domain.length();
    std::vector<TestFunction> out;
    out.push_back(TestFunction::bump(1.0, 0.45 * p.horizon, 0.45 * p.horizon, mid,
                                     interior ? 0.35 * len : 0.55 * len));
    out.push_back(TestFunction::bump(1.0, 0.3 * p.horizon, 0.3 * p.horizon,
                                     mid - 0.1 * len,
                                     interior ? 0.25 * len : 0.5 * len));
    out.push_back(TestFunction::bump(0.5, 0.5 * p.horizon, 0.4 * p.horizon,
                                     mid + 0.12 * len,
                                     interior ? 0.3 * len : 0.45 * len));
    return out;
}

int run_entropy(const RunConfig& cfg, const std::filesystem::path& dir) {
    const ProblemSpec problem = build_problem(cfg);
    const SolverConfig solver = build_solver_config(cfg);
    const double tol = tol::entropy(solver.dx(problem), solver.dt(problem), cfg.xi);

    std::ofstream os(dir / "entropy_report.csv");
    os << "# spde-entropy-report v1\n";
    os << "triple,k,psi,mean,half_width,p05,tol,pass\n";

    Summary summary;
    const auto psis = standard_test_functions(problem, true);
    int triple_id = 0;
    for (double k : cfg.k_values) {
        for (std::size_t j = 0; j < 2 && j < psis.size(); ++j) {
            AdmissibleTriple triple{k, psis[j], EntropyApprox(cfg.xi)};
            const auto res = mc_entropy_check(problem, solver, triple, cfg.paths,
                                              cfg.seed, cfg.threads);
            for (std::uint64_t failed : res.failed_paths) {
                // archive the offending noise realization for replay
                const NoisePath bad = sample_noise_path(
                    problem.levy, problem.horizon, solver.steps, cfg.seed, failed);
                std::ofstream bad_os(dir / ("failed_path_" + std::to_string(failed) +
                                            ".csv"));
                save_noise_path(bad, bad_os);
            }
            const bool mean_ok = res.mean + res.half_width_95 >= -tol;
            const bool tail_ok = res.p05 >= -5.0 * tol;
            const bool pass = mean_ok && tail_ok && res.failed_paths.empty();
            os << triple_id << ',' << fmt(k) << ',' << j << ',' << fmt(res.mean) << ','
               << fmt(res.half_width_95) << ',' << fmt(res.p05) << ',' << fmt(tol)
               << ',' << (pass ? "pass" : "fail") << '\n';
            summary.add(pass, "entropy triple " + std::to_string(triple_id) +
                                  " (k=" + fmt(k) + "): mean=" + fmt(res.mean) +
                                  " hw=" + fmt(res.half_width_95) +
                                  " p05=" + fmt(res.p05) + " tol=" + fmt(tol));
            ++triple_id;
        }
    }
    write_summary(summary, dir);
    return summary.all_pass ? 0 : 1;
}

int run_contraction(const RunConfig& cfg, const std::filesystem::path& dir) {
    const ProblemSpec problem = build_problem(cfg);
    const SolverConfig solver = build_solver_config(cfg);
    const auto u01 = build_initial_data(cfg);
    const auto u02 =
        subtract_bump(u01, cfg.bump_height, cfg.bump_center, cfg.bump_radius);

    const auto res =
        contraction_experiment(problem, u01, u02, solver, cfg.paths, cfg.seed,
                               cfg.threads, cfg.output_every);

    std::ofstream os(dir / "contraction_series.csv");
    os << "# spde-series v1\n";
    os << "t,mean,half_width\n";
    for (const auto& pt : res.series) {
        os << fmt(pt.t) << ',' << fmt(pt.mean) << ',' << fmt(pt.half_width) << '\n';
    }

    Summary summary;
    const double base_tol = tol::inequality(solver.dx(problem), solver.dt(problem));
    bool monotone = true;
    for (const auto& pt : res.series) {
        if (pt.mean > res.series.front().mean + base_tol + pt.half_width) {
            monotone = false;
        }
    }
    summary.add(monotone, "contraction: mean(t) <= mean(0) + tol at all output times");
    if (cfg.bump_height == 0.0) {
        const bool zero = std::all_of(res.series.begin(), res.series.end(),
                                      [](const SeriesPoint& p) { return p.mean == 0.0; });
        summary.add(zero, "contraction control: identical data gives exactly zero");
    }
    summary.add(res.failed_paths.empty(),
                "contraction: all paths solved (failed=" +
                    std::to_string(res.failed_paths.size()) + ")");
    write_summary(summary, dir);
    return summary.all_pass ? 0 : 1;
}

int run_kato(const RunConfig& cfg, const std::filesystem::path& dir) {
    const ProblemSpec problem = build_problem(cfg);
    const SolverConfig solver = build_solver_config(cfg);
    const auto u01 = build_initial_data(cfg);
    const auto u02 =
        subtract_bump(u01, cfg.bump_height, cfg.bump_center, cfg.bump_radius);

    ProblemSpec p1 = problem;
    p1.initial_data = u01;
    ProblemSpec p2 = problem;
    p2.initial_data = u02;
    const NoisePath noise =
        sample_noise_path(problem.levy, problem.horizon, solver.steps, cfg.seed, 0);
    const Trajectory t1 = solve_path(p1, solver, noise);
    const Trajectory t2 = solve_path(p2, solver, noise);
    {
        std::ofstream traj_os(dir / "trajectory_u.csv");
        save_trajectory(t1, traj_os, std::max(1, solver.steps / 50));
        std::ofstream traj_os2(dir / "trajectory_v.csv");
        save_trajectory(t2, traj_os2, std::max(1, solver.steps / 50));
    }

    std::ofstream os(dir / "kato.csv");
    os << "# spde-kato v1\n";
    os << "psi,variant,term,value\n";

    Summary summary;
    const double tol = tol::inequality(solver.dx(problem), solver.dt(problem));
    const auto global_psis = standard_test_functions(problem, false);
    const auto local_psis = standard_test_functions(problem, true);
    for (std::size_t j = 0; j < global_psis.size(); ++j) {
        for (int variant = 0; variant < 2; ++variant) {
            const auto& psi = variant == 0 ? global_psis[j] : local_psis[j];
            const char* vname = variant == 0 ? "global" : "local";
            const KatoReport rep = kato_report(t1, t2, psi, problem);
            os << j << ',' << vname << ",time," << fmt(rep.time_term) << '\n';
            os << j << ',' << vname << ",flux," << fmt(rep.flux_term) << '\n';
            os << j << ',' << vname << ",diffusion," << fmt(rep.diffusion_term) << '\n';
            os << j << ',' << vname << ",initial," << fmt(rep.initial_term) << '\n';
            os << j << ',' << vname << ",total," << fmt(rep.total()) << '\n';
            summary.add(rep.total() >= -tol,
                        std::string("kato ") + vname + " psi" + std::to_string(j) +
                            ": total=" + fmt(rep.total()) + " tol=" + fmt(tol));
        }
    }
    write_summary(summary, dir);
    return summary.all_pass ? 0 : 1;
}

int run_convergence(const RunConfig& cfg, const std::filesystem::path& dir) {
    if (cfg.eps_seq.size() < 3) {
        throw ConfigError("convergence experiment requires eps_seq with >= 3 entries");
    }
    const ProblemSpec problem = build_problem(cfg);
    const SolverConfig solver = build_solver_config(cfg);
    const auto rows = viscosity_convergence(problem, cfg.eps_seq, solver, cfg.paths,
                                            cfg.seed, cfg.threads);

    std::ofstream os(dir / "convergence_table.csv");
    os << "# spde-table v1\n";
    os << "eps_i,eps_j,diff_p1,diff_p2\n";
    for (const auto& r : rows) {
        os << fmt(r.eps_hi) << ',' << fmt(r.eps_lo) << ',' << fmt(r.diff_p1) << ','
           << fmt(r.diff_p2) << '\n';
    }

    Summary summary;
    bool decreasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].diff_p1 < rows[i - 1].diff_p1)) decreasing = false;
    }
    summary.add(decreasing, "convergence: pairwise L1 differences strictly decreasing");
    write_summary(summary, dir);
    return summary.all_pass ? 0 : 1;
}

int run_apriori(const RunConfig& cfg, const std::filesystem::path& dir) {
    const ProblemSpec problem = build_problem(cfg);
    std::vector<double> eps_list = cfg.eps_seq;
    if (eps_list.empty()) eps_list.push_back(cfg.epsilon);

    std::ofstream os(dir / "apriori_stats.csv");
    os << "# spde-apriori v1\n";
    os << "epsilon,sup_E_l2_sq,eps_grad_sq_int,kirchhoff_grad_sq_int\n";

    std::vector<AprioriStatistics> all;
    std::ofstream record(dir / "apriori_records.txt");
    record << "# spde-apriori-records v1\n";
    for (double eps : eps_list) {
        SolverConfig solver = build_solver_config(cfg);
        solver.epsilon = eps;
        const auto stats =
            apriori_experiment(problem, solver, cfg.paths, cfg.seed, cfg.threads);
        os << fmt(eps) << ',' << fmt(stats.sup_expected_l2_sq) << ','
           << fmt(stats.eps_grad_sq_time_integral) << ','
           << fmt(stats.kirchhoff_grad_sq_time_integral) << '\n';
        record << "epsilon " << fmt(eps) << ": " << format_statistics_record(stats)
               << '\n';
        all.push_back(stats);
    }

    Summary summary;
    if (all.size() >= 2) {
        double lo = all.front().total(), hi = all.front().total();
        for (const auto& s : all) {
            lo = std::min(lo, s.total());
            hi = std::max(hi, s.total());
        }
        summary.add(hi <= 1.25 * lo,
                    "apriori: totals across epsilons within 1.25x (min=" + fmt(lo) +
                        " max=" + fmt(hi) + ")");
    } else {
        summary.add(true, "apriori: single epsilon, no cross-epsilon assertion");
    }
    write_summary(summary, dir);
    return summary.all_pass ? 0 : 1;
}

} // namespace

int cli_run(const std::string& config_path, const CliOverrides& overrides) {
    RunConfig cfg = parse_run_config_file(config_path);
    if (overrides.has_seed) cfg.seed = overrides.seed;
    if (overrides.has_paths) cfg.paths = overrides.paths;
    if (overrides.has_out) cfg.out_dir = overrides.out_dir;

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);

    if (cfg.experiment == "entropy") return run_entropy(cfg, dir);
    if (cfg.experiment == "contraction") return run_contraction(cfg, dir);
    if (cfg.experiment == "kato") return run_kato(cfg, dir);
    if (cfg.experiment == "convergence") return run_convergence(cfg, dir);
    if (cfg.experiment == "apriori") return run_apriori(cfg, dir);
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

} // namespace spde
