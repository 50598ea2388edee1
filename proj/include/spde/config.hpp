#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spde/solver.hpp"

namespace spde {

/// Parsed `key = value` run configuration ('#' starts a comment). Unknown keys
/// are rejected with their line number; missing required keys are listed.
struct RunConfig {
    std::string experiment; // entropy | contraction | kato | convergence | apriori

    // problem
    double horizon = 1.0;
    std::string flux = "zero";
    double flux_param = 0.0;
    std::string diffusion = "zero";
    double diffusion_exponent = 2.0;
    double diffusion_clamp = 2.0;
    std::string brownian = "zero";
    double brownian_param = 0.0;
    std::string levy = "zero";
    std::string jump = "zero";
    double lambda_star = 0.0;
    double state_clamp = 2.5;

    // initial data
    std::string u0 = "zero"; // zero | sine | bump | riemann
    double u0_amplitude = 1.0;
    double u0_center = 0.5;
    double u0_radius = 0.2;
    double u0_left = 1.0;
    double u0_right = 0.0;
    double u0_jump_at = 0.3;
    // contraction second run: u02 = u01 - bump(bump_center, bump_radius) * bump_height
    double bump_height = 0.0;
    double bump_center = 0.5;
    double bump_radius = 0.2;

    // solver
    double epsilon = 0.01;
    int cells = 100;
    int steps = 5000;
    std::vector<double> eps_seq; // convergence experiment

    // experiment scale
    int paths = 100;
    std::uint64_t seed = 1;
    int threads = 0;
    int output_every = 0;

    // entropy experiment
    double xi = 0.02;
    std::vector<double> k_values{0.0};

    std::string out_dir = "out";
};

RunConfig parse_run_config(std::istream& is);
RunConfig parse_run_config_file(const std::string& path);

ProblemSpec build_problem(const RunConfig& cfg);
SolverConfig build_solver_config(const RunConfig& cfg);
std::function<double(double)> build_initial_data(const RunConfig& cfg);

struct CliOverrides {
    bool has_seed = false;
    std::uint64_t seed = 0;
    bool has_paths = false;
    int paths = 0;
    bool has_out = false;
    std::string out_dir;
};

/// Runs the configured experiment, writes its CSV artifacts and a summary with
/// one pass/fail line per assertion; returns 0 iff every assertion passed.
int cli_run(const std::string& config_path, const CliOverrides& overrides = {});

const std::vector<std::string>& known_experiments();

} // namespace spde
