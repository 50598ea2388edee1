#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spde/config.hpp"
#include "spde/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spde_lab: stochastic conservation-law experiments"};

    std::string config_path;
    spde::CliOverrides ov;
    std::uint64_t seed = 0;
    int paths = 0;
    std::string out_dir;
    bool list_experiments = false;

    app.add_option("config", config_path, "run configuration (key = value file)");
    auto* seed_opt = app.add_option("--seed", seed, "override the master seed");
    auto* paths_opt = app.add_option("--paths", paths, "override the path count");
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    app.add_flag("--list-experiments", list_experiments, "list experiment kinds");

    CLI11_PARSE(app, argc, argv);

    if (list_experiments) {
        for (const auto& kind : spde::known_experiments()) std::cout << kind << '\n';
        return 0;
    }
    if (config_path.empty()) {
        std::cerr << "error: a config path is required (see --help)\n";
        return 2;
    }

    ov.has_seed = seed_opt->count() > 0;
    ov.seed = seed;
    ov.has_paths = paths_opt->count() > 0;
    ov.paths = paths;
    ov.has_out = out_opt->count() > 0;
    ov.out_dir = out_dir;

    try {
        return spde::cli_run(config_path, ov);
    } catch (const spde::ConfigError& e) {
        if (e.line > 0) {
            std::cerr << "config error (line " << e.line << "): " << e.what() << '\n';
        } else {
            std::cerr << "config error: " << e.what() << '\n';
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
